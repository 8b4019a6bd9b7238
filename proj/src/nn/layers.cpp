/* Copyright 2026 The Scenetext Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "scenetext/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scenetext/errors.hpp"

namespace scenetext::nn {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2d:
      return "conv2d";
    case LayerKind::kLinear:
      return "linear";
    case LayerKind::kLstm:
      return "lstm";
  }
  return "unknown";
}

LayerKind layer_kind_from_string(const std::string& name) {
  if (name == "conv2d") return LayerKind::kConv2d;
  if (name == "linear") return LayerKind::kLinear;
  if (name == "lstm") return LayerKind::kLstm;
  throw InvalidArgument("unknown layer kind '" + name + "'");
}

int LayerParams::hyper_at(const std::string& key) const {
  auto it = hyper.find(key);
  if (it == hyper.end()) {
    throw InvalidArgument(to_string(kind) + " layer lacks hyperparameter '" +
                          key + "'");
  }
  return it->second;
}

Tensor glorot_uniform(std::vector<std::size_t> shape, std::size_t fan_in,
                      std::size_t fan_out, Rng& rng) {
  Tensor t(std::move(shape));
  const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.data()) v = rng.uniform(-s, s);
  return t;
}

void check_finite(const Tensor& t, const char* layer) {
  if (!t.all_finite()) {
    throw NumericError(std::string("non-finite activation in layer ") + layer);
  }
}

// ---------------------------------------------------------------- Conv2d

Conv2d Conv2d::init(std::size_t in_channels, std::size_t out_channels,
                    std::size_t kernel_h, std::size_t kernel_w, int stride,
                    int pad_h, int pad_w, Rng& rng) {
  if (stride < 1 || pad_h < 0 || pad_w < 0) {
    throw InvalidArgument("conv2d: stride must be >= 1 and padding >= 0");
  }
  Conv2d conv;
  conv.weight =
      glorot_uniform({out_channels, in_channels, kernel_h, kernel_w},
                     in_channels * kernel_h * kernel_w,
                     out_channels * kernel_h * kernel_w, rng);
  conv.bias = Tensor({out_channels});
  conv.stride = stride;
  conv.pad_h = pad_h;
  conv.pad_w = pad_w;
  return conv;
}

Conv2d Conv2d::from_params(const LayerParams& params) {
  if (params.kind != LayerKind::kConv2d || params.tensors.size() != 2) {
    throw InvalidArgument("conv2d: malformed layer parameters");
  }
  Conv2d conv;
  conv.weight = params.tensors[0];
  conv.bias = params.tensors[1];
  conv.stride = params.hyper_at("stride");
  conv.pad_h = params.hyper_at("pad_h");
  conv.pad_w = params.hyper_at("pad_w");
  if (conv.weight.rank() != 4 || conv.bias.rank() != 1 ||
      conv.bias.dim(0) != conv.weight.dim(0) || conv.stride < 1 ||
      conv.pad_h < 0 || conv.pad_w < 0) {
    throw InvalidArgument("conv2d: inconsistent weight shapes");
  }
  return conv;
}

LayerParams Conv2d::to_params() const {
  return LayerParams{LayerKind::kConv2d,
                     {{"stride", stride}, {"pad_h", pad_h}, {"pad_w", pad_w}},
                     {weight, bias}};
}

Conv2d Conv2d::zeros_like() const {
  Conv2d z = *this;
  z.weight = Tensor::zeros_like(weight);
  z.bias = Tensor::zeros_like(bias);
  return z;
}

Tensor Conv2d::forward(const Tensor& input) const {
  Cache unused;
  return forward(input, unused);
}

Tensor Conv2d::forward(const Tensor& input, Cache& cache) const {
  if (input.rank() != 3 || input.dim(0) != in_channels()) {
    throw InvalidArgument("conv2d: expected input [" +
                          std::to_string(in_channels()) + ",H,W], got " +
                          shape_string(input.shape()));
  }
  const long H = static_cast<long>(input.dim(1));
  const long W = static_cast<long>(input.dim(2));
  const long kh = static_cast<long>(kernel_h());
  const long kw = static_cast<long>(kernel_w());
  const long padded_h = H + 2 * pad_h;
  const long padded_w = W + 2 * pad_w;
  if (kh > padded_h || kw > padded_w) {
    throw InvalidArgument("conv2d: kernel larger than padded input " +
                          shape_string(input.shape()));
  }
  const long out_h = (padded_h - kh) / stride + 1;
  const long out_w = (padded_w - kw) / stride + 1;
  const std::size_t cin = in_channels();
  const std::size_t cout = out_channels();

  Tensor out({cout, static_cast<std::size_t>(out_h),
              static_cast<std::size_t>(out_w)});
  const double* in = input.data().data();
  const double* w = weight.data().data();
  double* o = out.data().data();

  for (std::size_t co = 0; co < cout; ++co) {
    double* oc = o + co * out_h * out_w;
    std::fill(oc, oc + out_h * out_w, bias[co]);
    for (std::size_t ci = 0; ci < cin; ++ci) {
      const double* ic = in + ci * H * W;
      for (long ky = 0; ky < kh; ++ky) {
        for (long kx = 0; kx < kw; ++kx) {
          const double wv = w[((co * cin + ci) * kh + ky) * kw + kx];
          if (wv == 0.0) continue;
          for (long oy = 0; oy < out_h; ++oy) {
            const long iy = oy * stride + ky - pad_h;
            if (iy < 0 || iy >= H) continue;
            const double* irow = ic + iy * W;
            double* orow = oc + oy * out_w;
            if (stride == 1) {
              // valid ox range: 0 <= ox + kx - pad_w < W
              const long lo = std::max(0L, pad_w - kx);
              const long hi = std::min(out_w, W + pad_w - kx);
              const double* src = irow + (kx - pad_w);
              for (long ox = lo; ox < hi; ++ox) orow[ox] += wv * src[ox];
            } else {
              for (long ox = 0; ox < out_w; ++ox) {
                const long ix = ox * stride + kx - pad_w;
                if (ix >= 0 && ix < W) orow[ox] += wv * irow[ix];
              }
            }
          }
        }
      }
    }
  }
  cache.input = input;
  return out;
}

Tensor Conv2d::backward(const Cache& cache, const Tensor& grad_out,
                        Conv2d& grads) const {
  if (cache.input.empty()) {
    throw StateError("conv2d backward called without a cached forward pass");
  }
  const Tensor& input = cache.input;
  const long H = static_cast<long>(input.dim(1));
  const long W = static_cast<long>(input.dim(2));
  const long kh = static_cast<long>(kernel_h());
  const long kw = static_cast<long>(kernel_w());
  const long out_h = (H + 2 * pad_h - kh) / stride + 1;
  const long out_w = (W + 2 * pad_w - kw) / stride + 1;
  const std::size_t cin = in_channels();
  const std::size_t cout = out_channels();
  grad_out.expect_shape({cout, static_cast<std::size_t>(out_h),
                         static_cast<std::size_t>(out_w)},
                        "conv2d backward grad_out");
  grads.weight.expect_shape(weight.shape(), "conv2d grads");

  Tensor grad_in = Tensor::zeros_like(input);
  const double* in = input.data().data();
  const double* w = weight.data().data();
  const double* g = grad_out.data().data();
  double* gi = grad_in.data().data();
  double* gw = grads.weight.data().data();

  for (std::size_t co = 0; co < cout; ++co) {
    const double* gc = g + co * out_h * out_w;
    double bsum = 0.0;
    for (long i = 0; i < out_h * out_w; ++i) bsum += gc[i];
    grads.bias[co] += bsum;
    for (std::size_t ci = 0; ci < cin; ++ci) {
      const double* ic = in + ci * H * W;
      double* gic = gi + ci * H * W;
      for (long ky = 0; ky < kh; ++ky) {
        for (long kx = 0; kx < kw; ++kx) {
          const std::size_t widx = ((co * cin + ci) * kh + ky) * kw + kx;
          const double wv = w[widx];
          double wsum = 0.0;
          for (long oy = 0; oy < out_h; ++oy) {
            const long iy = oy * stride + ky - pad_h;
            if (iy < 0 || iy >= H) continue;
            const double* irow = ic + iy * W;
            double* girow = gic + iy * W;
            const double* grow = gc + oy * out_w;
            if (stride == 1) {
              const long lo = std::max(0L, pad_w - kx);
              const long hi = std::min(out_w, W + pad_w - kx);
              const long shift = kx - pad_w;
              for (long ox = lo; ox < hi; ++ox) {
                wsum += grow[ox] * irow[ox + shift];
                girow[ox + shift] += wv * grow[ox];
              }
            } else {
              for (long ox = 0; ox < out_w; ++ox) {
                const long ix = ox * stride + kx - pad_w;
                if (ix < 0 || ix >= W) continue;
                wsum += grow[ox] * irow[ix];
                girow[ix] += wv * grow[ox];
              }
            }
          }
          gw[widx] += wsum;
        }
      }
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------- Linear

Linear Linear::init(std::size_t in, std::size_t out, Rng& rng) {
  Linear lin;
  lin.weight = glorot_uniform({out, in}, in, out, rng);
  lin.bias = Tensor({out});
  return lin;
}

Linear Linear::from_params(const LayerParams& params) {
  if (params.kind != LayerKind::kLinear || params.tensors.size() != 2) {
    throw InvalidArgument("linear: malformed layer parameters");
  }
  Linear lin;
  lin.weight = params.tensors[0];
  lin.bias = params.tensors[1];
  if (lin.weight.rank() != 2 || lin.bias.rank() != 1 ||
      lin.bias.dim(0) != lin.weight.dim(0)) {
    throw InvalidArgument("linear: inconsistent weight shapes");
  }
  return lin;
}

LayerParams Linear::to_params() const {
  return LayerParams{LayerKind::kLinear, {}, {weight, bias}};
}

Linear Linear::zeros_like() const {
  return Linear{Tensor::zeros_like(weight), Tensor::zeros_like(bias)};
}

Tensor Linear::forward(const Tensor& input) const {
  Cache unused;
  return forward(input, unused);
}

Tensor Linear::forward(const Tensor& input, Cache& cache) const {
  const std::size_t in = in_features();
  const std::size_t out = out_features();
  const bool vector_input = input.rank() == 1;
  if (!(vector_input && input.dim(0) == in) &&
      !(input.rank() == 2 && input.dim(1) == in)) {
    throw InvalidArgument("linear: expected input with " + std::to_string(in) +
                          " features, got " + shape_string(input.shape()));
  }
  const std::size_t rows = vector_input ? 1 : input.dim(0);
  Tensor result = vector_input ? Tensor({out}) : Tensor({rows, out});
  const double* x = input.data().data();
  const double* w = weight.data().data();
  double* y = result.data().data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = x + r * in;
    double* yr = y + r * out;
    for (std::size_t o = 0; o < out; ++o) {
      const double* wr = w + o * in;
      double acc = bias[o];
      for (std::size_t i = 0; i < in; ++i) acc += wr[i] * xr[i];
      yr[o] = acc;
    }
  }
  cache.input = input;
  return result;
}

Tensor Linear::backward(const Cache& cache, const Tensor& grad_out,
                        Linear& grads) const {
  if (cache.input.empty()) {
    throw StateError("linear backward called without a cached forward pass");
  }
  const std::size_t in = in_features();
  const std::size_t out = out_features();
  const std::size_t rows = cache.input.rank() == 1 ? 1 : cache.input.dim(0);
  if (grad_out.size() != rows * out) {
    throw InvalidArgument("linear backward: grad_out shape " +
                          shape_string(grad_out.shape()));
  }
  grads.weight.expect_shape(weight.shape(), "linear grads");
  Tensor grad_in = Tensor::zeros_like(cache.input);
  const double* x = cache.input.data().data();
  const double* w = weight.data().data();
  const double* g = grad_out.data().data();
  double* gx = grad_in.data().data();
  double* gw = grads.weight.data().data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = x + r * in;
    const double* gr = g + r * out;
    double* gxr = gx + r * in;
    for (std::size_t o = 0; o < out; ++o) {
      const double go = gr[o];
      if (go == 0.0) continue;
      grads.bias[o] += go;
      const double* wr = w + o * in;
      double* gwr = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        gwr[i] += go * xr[i];
        gxr[i] += go * wr[i];
      }
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------- MaxPool2d

Tensor MaxPool2d::forward(const Tensor& input) const {
  Cache unused;
  return forward(input, unused);
}

Tensor MaxPool2d::forward(const Tensor& input, Cache& cache) const {
  if (input.rank() != 3) {
    throw InvalidArgument("maxpool: expected [C,H,W], got " +
                          shape_string(input.shape()));
  }
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  const std::size_t ph = pool_h, pw = pool_w;
  const std::size_t oh = H / ph, ow = W / pw;
  if (oh == 0 || ow == 0) {
    throw InvalidArgument("maxpool: input " + shape_string(input.shape()) +
                          " smaller than window");
  }
  Tensor out({C, oh, ow});
  cache.input_shape = input.shape();
  cache.argmax.assign(C * oh * ow, 0);
  const double* in = input.data().data();
  std::size_t k = 0;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox, ++k) {
        std::size_t best = (c * H + oy * ph) * W + ox * pw;
        double best_v = in[best];
        for (std::size_t dy = 0; dy < ph; ++dy) {
          for (std::size_t dx = 0; dx < pw; ++dx) {
            const std::size_t idx = (c * H + oy * ph + dy) * W + ox * pw + dx;
            if (in[idx] > best_v) {
              best_v = in[idx];
              best = idx;
            }
          }
        }
        out[k] = best_v;
        cache.argmax[k] = best;
      }
    }
  }
  return out;
}

Tensor MaxPool2d::backward(const Cache& cache, const Tensor& grad_out) const {
  if (cache.input_shape.empty()) {
    throw StateError("maxpool backward called without a cached forward pass");
  }
  if (grad_out.size() != cache.argmax.size()) {
    throw InvalidArgument("maxpool backward: grad_out shape " +
                          shape_string(grad_out.shape()));
  }
  Tensor grad_in(cache.input_shape);
  for (std::size_t k = 0; k < cache.argmax.size(); ++k) {
    grad_in[cache.argmax[k]] += grad_out[k];
  }
  return grad_in;
}

// ---------------------------------------------------------------- Upsample2x

Tensor Upsample2x::forward(const Tensor& input) const {
  if (input.rank() != 3) {
    throw InvalidArgument("upsample: expected [C,H,W], got " +
                          shape_string(input.shape()));
  }
  const std::size_t C = input.dim(0), H = input.dim(1), W = input.dim(2);
  Tensor out({C, 2 * H, 2 * W});
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t y = 0; y < 2 * H; ++y) {
      for (std::size_t x = 0; x < 2 * W; ++x) {
        out.at(c, y, x) = input.at(c, y / 2, x / 2);
      }
    }
  }
  return out;
}

Tensor Upsample2x::backward(const Tensor& grad_out) const {
  if (grad_out.rank() != 3 || grad_out.dim(1) % 2 || grad_out.dim(2) % 2) {
    throw InvalidArgument("upsample backward: grad_out shape " +
                          shape_string(grad_out.shape()));
  }
  const std::size_t C = grad_out.dim(0);
  const std::size_t H = grad_out.dim(1) / 2, W = grad_out.dim(2) / 2;
  Tensor grad_in({C, H, W});
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t y = 0; y < 2 * H; ++y) {
      for (std::size_t x = 0; x < 2 * W; ++x) {
        grad_in.at(c, y / 2, x / 2) += grad_out.at(c, y, x);
      }
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------- Relu

Tensor Relu::forward(const Tensor& input) const {
  Tensor out = input;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor Relu::forward(const Tensor& input, Cache& cache) const {
  cache.input = input;
  return forward(input);
}

Tensor Relu::backward(const Cache& cache, const Tensor& grad_out) const {
  if (cache.input.empty()) {
    throw StateError("relu backward called without a cached forward pass");
  }
  grad_out.expect_shape(cache.input.shape(), "relu backward");
  Tensor grad_in = grad_out;
  for (std::size_t i = 0; i < grad_in.size(); ++i) {
    if (!(cache.input[i] > 0.0)) grad_in[i] = 0.0;
  }
  return grad_in;
}

// ---------------------------------------------------------------- softmax

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data()) v = sigmoid(v);
  return out;
}

namespace {

template <typename RowFn>
Tensor map_rows(const Tensor& t, RowFn fn) {
  if (t.rank() != 1 && t.rank() != 2) {
    throw InvalidArgument("softmax: expected rank 1 or 2, got " +
                          shape_string(t.shape()));
  }
  const std::size_t cols = t.shape().back();
  const std::size_t rows = t.size() / cols;
  Tensor out = t;
  for (std::size_t r = 0; r < rows; ++r) {
    fn(std::span<double>(out.data().subspan(r * cols, cols)));
  }
  return out;
}

}  // namespace

Tensor softmax(const Tensor& logits) {
  return map_rows(logits, [](std::span<double> row) {
    const double m = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - m);
      sum += v;
    }
    for (double& v : row) v /= sum;
  });
}

Tensor log_softmax(const Tensor& logits) {
  return map_rows(logits, [](std::span<double> row) {
    const double m = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double v : row) sum += std::exp(v - m);
    const double lse = m + std::log(sum);
    for (double& v : row) v -= lse;
  });
}

Tensor softmax_backward(const Tensor& y, const Tensor& grad_y) {
  grad_y.expect_shape(y.shape(), "softmax backward");
  const std::size_t cols = y.shape().back();
  const std::size_t rows = y.size() / cols;
  Tensor grad_x = Tensor::zeros_like(y);
  for (std::size_t r = 0; r < rows; ++r) {
    double dot = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      dot += y[r * cols + k] * grad_y[r * cols + k];
    }
    for (std::size_t k = 0; k < cols; ++k) {
      grad_x[r * cols + k] = y[r * cols + k] * (grad_y[r * cols + k] - dot);
    }
  }
  return grad_x;
}

}  // namespace scenetext::nn
