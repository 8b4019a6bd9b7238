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

#include "scenetext/nn/lstm.hpp"

#include <cmath>

#include "scenetext/errors.hpp"
#include "scenetext/nn/layers.hpp"

namespace scenetext::nn {

LstmCell LstmCell::init(std::size_t input_size, std::size_t hidden,
                        Rng& rng) {
  if (input_size == 0 || hidden == 0) {
    throw InvalidArgument("lstm: input size and hidden width must be > 0");
  }
  LstmCell cell;
  cell.w_input =
      glorot_uniform({4 * hidden, input_size}, input_size, hidden, rng);
  cell.w_recurrent = glorot_uniform({4 * hidden, hidden}, hidden, hidden, rng);
  cell.bias = Tensor({4 * hidden});
  return cell;
}

LstmCell LstmCell::from_params(const LayerParams& params) {
  if (params.kind != LayerKind::kLstm || params.tensors.size() != 3) {
    throw InvalidArgument("lstm: malformed layer parameters");
  }
  LstmCell cell{params.tensors[0], params.tensors[1], params.tensors[2]};
  const int hidden = params.hyper_at("hidden");
  if (hidden <= 0 || cell.w_input.rank() != 2 ||
      cell.w_recurrent.rank() != 2 || cell.bias.rank() != 1) {
    throw InvalidArgument("lstm: inconsistent weight shapes");
  }
  const auto h = static_cast<std::size_t>(hidden);
  if (cell.w_input.dim(0) != 4 * h ||
      cell.w_recurrent.shape() != std::vector<std::size_t>{4 * h, h} ||
      cell.bias.dim(0) != 4 * h) {
    throw InvalidArgument("lstm: inconsistent weight shapes");
  }
  return cell;
}

LayerParams LstmCell::to_params() const {
  return LayerParams{LayerKind::kLstm,
                     {{"hidden", static_cast<int>(hidden_size())}},
                     {w_input, w_recurrent, bias}};
}

LstmCell LstmCell::zeros_like() const {
  return LstmCell{Tensor::zeros_like(w_input),
                  Tensor::zeros_like(w_recurrent), Tensor::zeros_like(bias)};
}

LstmCell::State LstmCell::step(const Tensor& x, const State& prev) const {
  Cache unused;
  return step(x, prev, unused);
}

LstmCell::State LstmCell::step(const Tensor& x, const State& prev,
                               Cache& cache) const {
  const std::size_t D = input_size();
  const std::size_t H = hidden_size();
  if (x.size() != D || prev.h.size() != H || prev.c.size() != H) {
    throw InvalidArgument("lstm step: expected x[" + std::to_string(D) +
                          "], h/c[" + std::to_string(H) + "], got " +
                          shape_string(x.shape()) + ", " +
                          shape_string(prev.h.shape()) + ", " +
                          shape_string(prev.c.shape()));
  }
  Tensor gates({4 * H});
  const double* wx = w_input.data().data();
  const double* wh = w_recurrent.data().data();
  for (std::size_t r = 0; r < 4 * H; ++r) {
    double acc = bias[r];
    const double* wxr = wx + r * D;
    for (std::size_t j = 0; j < D; ++j) acc += wxr[j] * x[j];
    const double* whr = wh + r * H;
    for (std::size_t j = 0; j < H; ++j) acc += whr[j] * prev.h[j];
    gates[r] = acc;
  }
  for (std::size_t j = 0; j < H; ++j) {
    gates[j] = sigmoid(gates[j]);                  // i
    gates[H + j] = sigmoid(gates[H + j]);          // f
    gates[2 * H + j] = std::tanh(gates[2 * H + j]);  // g
    gates[3 * H + j] = sigmoid(gates[3 * H + j]);  // o
  }
  State next{Tensor({H}), Tensor({H})};
  Tensor tanh_c({H});
  for (std::size_t j = 0; j < H; ++j) {
    next.c[j] = gates[H + j] * prev.c[j] + gates[j] * gates[2 * H + j];
    tanh_c[j] = std::tanh(next.c[j]);
    next.h[j] = gates[3 * H + j] * tanh_c[j];
  }
  cache.x = x;
  cache.h_prev = prev.h;
  cache.c_prev = prev.c;
  cache.gates = std::move(gates);
  cache.tanh_c = std::move(tanh_c);
  return next;
}

LstmCell::StepGrads LstmCell::backward(const Cache& cache,
                                       const Tensor& grad_h,
                                       const Tensor& grad_c,
                                       LstmCell& grads) const {
  if (cache.gates.empty()) {
    throw StateError("lstm backward called without a cached forward pass");
  }
  const std::size_t D = input_size();
  const std::size_t H = hidden_size();
  const Tensor& gt = cache.gates;
  Tensor pre({4 * H});  // gradient wrt gate pre-activations
  StepGrads out{Tensor({D}), Tensor({H}), Tensor({H})};
  for (std::size_t j = 0; j < H; ++j) {
    const double i = gt[j], f = gt[H + j], g = gt[2 * H + j],
                 o = gt[3 * H + j];
    const double tc = cache.tanh_c[j];
    const double dc = grad_c[j] + grad_h[j] * o * (1.0 - tc * tc);
    pre[j] = dc * g * i * (1.0 - i);
    pre[H + j] = dc * cache.c_prev[j] * f * (1.0 - f);
    pre[2 * H + j] = dc * i * (1.0 - g * g);
    pre[3 * H + j] = grad_h[j] * tc * o * (1.0 - o);
    out.c_prev[j] = dc * f;
  }
  const double* wx = w_input.data().data();
  const double* wh = w_recurrent.data().data();
  double* gwx = grads.w_input.data().data();
  double* gwh = grads.w_recurrent.data().data();
  for (std::size_t r = 0; r < 4 * H; ++r) {
    const double d = pre[r];
    if (d == 0.0) continue;
    grads.bias[r] += d;
    const double* wxr = wx + r * D;
    double* gwxr = gwx + r * D;
    for (std::size_t j = 0; j < D; ++j) {
      gwxr[j] += d * cache.x[j];
      out.x[j] += d * wxr[j];
    }
    const double* whr = wh + r * H;
    double* gwhr = gwh + r * H;
    for (std::size_t j = 0; j < H; ++j) {
      gwhr[j] += d * cache.h_prev[j];
      out.h_prev[j] += d * whr[j];
    }
  }
  return out;
}

Tensor lstm_sequence_forward(const LstmCell& cell, const Tensor& frames,
                             bool reverse, LstmSequenceCache* cache) {
  if (frames.rank() != 2 || frames.dim(1) != cell.input_size()) {
    throw InvalidArgument("lstm sequence: expected frames [T," +
                          std::to_string(cell.input_size()) + "], got " +
                          shape_string(frames.shape()));
  }
  const std::size_t T = frames.dim(0);
  const std::size_t D = frames.dim(1);
  const std::size_t H = cell.hidden_size();
  Tensor outputs({T, H});
  if (cache) {
    cache->steps.assign(T, {});
    cache->reverse = reverse;
  }
  LstmCell::State state = cell.zero_state();
  for (std::size_t n = 0; n < T; ++n) {
    const std::size_t t = reverse ? T - 1 - n : n;
    Tensor x({D}, std::vector<double>(frames.data().begin() + t * D,
                                      frames.data().begin() + (t + 1) * D));
    state = cache ? cell.step(x, state, cache->steps[t]) : cell.step(x, state);
    std::copy(state.h.data().begin(), state.h.data().end(),
              outputs.data().begin() + t * H);
  }
  return outputs;
}

Tensor lstm_sequence_backward(const LstmCell& cell,
                              const LstmSequenceCache& cache,
                              const Tensor& grad_outputs, LstmCell& grads) {
  const std::size_t T = cache.steps.size();
  const std::size_t D = cell.input_size();
  const std::size_t H = cell.hidden_size();
  if (T == 0) {
    throw StateError("lstm sequence backward without a cached forward pass");
  }
  grad_outputs.expect_shape({T, H}, "lstm sequence backward");
  Tensor grad_frames({T, D});
  Tensor dh({H}), dc({H});
  for (std::size_t n = 0; n < T; ++n) {
    // walk steps in reverse processing order
    const std::size_t t = cache.reverse ? n : T - 1 - n;
    for (std::size_t j = 0; j < H; ++j) dh[j] += grad_outputs.at(t, j);
    auto g = cell.backward(cache.steps[t], dh, dc, grads);
    std::copy(g.x.data().begin(), g.x.data().end(),
              grad_frames.data().begin() + t * D);
    dh = std::move(g.h_prev);
    dc = std::move(g.c_prev);
  }
  return grad_frames;
}

}  // namespace scenetext::nn
