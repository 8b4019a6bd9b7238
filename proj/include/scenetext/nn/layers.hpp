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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scenetext/nn/layer_params.hpp"
#include "scenetext/rng.hpp"
#include "scenetext/tensor.hpp"

namespace scenetext::nn {

// Glorot-uniform tensor: U[-s, s] with s = sqrt(6 / (fan_in + fan_out)).
Tensor glorot_uniform(std::vector<std::size_t> shape, std::size_t fan_in,
                      std::size_t fan_out, Rng& rng);

// 2-D cross-correlation over [C, H, W] tensors (no kernel flip).
struct Conv2d {
  Tensor weight;  // [out, in, kh, kw]
  Tensor bias;    // [out]
  int stride = 1;
  int pad_h = 0;
  int pad_w = 0;

  struct Cache {
    Tensor input;
  };

  static Conv2d init(std::size_t in_channels, std::size_t out_channels,
                     std::size_t kernel_h, std::size_t kernel_w, int stride,
                     int pad_h, int pad_w, Rng& rng);
  static Conv2d from_params(const LayerParams& params);
  LayerParams to_params() const;
  Conv2d zeros_like() const;

  std::size_t in_channels() const { return weight.dim(1); }
  std::size_t out_channels() const { return weight.dim(0); }
  std::size_t kernel_h() const { return weight.dim(2); }
  std::size_t kernel_w() const { return weight.dim(3); }

  std::vector<Tensor*> tensors() { return {&weight, &bias}; }
  std::vector<const Tensor*> tensors() const { return {&weight, &bias}; }

  Tensor forward(const Tensor& input) const;
  Tensor forward(const Tensor& input, Cache& cache) const;
  // Returns the input gradient; parameter gradients are added to `grads`.
  Tensor backward(const Cache& cache, const Tensor& grad_out,
                  Conv2d& grads) const;
};

// Affine map y = W x + b on a vector [in], or row-wise on a matrix [N, in].
struct Linear {
  Tensor weight;  // [out, in]
  Tensor bias;    // [out]

  struct Cache {
    Tensor input;
  };

  static Linear init(std::size_t in, std::size_t out, Rng& rng);
  static Linear from_params(const LayerParams& params);
  LayerParams to_params() const;
  Linear zeros_like() const;

  std::size_t in_features() const { return weight.dim(1); }
  std::size_t out_features() const { return weight.dim(0); }

  std::vector<Tensor*> tensors() { return {&weight, &bias}; }
  std::vector<const Tensor*> tensors() const { return {&weight, &bias}; }

  Tensor forward(const Tensor& input) const;
  Tensor forward(const Tensor& input, Cache& cache) const;
  Tensor backward(const Cache& cache, const Tensor& grad_out,
                  Linear& grads) const;
};

// Max pooling with non-overlapping windows; trailing rows/cols that do not
// fill a window are dropped. Ties go to the first maximum in row-major order.
struct MaxPool2d {
  int pool_h = 2;
  int pool_w = 2;

  struct Cache {
    std::vector<std::size_t> input_shape;
    std::vector<std::size_t> argmax;  // flat input index per output element
  };

  Tensor forward(const Tensor& input) const;
  Tensor forward(const Tensor& input, Cache& cache) const;
  Tensor backward(const Cache& cache, const Tensor& grad_out) const;
};

// Nearest-neighbour x2 upsampling of [C, H, W].
struct Upsample2x {
  Tensor forward(const Tensor& input) const;
  Tensor backward(const Tensor& grad_out) const;
};

struct Relu {
  struct Cache {
    Tensor input;
  };
  Tensor forward(const Tensor& input) const;
  Tensor forward(const Tensor& input, Cache& cache) const;
  Tensor backward(const Cache& cache, const Tensor& grad_out) const;
};

double sigmoid(double x);
Tensor sigmoid(const Tensor& x);

// Max-subtracted softmax over a rank-1 tensor, or over each row of a
// rank-2 tensor.
Tensor softmax(const Tensor& logits);
Tensor log_softmax(const Tensor& logits);

// Gradient of softmax: given y = softmax(x) and dL/dy, returns dL/dx
// (row-wise for rank-2).
Tensor softmax_backward(const Tensor& y, const Tensor& grad_y);

// Throws NumericError naming `layer` if `t` has a non-finite entry.
void check_finite(const Tensor& t, const char* layer);

}  // namespace scenetext::nn
