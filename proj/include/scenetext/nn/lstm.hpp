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
#include <vector>

#include "scenetext/nn/layer_params.hpp"
#include "scenetext/rng.hpp"
#include "scenetext/tensor.hpp"

namespace scenetext::nn {

// Single LSTM cell. Gate rows of the stacked weights are ordered
// input, forget, candidate, output:
//   i, f, o = sigmoid(Wx x + Wh h + b),  g = tanh(...)
//   c = f * c_prev + i * g,  h = o * tanh(c)
struct LstmCell {
  Tensor w_input;      // [4H, D]
  Tensor w_recurrent;  // [4H, H]
  Tensor bias;         // [4H]

  struct State {
    Tensor h;
    Tensor c;
  };

  struct Cache {
    Tensor x, h_prev, c_prev;
    Tensor gates;   // activated i, f, g, o stacked [4H]
    Tensor tanh_c;  // [H]
  };

  static LstmCell init(std::size_t input_size, std::size_t hidden, Rng& rng);
  static LstmCell from_params(const LayerParams& params);
  LayerParams to_params() const;
  LstmCell zeros_like() const;

  std::size_t input_size() const { return w_input.dim(1); }
  std::size_t hidden_size() const { return w_recurrent.dim(1); }
  State zero_state() const {
    return {Tensor({hidden_size()}), Tensor({hidden_size()})};
  }

  std::vector<Tensor*> tensors() { return {&w_input, &w_recurrent, &bias}; }
  std::vector<const Tensor*> tensors() const {
    return {&w_input, &w_recurrent, &bias};
  }

  State step(const Tensor& x, const State& prev) const;
  State step(const Tensor& x, const State& prev, Cache& cache) const;

  struct StepGrads {
    Tensor x;
    Tensor h_prev;
    Tensor c_prev;
  };
  // Backpropagates dL/dh and dL/dc of this step; parameter gradients are
  // added to `grads`.
  StepGrads backward(const Cache& cache, const Tensor& grad_h,
                     const Tensor& grad_c, LstmCell& grads) const;
};

// Runs a cell over the rows of `frames` [T, D], forwards or reversed.
// Output row t is the hidden state after consuming frame t.
struct LstmSequenceCache {
  std::vector<LstmCell::Cache> steps;
  bool reverse = false;
};
Tensor lstm_sequence_forward(const LstmCell& cell, const Tensor& frames,
                             bool reverse, LstmSequenceCache* cache);
// Returns dL/dframes given dL/doutputs [T, H].
Tensor lstm_sequence_backward(const LstmCell& cell,
                              const LstmSequenceCache& cache,
                              const Tensor& grad_outputs, LstmCell& grads);

}  // namespace scenetext::nn
