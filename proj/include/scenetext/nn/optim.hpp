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

#include <cmath>
#include <concepts>
#include <cstddef>
#include <utility>
#include <vector>

#include "scenetext/errors.hpp"
#include "scenetext/tensor.hpp"

namespace scenetext::nn {

// Anything exposing its trainable tensors in a fixed order: layers and
// whole models alike.
template <typename P>
concept Parameterized = requires(P& p, const P& cp) {
  { p.tensors() } -> std::same_as<std::vector<Tensor*>>;
  { cp.tensors() } -> std::same_as<std::vector<const Tensor*>>;
};

template <Parameterized P>
void check_same_layout(const P& params, const P& grads) {
  auto p = params.tensors();
  auto g = grads.tensors();
  if (p.size() != g.size()) {
    throw InvalidArgument("gradient tensor count does not match parameters");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    g[i]->expect_shape(p[i]->shape(), "gradient tensor " + std::to_string(i));
  }
}

// Plain gradient step: returns params - lr * grads.
template <Parameterized P>
P sgd_update(const P& params, const P& grads, double lr) {
  if (!(lr >= 0.0)) throw InvalidArgument("sgd: learning rate must be >= 0");
  check_same_layout(params, grads);
  P next = params;
  auto dst = next.tensors();
  auto g = grads.tensors();
  for (std::size_t i = 0; i < dst.size(); ++i) axpy(*dst[i], *g[i], -lr);
  return next;
}

// Scales all gradients so their global L2 norm is at most `max_norm`.
// Returns the norm before clipping.
template <Parameterized P>
double clip_grad_norm(P& grads, double max_norm) {
  double sq = 0.0;
  for (const Tensor* t : std::as_const(grads).tensors()) {
    for (double v : t->data()) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (Tensor* t : grads.tensors()) {
      for (double& v : t->data()) v *= s;
    }
  }
  return norm;
}

template <Parameterized P>
void scale_grads(P& grads, double s) {
  for (Tensor* t : grads.tensors()) {
    for (double& v : t->data()) v *= s;
  }
}

// Adam with bias correction. Moments are allocated on first use.
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  template <Parameterized P>
  void step(P& params, const P& grads) {
    check_same_layout(params, grads);
    auto p = params.tensors();
    auto g = grads.tensors();
    if (m_.empty()) {
      for (const Tensor* t : p) {
        m_.push_back(Tensor::zeros_like(*t));
        v_.push_back(Tensor::zeros_like(*t));
      }
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto w = p[i]->data();
      auto gi = g[i]->data();
      auto m = m_[i].data();
      auto v = v_[i].data();
      for (std::size_t k = 0; k < w.size(); ++k) {
        m[k] = beta1_ * m[k] + (1.0 - beta1_) * gi[k];
        v[k] = beta2_ * v[k] + (1.0 - beta2_) * gi[k] * gi[k];
        w[k] -= lr_ * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps_);
      }
    }
  }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Tensor> m_, v_;
};

struct TrainingLog {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> epoch_loss;  // running mean over each epoch
  int epochs_run = 0;
};

enum class OptimizerKind { kSgd, kAdam };

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr) : kind_(kind), lr_(lr), adam_(lr) {}

  template <Parameterized P>
  void step(P& params, const P& grads) {
    if (kind_ == OptimizerKind::kSgd) {
      params = sgd_update(params, grads, lr_);
    } else {
      adam_.step(params, grads);
    }
  }

 private:
  OptimizerKind kind_;
  double lr_;
  Adam adam_;
};

}  // namespace scenetext::nn
