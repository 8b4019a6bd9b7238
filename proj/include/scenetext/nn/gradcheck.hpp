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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenetext/tensor.hpp"

namespace scenetext::nn {

struct GradReport {
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  std::string worst;  // "<tensor name>[flat index]" of the worst relative error
  std::size_t checked = 0;
  std::size_t skipped = 0;  // probes that crossed a non-differentiable point

  void merge(const GradReport& other);
};

// Relative error |a - n| / max(|a|, |n|, floor). The floor keeps entries
// whose true gradient is ~0 from reporting noise-dominated ratios.
inline constexpr double kDefaultRelFloor = 1e-6;

// Central differences of a scalar function f at x compared to `analytic`.
GradReport finite_diff_check(const std::function<double(const Tensor&)>& f,
                             const Tensor& x, const Tensor& analytic,
                             double eps, const std::string& name = "input",
                             double rel_floor = kDefaultRelFloor);

// Same, for tensors perturbed in place (parameters); each tensor is
// restored bit-exactly afterwards.
struct CheckedTensor {
  std::string name;
  Tensor* value;
  const Tensor* analytic;
};
GradReport finite_diff_check(const std::function<double()>& loss,
                             std::span<const CheckedTensor> tensors,
                             double eps, double rel_floor = kDefaultRelFloor);

// For piecewise-smooth losses (ReLU, max pooling): `loss` returns nullopt
// when the probe left the linear region of the unperturbed point, and that
// coordinate is counted in `skipped` instead of compared.
GradReport finite_diff_check_piecewise(
    const std::function<std::optional<double>()>& loss,
    std::span<const CheckedTensor> tensors, double eps,
    double rel_floor = kDefaultRelFloor);

}  // namespace scenetext::nn
