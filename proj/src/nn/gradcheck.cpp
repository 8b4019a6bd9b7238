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

#include "scenetext/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "scenetext/errors.hpp"

namespace scenetext::nn {

void GradReport::merge(const GradReport& other) {
  max_abs_err = std::max(max_abs_err, other.max_abs_err);
  if (other.checked > 0 &&
      (other.max_rel_err > max_rel_err || worst.empty())) {
    max_rel_err = std::max(max_rel_err, other.max_rel_err);
    worst = other.worst;
  }
  checked += other.checked;
  skipped += other.skipped;
}

GradReport finite_diff_check(const std::function<double()>& loss,
                             std::span<const CheckedTensor> tensors,
                             double eps, double rel_floor) {
  return finite_diff_check_piecewise(
      [&]() -> std::optional<double> { return loss(); }, tensors, eps,
      rel_floor);
}

GradReport finite_diff_check_piecewise(
    const std::function<std::optional<double>()>& loss,
    std::span<const CheckedTensor> tensors, double eps, double rel_floor) {
  if (!(eps > 0.0)) throw InvalidArgument("finite_diff_check: eps must be > 0");
  GradReport report;
  for (const CheckedTensor& ct : tensors) {
    ct.analytic->expect_shape(ct.value->shape(),
                              "finite_diff_check " + ct.name);
    for (std::size_t i = 0; i < ct.value->size(); ++i) {
      double& v = (*ct.value)[i];
      const double saved = v;
      v = saved + eps;
      const std::optional<double> up = loss();
      v = saved - eps;
      const std::optional<double> down = loss();
      v = saved;
      if (!up || !down) {
        ++report.skipped;
        continue;
      }
      const double numeric = (*up - *down) / (2.0 * eps);
      const double a = (*ct.analytic)[i];
      const double abs_err = std::abs(a - numeric);
      const double rel_err =
          abs_err / std::max({std::abs(a), std::abs(numeric), rel_floor});
      report.max_abs_err = std::max(report.max_abs_err, abs_err);
      if (rel_err > report.max_rel_err || report.worst.empty()) {
        report.max_rel_err = std::max(report.max_rel_err, rel_err);
        report.worst = ct.name + "[" + std::to_string(i) + "]";
      }
      ++report.checked;
    }
  }
  return report;
}

GradReport finite_diff_check(const std::function<double(const Tensor&)>& f,
                             const Tensor& x, const Tensor& analytic,
                             double eps, const std::string& name,
                             double rel_floor) {
  Tensor probe = x;
  const CheckedTensor entry{name, &probe, &analytic};
  return finite_diff_check([&] { return f(probe); },
                           std::span<const CheckedTensor>(&entry, 1), eps,
                           rel_floor);
}

}  // namespace scenetext::nn
