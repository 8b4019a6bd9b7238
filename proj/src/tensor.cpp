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

#include "scenetext/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "scenetext/errors.hpp"

namespace scenetext {
namespace {

std::size_t checked_product(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw InvalidArgument("tensor shape must have rank >= 1");
  std::size_t n = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) {
      throw InvalidArgument("tensor extents must be positive, got " +
                            shape_string(shape));
    }
    n *= extent;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(checked_product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_product(shape_) != data_.size()) {
    throw InvalidArgument("data length " + std::to_string(data_.size()) +
                          " does not match shape " + shape_string(shape_));
  }
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
  return Tensor(std::move(shape), data_);
}

void Tensor::expect_shape(const std::vector<std::size_t>& shape,
                          const std::string& what) const {
  if (shape_ != shape) {
    throw InvalidArgument(what + ": expected shape " + shape_string(shape) +
                          ", got " + shape_string(shape_));
  }
}

bool Tensor::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

void axpy(Tensor& a, const Tensor& b, double scale) {
  if (a.shape() != b.shape()) {
    throw InvalidArgument("axpy shape mismatch " + shape_string(a.shape()) +
                          " vs " + shape_string(b.shape()));
  }
  auto dst = a.data();
  auto src = b.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
}

}  // namespace scenetext
