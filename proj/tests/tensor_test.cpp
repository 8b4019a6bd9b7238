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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "scenetext/errors.hpp"
#include "scenetext/nn/gradcheck.hpp"
#include "scenetext/nn/optim.hpp"
#include "scenetext/rng.hpp"
#include "scenetext/tensor.hpp"

namespace scenetext {
namespace {

TEST(Tensor, ShapeAndFill) {
  const Tensor t({2, 3}, 1.5);
  EXPECT_EQ(t.rank(), 2u);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.at(1, 2), 1.5);
  EXPECT_FALSE(t.empty());
  EXPECT_TRUE(Tensor().empty());
}

TEST(Tensor, RejectsZeroExtentAndSizeMismatch) {
  EXPECT_THROW(Tensor({2, 0}), InvalidArgument);
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST(Tensor, RowMajorLayout) {
  const Tensor t({2, 2, 3}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  EXPECT_EQ(t.at(1, 0, 2), 8.0);
  EXPECT_EQ(t.at(0, 1, 0), 3.0);
}

TEST(Tensor, ReshapeKeepsData) {
  const Tensor t({2, 3}, {1, 2, 3, 4, 5, 6});
  const Tensor r = t.reshaped({3, 2});
  EXPECT_EQ(r.at(2, 1), 6.0);
  EXPECT_THROW(t.reshaped({4, 2}), InvalidArgument);
}

TEST(Tensor, ExpectShapeAndFiniteness) {
  Tensor t({2});
  EXPECT_NO_THROW(t.expect_shape({2}, "t"));
  EXPECT_THROW(t.expect_shape({3}, "t"), InvalidArgument);
  EXPECT_TRUE(t.all_finite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(t.all_finite());
}

TEST(Tensor, Axpy) {
  Tensor a({3}, {1, 2, 3});
  axpy(a, Tensor({3}, {1, 1, 1}), -2.0);
  EXPECT_EQ(a, Tensor({3}, {-1, 0, 1}));
  EXPECT_THROW(axpy(a, Tensor({2}), 1.0), InvalidArgument);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng s1 = Rng::stream(1, "detector-init"), s2 = Rng::stream(1, "recognizer-init");
  EXPECT_NE(s1.next(), s2.next());
}

TEST(Rng, RangesRespected) {
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const int k = r.uniform_int(-3, 3);
    EXPECT_GE(k, -3);
    EXPECT_LE(k, 3);
  }
}

// Single scalar parameter for optimizer tests.
struct Scalar {
  Tensor w{{1}};
  std::vector<Tensor*> tensors() { return {&w}; }
  std::vector<const Tensor*> tensors() const { return {&w}; }
};

TEST(Sgd, ArithmeticAndZeroRate) {
  Scalar p, g;
  p.w[0] = 1.0;
  g.w[0] = 0.5;
  EXPECT_DOUBLE_EQ(nn::sgd_update(p, g, 0.1).w[0], 0.95);
  EXPECT_EQ(nn::sgd_update(p, g, 0.0).w[0], 1.0);
  EXPECT_THROW(nn::sgd_update(p, g, -1.0), InvalidArgument);
}

TEST(Sgd, ContractsQuadratic) {
  Scalar p;
  p.w[0] = 3.0;
  double prev = std::abs(p.w[0]);
  for (int i = 0; i < 50; ++i) {
    Scalar g;
    g.w[0] = p.w[0];  // d/dw of w^2 / 2
    p = nn::sgd_update(p, g, 0.1);
    EXPECT_LT(std::abs(p.w[0]), prev);
    prev = std::abs(p.w[0]);
  }
}

TEST(Sgd, ShapeMismatchRejected) {
  Scalar p, g;
  g.w = Tensor({2});
  EXPECT_THROW(nn::sgd_update(p, g, 0.1), InvalidArgument);
}

TEST(Adam, MovesAgainstGradient) {
  Scalar p, g;
  p.w[0] = 1.0;
  g.w[0] = 2.0;
  nn::Adam adam(0.01);
  adam.step(p, g);
  EXPECT_NEAR(p.w[0], 0.99, 1e-9);  // first step has magnitude lr
}

TEST(ClipGradNorm, ScalesToMaximum) {
  struct Pair {
    Tensor a{{2}};
    std::vector<Tensor*> tensors() { return {&a}; }
    std::vector<const Tensor*> tensors() const { return {&a}; }
  } g;
  g.a[0] = 3.0;
  g.a[1] = 4.0;
  EXPECT_DOUBLE_EQ(nn::clip_grad_norm(g, 1.0), 5.0);
  EXPECT_NEAR(g.a[0], 0.6, 1e-15);
  EXPECT_NEAR(g.a[1], 0.8, 1e-15);
}

TEST(GradCheck, LinearFunctionMatches) {
  const Tensor x({4}, {0.1, -2.0, 3.5, 0.0});
  const Tensor w({4}, {1.0, 2.0, -1.0, 0.5});
  auto f = [&](const Tensor& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i];
    return s;
  };
  const auto r = nn::finite_diff_check(f, x, w, 1e-4);
  EXPECT_LE(r.max_abs_err, 1e-9);
  EXPECT_EQ(r.checked, 4u);
}

TEST(GradCheck, IdentityOp) {
  const Tensor x({1}, {0.25});
  const auto r = nn::finite_diff_check([](const Tensor& v) { return v[0]; }, x,
                                       Tensor({1}, {1.0}), 1e-4);
  EXPECT_LE(r.max_abs_err, 1e-12);
}

TEST(GradCheck, ReportsWrongGradient) {
  const Tensor x({2}, {1.0, 2.0});
  const auto r = nn::finite_diff_check(
      [](const Tensor& v) { return v[0] * v[0] + v[1]; }, x, Tensor({2}, {2.0, 0.0}), 1e-4);
  EXPECT_GT(r.max_rel_err, 0.5);
  EXPECT_EQ(r.worst, "input[1]");
}

TEST(GradCheck, PiecewiseSkipsFlaggedProbes) {
  Tensor x({3}, {1.0, 2.0, 3.0});
  const Tensor g({3}, {1.0, 1.0, 1.0});
  const nn::CheckedTensor entry{"x", &x, &g};
  int calls = 0;
  const auto r = nn::finite_diff_check_piecewise(
      [&]() -> std::optional<double> {
        ++calls;
        if (calls <= 2) return std::nullopt;
        return x[0] + x[1] + x[2];
      },
      std::span(&entry, 1), 1e-4);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.checked, 2u);
  EXPECT_EQ(x, Tensor({3}, {1.0, 2.0, 3.0}));
}

}  // namespace
}  // namespace scenetext
