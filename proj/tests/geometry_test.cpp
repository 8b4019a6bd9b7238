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
#include <numbers>

#include "scenetext/geometry.hpp"
#include "scenetext/rng.hpp"

namespace scenetext {
namespace {

TEST(Geometry, ShoelaceOrientation) {
  const Polygon cw{{0, 0}, {4, 0}, {4, 2}, {0, 2}};  // clockwise with y down
  EXPECT_DOUBLE_EQ(signed_area(cw), 8.0);
  const Polygon ccw{cw.rbegin(), cw.rend()};
  EXPECT_DOUBLE_EQ(signed_area(ccw), -8.0);
  EXPECT_DOUBLE_EQ(polygon_area(ccw), 8.0);
}

TEST(Geometry, AxisAlignedQuad) {
  const QuadBox q = QuadBox::axis_aligned(1, 2, 5, 4);
  EXPECT_DOUBLE_EQ(q.area(), 8.0);
  const Envelope e = q.envelope();
  EXPECT_EQ(e.min_x, 1);
  EXPECT_EQ(e.max_y, 4);
  EXPECT_TRUE(is_convex(q.polygon()));
  EXPECT_TRUE(is_simple_quad(q));
}

TEST(Geometry, SelfIntersectingQuad) {
  QuadBox bowtie;
  bowtie.vertices = {Point{0, 0}, Point{4, 4}, Point{4, 0}, Point{0, 4}};
  EXPECT_FALSE(is_simple_quad(bowtie));
  EXPECT_FALSE(is_convex(bowtie.polygon()));
}

TEST(Geometry, ConvexHullDropsInteriorAndCollinear) {
  const Polygon hull = convex_hull({{0, 0}, {2, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}, {1, 3}});
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_DOUBLE_EQ(signed_area(hull), 16.0);
}

TEST(Geometry, ClipOverlappingSquares) {
  const Polygon a{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  const Polygon b{{5, 5}, {15, 5}, {15, 15}, {5, 15}};
  EXPECT_DOUBLE_EQ(polygon_area(clip_convex(a, b)), 25.0);
  const Polygon b_ccw{b.rbegin(), b.rend()};
  EXPECT_DOUBLE_EQ(polygon_area(clip_convex(a, b_ccw)), 25.0);
  const Polygon far{{20, 20}, {30, 20}, {30, 30}, {20, 30}};
  EXPECT_DOUBLE_EQ(polygon_area(clip_convex(a, far)), 0.0);
}

TEST(Geometry, PointInPolygonBoundaryInside) {
  const Polygon sq{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  EXPECT_TRUE(point_in_polygon({1, 1}, sq));
  EXPECT_TRUE(point_in_polygon({2, 1}, sq));
  EXPECT_TRUE(point_in_polygon({0, 0}, sq));
  EXPECT_FALSE(point_in_polygon({2.01, 1}, sq));
}

TEST(Geometry, MinAreaRectOfRotatedBar) {
  // 45 degree bar: 10 long, 2 wide.
  const double c = std::numbers::sqrt2 / 2;
  std::vector<Point> pts;
  for (double s = 0; s <= 10; s += 0.5) {
    for (double t = -1; t <= 1; t += 0.5) pts.push_back({s * c - t * c, s * c + t * c});
  }
  const auto rect = min_area_rect(pts);
  EXPECT_NEAR(polygon_area(rect), 20.0, 1e-9);
  const double side = std::hypot(rect[1].x - rect[0].x, rect[1].y - rect[0].y);
  EXPECT_TRUE(std::abs(side - 10.0) < 1e-9 || std::abs(side - 2.0) < 1e-9);
  EXPECT_GT(signed_area(rect), 0.0);
}

TEST(Geometry, MinAreaRectContainsPoints) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({rng.uniform(0, 50), rng.uniform(0, 30)});
    const auto rect = min_area_rect(pts);
    const Polygon hull = convex_hull(pts);
    EXPECT_GE(polygon_area(rect) + 1e-9, polygon_area(hull));
    // Bounding box is always a candidate, so the result is no larger.
    double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
    for (const Point& p : pts) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    EXPECT_LE(polygon_area(rect), (x1 - x0) * (y1 - y0) + 1e-9);
    for (const Point& p : pts) {
      // Clockwise rect: every point lies on the inner side of each edge.
      for (int k = 0; k < 4; ++k) {
        const Point& u = rect[k];
        const Point& v = rect[(k + 1) % 4];
        const double cross = (v.x - u.x) * (p.y - u.y) - (v.y - u.y) * (p.x - u.x);
        EXPECT_GE(cross, -1e-7);
      }
    }
  }
}

TEST(Geometry, CanonicalOrder) {
  const std::array<Point, 4> q{Point{10, 0}, Point{0, 0}, Point{0, 5}, Point{10, 5}};
  const auto c = canonical_order(q);
  EXPECT_EQ(c[0], (Point{0, 0}));
  EXPECT_EQ(c[1], (Point{10, 0}));
  EXPECT_EQ(c[2], (Point{10, 5}));
  EXPECT_EQ(c[3], (Point{0, 5}));
}

}  // namespace
}  // namespace scenetext
