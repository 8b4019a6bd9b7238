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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scenetext {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

using Polygon = std::vector<Point>;

struct Envelope {
  double min_x, min_y, max_x, max_y;
};

// Four-vertex text region in pixel coordinates (y grows downwards).
// Transcription "###" in ground truth marks a don't-care region.
struct QuadBox {
  std::array<Point, 4> vertices{};
  std::optional<std::string> transcription;
  bool dont_care = false;

  static QuadBox axis_aligned(double x0, double y0, double x1, double y1);

  double area() const;
  Envelope envelope() const;
  Polygon polygon() const { return {vertices.begin(), vertices.end()}; }

  friend bool operator==(const QuadBox&, const QuadBox&) = default;
};

// Shoelace signed area; positive for clockwise order in image coordinates.
double signed_area(std::span<const Point> poly);
double polygon_area(std::span<const Point> poly);

bool is_convex(std::span<const Point> poly);
// True when no two non-adjacent edges of the quad touch.
bool is_simple_quad(const QuadBox& q);

// Convex hull, clockwise in image coordinates, collinear points removed.
Polygon convex_hull(std::vector<Point> points);

// Clips `subject` by a convex `clip` polygon (Sutherland-Hodgman). Both
// polygons may be in either orientation.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

// Boundary points count as inside.
bool point_in_polygon(Point p, std::span<const Point> poly);

// Minimum-area enclosing rectangle of a point set (rotating calipers over
// the convex hull). Vertices clockwise starting from the top-left.
std::array<Point, 4> min_area_rect(std::vector<Point> points);

// Reorders a quad to clockwise (image coordinates) starting at the vertex
// with the smallest x + y.
std::array<Point, 4> canonical_order(std::array<Point, 4> quad);

}  // namespace scenetext
