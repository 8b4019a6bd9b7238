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

#include "scenetext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scenetext {
namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point p, Point a, Point b) {
  constexpr double kTol = 1e-9;
  if (std::abs(cross(a, b, p)) > kTol * (1.0 + std::hypot(b.x - a.x, b.y - a.y)))
    return false;
  return p.x >= std::min(a.x, b.x) - kTol && p.x <= std::max(a.x, b.x) + kTol &&
         p.y >= std::min(a.y, b.y) - kTol && p.y <= std::max(a.y, b.y) + kTol;
}

bool segments_touch(Point a, Point b, Point c, Point d) {
  const double d1 = cross(c, d, a), d2 = cross(c, d, b);
  const double d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) ||
         on_segment(d, a, b);
}

}  // namespace

QuadBox QuadBox::axis_aligned(double x0, double y0, double x1, double y1) {
  QuadBox q;
  q.vertices = {Point{x0, y0}, Point{x1, y0}, Point{x1, y1}, Point{x0, y1}};
  return q;
}

double QuadBox::area() const { return polygon_area(vertices); }

Envelope QuadBox::envelope() const {
  Envelope e{vertices[0].x, vertices[0].y, vertices[0].x, vertices[0].y};
  for (const Point& p : vertices) {
    e.min_x = std::min(e.min_x, p.x);
    e.min_y = std::min(e.min_y, p.y);
    e.max_x = std::max(e.max_x, p.x);
    e.max_y = std::max(e.max_y, p.y);
  }
  return e;
}

double signed_area(std::span<const Point> poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

double polygon_area(std::span<const Point> poly) {
  return std::abs(signed_area(poly));
}

bool is_convex(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
    if (c == 0.0) continue;
    const int s = c > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return sign != 0;
}

bool is_simple_quad(const QuadBox& q) {
  const auto& v = q.vertices;
  return !segments_touch(v[0], v[1], v[2], v[3]) &&
         !segments_touch(v[1], v[2], v[3], v[0]);
}

Polygon convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  Polygon hull(2 * points.size());
  std::size_t k = 0;
  // Monotone chain producing counter-clockwise order in math coordinates,
  // which is clockwise once y points down.
  for (const Point& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Point& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  if (subject.size() < 3 || clip.size() < 3) return {};
  Polygon c = clip;
  if (signed_area(c) < 0) std::reverse(c.begin(), c.end());
  // With positive signed area, interior lies where cross(edge, p) >= 0.
  Polygon output = subject;
  for (std::size_t i = 0; i < c.size() && !output.empty(); ++i) {
    const Point a = c[i];
    const Point b = c[(i + 1) % c.size()];
    Polygon input = std::move(output);
    output.clear();
    for (std::size_t j = 0; j < input.size(); ++j) {
      const Point cur = input[j];
      const Point prev = input[(j + input.size() - 1) % input.size()];
      const double dc = cross(a, b, cur);
      const double dp = cross(a, b, prev);
      const bool cur_in = dc >= 0;
      const bool prev_in = dp >= 0;
      if (cur_in != prev_in) {
        const double t = dp / (dp - dc);
        output.push_back({prev.x + t * (cur.x - prev.x),
                          prev.y + t * (cur.y - prev.y)});
      }
      if (cur_in) output.push_back(cur);
    }
  }
  return output;
}

bool point_in_polygon(Point p, std::span<const Point> poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::array<Point, 4> canonical_order(std::array<Point, 4> quad) {
  if (signed_area(quad) < 0) std::reverse(quad.begin(), quad.end());
  std::size_t start = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    const double si = quad[i].x + quad[i].y;
    const double ss = quad[start].x + quad[start].y;
    if (si < ss || (si == ss && quad[i].y < quad[start].y)) start = i;
  }
  std::rotate(quad.begin(), quad.begin() + static_cast<long>(start), quad.end());
  return quad;
}

std::array<Point, 4> min_area_rect(std::vector<Point> points) {
  Polygon hull = convex_hull(std::move(points));
  if (hull.empty()) return {};
  if (hull.size() < 3) {
    const Point a = hull.front(), b = hull.back();
    return canonical_order({a, b, b, a});
  }
  double best_area = std::numeric_limits<double>::infinity();
  std::array<Point, 4> best{};
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point a = hull[i];
    const Point b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) continue;
    const double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
    double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
    double lo_v = lo_u, hi_v = -lo_u;
    for (const Point& p : hull) {
      const double u = p.x * ux + p.y * uy;
      const double v = -p.x * uy + p.y * ux;
      lo_u = std::min(lo_u, u);
      hi_u = std::max(hi_u, u);
      lo_v = std::min(lo_v, v);
      hi_v = std::max(hi_v, v);
    }
    const double area = (hi_u - lo_u) * (hi_v - lo_v);
    if (area < best_area - 1e-9) {
      best_area = area;
      auto corner = [&](double u, double v) {
        return Point{u * ux - v * uy, u * uy + v * ux};
      };
      best = {corner(lo_u, lo_v), corner(hi_u, lo_v), corner(hi_u, hi_v),
              corner(lo_u, hi_v)};
    }
  }
  return canonical_order(best);
}

}  // namespace scenetext
