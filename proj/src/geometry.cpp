#include "gifs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gifs {

namespace {

double point_box_distance(const Point& p, const Box& b, int dim) {
  double d2 = 0;
  for (int a = 0; a < dim; ++a) {
    double d = std::max({b.lo[a] - p[a], 0.0, p[a] - b.hi[a]});
    d2 += d * d;
  }
  return std::sqrt(d2);
}

// Depth of p inside b (distance to the nearest face), or 0 if outside.
double point_box_depth(const Point& p, const Box& b, int dim) {
  double depth = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim; ++a) depth = std::min({depth, p[a] - b.lo[a], b.hi[a] - p[a]});
  return std::max(depth, 0.0);
}

double farthest_corner(const Point& c, const Box& b, int dim) {
  double d2 = 0;
  for (int a = 0; a < dim; ++a) {
    double d = std::max(std::abs(c[a] - b.lo[a]), std::abs(c[a] - b.hi[a]));
    d2 += d * d;
  }
  return std::sqrt(d2);
}

}  // namespace

Point center(const Shape& s) {
  if (auto b = std::get_if<Ball>(&s)) return b->center;
  const auto& x = std::get<Box>(s);
  return (x.lo + x.hi) / 2;
}

double diameter(const Shape& s, int dim) {
  if (auto b = std::get_if<Ball>(&s)) return 2 * b->radius;
  const auto& x = std::get<Box>(s);
  return (x.hi - x.lo).head(dim).norm();
}

Ball enclosing_ball(const Shape& s, int dim) {
  if (auto b = std::get_if<Ball>(&s)) return *b;
  const auto& x = std::get<Box>(s);
  return Ball{(x.lo + x.hi) / 2, (x.hi - x.lo).head(dim).norm() / 2};
}

Box bounding_box(const Shape& s, int dim) {
  if (auto x = std::get_if<Box>(&s)) return *x;
  const auto& b = std::get<Ball>(s);
  Point r(b.radius, dim > 1 ? b.radius : 0.0);
  return Box{b.center - r, b.center + r};
}

bool contains(const Shape& s, const Point& p, int dim, double tol) {
  if (auto b = std::get_if<Ball>(&s)) return (p - b->center).head(dim).norm() <= b->radius + tol;
  return point_box_distance(p, std::get<Box>(s), dim) <= tol;
}

bool contains(const Shape& outer, const Shape& inner, int dim, double tol) {
  return distance_to_complement(inner, outer, dim) >= -tol;
}

double gap(const Shape& a, const Shape& b, int dim) {
  auto ba = std::get_if<Ball>(&a);
  auto bb = std::get_if<Ball>(&b);
  if (ba && bb) return (ba->center - bb->center).head(dim).norm() - ba->radius - bb->radius;
  if (!ba && !bb) {
    const auto& x = std::get<Box>(a);
    const auto& y = std::get<Box>(b);
    double d2 = 0, overlap = std::numeric_limits<double>::infinity();
    bool separated = false;
    for (int k = 0; k < dim; ++k) {
      double sep = std::max(x.lo[k] - y.hi[k], y.lo[k] - x.hi[k]);
      if (sep >= 0) {
        separated = true;
        d2 += sep * sep;
      } else {
        overlap = std::min(overlap, -sep);
      }
    }
    return separated ? std::sqrt(d2) : -overlap;
  }
  const Ball& ball = ba ? *ba : *bb;
  const Box& box = ba ? std::get<Box>(b) : std::get<Box>(a);
  double d = point_box_distance(ball.center, box, dim);
  if (d > 0) return d - ball.radius;
  return -(ball.radius + point_box_depth(ball.center, box, dim));
}

double distance_to_complement(const Shape& inner, const Shape& outer, int dim) {
  if (auto ob = std::get_if<Ball>(&outer)) {
    if (auto ib = std::get_if<Ball>(&inner))
      return ob->radius - (ib->center - ob->center).head(dim).norm() - ib->radius;
    return ob->radius - farthest_corner(ob->center, std::get<Box>(inner), dim);
  }
  const auto& ox = std::get<Box>(outer);
  Box ix = bounding_box(inner, dim);
  double d = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim; ++a) d = std::min({d, ix.lo[a] - ox.lo[a], ox.hi[a] - ix.hi[a]});
  return d;
}

std::vector<Point> sample_points(const Shape& s, int dim, int grid) {
  std::vector<Point> out;
  grid = std::max(grid, 2);
  Box bb = bounding_box(s, dim);
  if (dim == 1) {
    for (int i = 0; i <= grid; ++i)
      out.emplace_back(bb.lo.x() + (bb.hi.x() - bb.lo.x()) * i / grid, 0.0);
    return out;
  }
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) {
      Point p(bb.lo.x() + (bb.hi.x() - bb.lo.x()) * i / grid,
              bb.lo.y() + (bb.hi.y() - bb.lo.y()) * j / grid);
      if (contains(s, p, dim, 1e-12)) out.push_back(p);
    }
  if (auto b = std::get_if<Ball>(&s)) {
    for (int i = 0; i < 4 * grid; ++i) {
      double t = 2 * std::numbers::pi * i / (4 * grid);
      out.push_back(b->center + b->radius * Point(std::cos(t), std::sin(t)));
    }
  }
  return out;
}

}  // namespace gifs
