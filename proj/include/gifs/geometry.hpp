#pragma once

#include <Eigen/Core>

#include <variant>
#include <vector>

namespace gifs {

// Points live in R^2; one-dimensional systems use the x axis with y = 0.
using Point = Eigen::Vector2d;

struct Ball {
  Point center = Point::Zero();
  double radius = 0.0;
};

// Axis aligned. In one dimension lo.y() == hi.y() == 0.
struct Box {
  Point lo = Point::Zero();
  Point hi = Point::Zero();
};

using Shape = std::variant<Ball, Box>;

inline Ball interval(double a, double b) {
  return Ball{Point((a + b) / 2, 0.0), (b - a) / 2};
}

Point center(const Shape& s);
double diameter(const Shape& s, int dim);
Ball enclosing_ball(const Shape& s, int dim);
Box bounding_box(const Shape& s, int dim);

bool contains(const Shape& s, const Point& p, int dim, double tol = 0.0);
bool contains(const Shape& outer, const Shape& inner, int dim, double tol = 0.0);

// Positive: Euclidean distance between disjoint closed sets. Zero: touching.
// Negative: the sets overlap (magnitude is a penetration depth).
double gap(const Shape& a, const Shape& b, int dim);

// dist(inner, R^D \ outer); negative when inner is not inside outer.
double distance_to_complement(const Shape& inner, const Shape& outer, int dim);

// Deterministic grid of points inside the shape, boundary included.
std::vector<Point> sample_points(const Shape& s, int dim, int grid);

}  // namespace gifs
