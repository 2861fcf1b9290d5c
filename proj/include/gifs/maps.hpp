#pragma once

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gifs/geometry.hpp"

namespace gifs {

using Complex = std::complex<double>;

enum class NormSelector { Norm, Conorm };

// x -> ratio * isometry * x + translation
struct Similarity {
  double ratio = 0.5;
  Eigen::Matrix2d isometry = Eigen::Matrix2d::Identity();
  Point translation = Point::Zero();
};

// x -> M x + b with M a scalar times an orthogonal matrix.
struct ConformalAffine {
  Eigen::Matrix2d M = Eigen::Matrix2d::Identity() / 2;
  Point b = Point::Zero();
};

// z -> 1/(e + z)
struct MoebiusCF {
  Complex e{1.0, 0.0};
};

// z -> 1/(e + 1/2 + eps (z - 1/2))
struct PerturbedMoebiusCF {
  Complex e{1.0, 0.0};
  double eps = 0.1;
};

struct ConstantMap {
  Point target = Point::Zero();
};

// x -> (base + kappa eps direction) x + b + eps b_slope
struct PerturbedAffine {
  Eigen::Matrix2d base = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d direction = Eigen::Matrix2d::Identity();
  double kappa = 0.0;
  double eps = 0.0;
  Point b = Point::Zero();
  Point b_slope = Point::Zero();

  Eigen::Matrix2d matrix() const { return base + kappa * eps * direction; }
  Point translation() const { return b + eps * b_slope; }
};

using MapKind =
    std::variant<Similarity, ConformalAffine, MoebiusCF, PerturbedMoebiusCF, ConstantMap, PerturbedAffine>;

struct MapSpec {
  MapKind kind;
  std::optional<Shape> domain;  // the open set the map is declared on
  double beta = 1.0;
};

struct DerivativeRange {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = true;
};

struct DistortionProfile {
  double c_bd = 0.0;
  double beta = 1.0;
  double c_BD = 0.0;
  double c_BDv = 1.0;
};

// Geometry the chained distortion constants depend on.
struct DistortionGeometry {
  int dim = 2;
  double r = 0.5;
  double c_MT = 1.0;
  double sup_diam_U = 1.0;
  Shape domain = Ball{};
};

Point apply(const MapSpec& map, const Point& x);
double derivative_norm(const MapSpec& map, const Point& x);
// Zero for constant maps; see is_degenerate.
double derivative_conorm(const MapSpec& map, const Point& x);
bool is_degenerate(const MapSpec& map);
bool is_conformal(const MapSpec& map, double tol = 1e-12);

DerivativeRange derivative_range_over_set(const MapSpec& map, const Shape& set,
                                          NormSelector sel = NormSelector::Norm, int grid = 32);

// Shape containing map(set). `exact` reports whether the result is the image
// itself rather than an enclosure.
Shape image_enclosure(const MapSpec& map, const Shape& set, bool* exact = nullptr);

// sup over the set of |grad log ||T'(x)|| |.
double log_lipschitz(const MapSpec& map, const Shape& set);

DistortionProfile distortion_profile(const std::vector<MapSpec>& family, const DistortionGeometry& geo);

std::string describe(const MapSpec& map);

// Singular values (largest, smallest) of a 2x2 matrix.
std::pair<double, double> singular_values(const Eigen::Matrix2d& m);

}  // namespace gifs
