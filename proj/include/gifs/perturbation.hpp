#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gifs/dimension.hpp"
#include "gifs/system.hpp"

namespace gifs {

// A perturbed family on an extended graph whose extra edges degenerate to
// constant maps as eps -> 0. Edges of builder(eps) below `base_edges` belong
// to the base graph; the rest are degenerate.
struct PerturbationFamily {
  std::string name;
  GifsSystem base;  // the limit system on the unextended graph
  // the system at eps; countable families return a horizon ladder
  std::function<SystemFamily(double eps)> builder;
  Index base_edges = 0;
  double eps0 = 1.0;  // validation holds for eps < eps0
  bool countable = false;
  // the inf-derivative sum over the degenerate edges diverges for s at or
  // below this value (comparison with a p-series), when known
  std::optional<double> divergence_threshold;
};

// The perturbed system with eps set to 0: base edges carry their limit maps,
// degenerate edges the constant maps a_e.
GifsSystem limit_system(const PerturbationFamily& family, const GifsSystem& perturbed);
std::vector<Point> limit_points(const PerturbationFamily& family, const GifsSystem& perturbed);

struct AffineEdgeSpec {
  Index from = 0;
  Index to = 0;
  Eigen::Matrix2d M = Eigen::Matrix2d::Zero();  // limit linear part
  Point b = Point::Zero();                      // limit translation
  Eigen::Matrix2d direction = Eigen::Matrix2d::Identity();
  double kappa = 0.0;  // the linear part is M + kappa eps direction
  Point b_slope = Point::Zero();  // the translation is b + eps b_slope
  std::string label;
};

struct AffineSpec {
  int dim = 2;
  std::vector<Shape> J;
  std::vector<Shape> O;
  std::vector<AffineEdgeSpec> edges;
  bool countable = false;  // declared countable extensions need a witness
  std::optional<TailWitness> witness;
};

// Vertices of `extension` follow those of `base`; its edge endpoints index
// the combined vertex list.
GifsSystem build_perturbed_affine(const AffineSpec& base, const AffineSpec& extension, double eps);
GifsSystem build_perturbed_cf(const std::vector<Complex>& subE, const std::vector<Complex>& fullE, double eps);

// Real-line demo: V = {1, 2} with 11 (x/3, perturbed by 0.05 eps x), 12
// (x/3 + 2/3) and 21 (x/2); the extension adds vertex 3 with degenerate edges
// 13 -> 1/2, 23 -> 3/4 and 31 -> 1/4 of slope 0.1 eps.
AffineSpec affine_demo_base();
AffineSpec affine_demo_extension();
GifsSystem affine_demo(double eps);

PerturbationFamily affine_demo_family();
PerturbationFamily cf_family(const std::vector<Complex>& subE, const std::vector<Complex>& fullE);
// fullE = E_* materialized on the boxes |m|, |n| <= N
PerturbationFamily cf_box_perturbation(const std::vector<Complex>& subE, std::vector<Index> boxes);

struct SweepRecord {
  double eps = 0.0;  // 0 for the base row
  DimensionResult result;
  double base_lower = 0.0;
  double base_upper = 0.0;
  double mid_deviation = 0.0;  // |mid dim(eps) - mid dim(0)|
  double seconds = 0.0;
  std::string status;  // solver status, or the error for failed rows
  bool failed = false;
  // Countable families converge only if the base dimension lies above the
  // summability threshold of the perturbed family; otherwise the row is
  // computed anyway and labelled "hypothesis-unverified".
  bool hypothesis_verified = true;
};

// One row per eps after the base row (eps = 0).
std::vector<SweepRecord> dimension_sweep(const PerturbationFamily& family, const std::vector<double>& epsilons,
                                         const SolverOptions& opts = {});
std::string sweep_csv(const std::vector<SweepRecord>& rows);

std::vector<double> geometric_schedule(int j_first, int j_last);

enum class DivergenceVerdict { Diverges, Converges, Inconclusive };

struct DivergenceReport {
  double s = 0.0;
  double eps = 0.0;
  std::vector<Index> horizons;
  std::vector<double> sup_sums;  // sum over edges of sup_J ||T_e'||^s
  std::vector<double> inf_sums;  // the same with inf_J of the conorm
  std::vector<double> increments;  // of the sup sums
  double growth_exponent = 0.0;    // slope of log sum against log horizon
  DivergenceVerdict verdict = DivergenceVerdict::Inconclusive;
  bool analytic_lower_diverges = false;  // p-series comparison for the degenerate letters
  // a horizon where the inf sum already exceeds 1: the truncated pressure is
  // positive there, so dim K(eps) > s
  std::optional<Index> finite_certificate;
  std::string implication;
};

DivergenceReport degeneracy_divergence_probe(const PerturbationFamily& family, double s,
                                             const std::vector<Index>& horizons, double eps);

// sup over degenerate edges and seed points of |T_e(eps, x) - a_e|
double degenerate_deviation(const PerturbationFamily& family, double eps);

std::string to_string(DivergenceVerdict v);

}  // namespace gifs
