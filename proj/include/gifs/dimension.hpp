#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gifs/pressure.hpp"
#include "gifs/system.hpp"

namespace gifs {

enum class DimensionStatus { Converged, ResolutionLimited, BudgetExhausted, IrregularSystem, NoPeriodicWords };

struct SolverOptions {
  double tolerance = 0.0;  // 0: 1e-6 for finite systems, 1e-3 for countable ones
  double s_max = 0.0;      // 0: dimension + 1
  std::vector<Index> horizons;  // empty: the family's own ladder
  SpectralOptions spectral{};
  double initial_variation = 0.05;  // adaptive partition tolerance for non-affine maps
  double variation_floor = 0.05 / 32;
  int max_evaluations = 400;
  double time_budget = 120.0;  // seconds
  // A dimension lower bound already certified elsewhere (e.g. at a smaller
  // horizon); bisection starts from it.
  std::optional<double> floor_hint;
  bool check_separation = true;
};

struct Provenance {
  bool conformal = false;
  std::string ssc = "unchecked";
  std::string osc = "unchecked";
  bool summability_witness = false;
  double theta = 0.0;
  bool conditions_violated = false;
};

struct DimensionResult {
  double s_lower = 0.0;
  double s_upper = 0.0;
  double theta = 0.0;
  double c_scV2 = 0.0;
  DimensionStatus status = DimensionStatus::Converged;
  std::optional<Index> component;
  Provenance provenance;
  std::optional<PressureEstimate> at_lower;  // estimate certifying s_lower
  std::optional<PressureEstimate> at_upper;  // estimate certifying s_upper
  Index horizon = 0;
  double variation_tol = 0.0;
  int evaluations = 0;
  std::string message;

  // certified upper estimate of the dimension: max(s_upper, c_scV2)
  double upper_bound() const { return std::max(s_upper, c_scV2); }
  double width() const { return s_upper - s_lower; }
  double mid() const { return (s_lower + s_upper) / 2; }
};

// Wraps a system in a family: itself at every horizon. A system carrying a
// tail witness is treated as a horizon of a countable system.
SystemFamily family_of(const GifsSystem& system);

DimensionResult bowen_dimension(const SystemFamily& family, const SolverOptions& opts = {});
DimensionResult bowen_dimension(const GifsSystem& system, const SolverOptions& opts = {});

// Bracket for inf{s : P(s phi) <= 0} with the norm potential, plus c_scV2.
DimensionResult upper_estimate(const SystemFamily& family, const SolverOptions& opts = {});
// Bracket for inf{s : P(s phi_) <= 0} with the conorm potential.
DimensionResult lower_estimate(const SystemFamily& family, const SolverOptions& opts = {});

struct ComponentDimension {
  Index component = 0;
  std::vector<Index> states;  // coding states of the class
  DimensionResult result;
};

struct ComponentReport {
  std::vector<ComponentDimension> components;
  DimensionResult global;  // interval max of the components
};

// Dimension of each nontrivial strongly connected class of the coding graph
// of the materialized system, solved as a finite system.
ComponentReport dimension_per_component(const GifsSystem& system, const SolverOptions& opts = {});

std::string to_string(DimensionStatus s);

}  // namespace gifs
