#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gifs/interval.hpp"
#include "gifs/system.hpp"

namespace gifs {

struct PotentialSpec {
  NormSelector selector = NormSelector::Norm;
  double s = 1.0;
  std::optional<double> epsilon;  // recorded only; the system already carries T_e(eps, .)
};

enum class PressureMethod { Spectral, WordSum };

struct PressureEstimate {
  double s = 0.0;
  std::optional<double> epsilon;
  // bracket for the pressure of the materialized subsystem; `lower` is also a
  // lower bound for the full system
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  // upper bound for the full countable system (equals `upper` for finite ones)
  double full_upper = std::numeric_limits<double>::infinity();
  int n = 0;  // word length (word sums)
  Index k = 0;  // alphabet horizon
  int m = 0;  // deepest refinement level of the state partition
  Index states = 0;
  Index transitions = 0;
  std::optional<Index> component;
  bool divergence = false;
  bool stalled = false;
  bool budget_hit = false;
  double max_variation = 0.0;  // largest log sup/inf ratio kept unsplit
  PressureMethod method = PressureMethod::Spectral;

  Interval<double> lambda() const;
  double width() const { return upper - lower; }
  bool no_periodic_words() const { return lower == -std::numeric_limits<double>::infinity() &&
                                           upper == -std::numeric_limits<double>::infinity(); }
};

struct SpectralOptions {
  int depth = 1;               // uniform partition depth when variation_tol <= 0
  double variation_tol = 0.0;  // adaptive: split states whose weights vary by more than this (log scale)
  int max_depth = 40;
  Index nnz_budget = 4'000'000;
  double cw_tol = 1e-10;
  int max_iter = 100000;
};

// Vertex coding of a system: the system itself when its graph is simple, the
// line graph otherwise (states are edges, T_{ee'} = T_e, seeds T_e(J_{t(e)})).
class CodingView {
 public:
  explicit CodingView(const GifsSystem& system);

  Index size() const { return seeds_.size(); }
  bool reduced() const { return reduced_; }
  const GifsSystem& system() const { return *sys_; }
  const std::vector<Index>& successors(Index i) const { return succ_[i]; }
  const std::vector<Index>& predecessors(Index i) const { return pred_[i]; }
  const MapSpec& map(Index i, Index j) const;
  const Shape& seed(Index i) const { return seeds_[i]; }
  bool admissible(Index i, Index j) const;
  TransitionMatrix matrix() const { return TransitionMatrix::from_rows(succ_); }
  int dim() const { return sys_->dim; }

  // Enclosure of the cylinder of a vertex word.
  Shape cylinder(const std::vector<Index>& word) const;

 private:
  const GifsSystem* sys_;
  bool reduced_;
  std::vector<Shape> seeds_;
  std::vector<std::vector<Index>> succ_;
  std::vector<std::vector<Index>> succ_edge_;  // simple graphs: edge per successor
  std::vector<std::vector<Index>> pred_;
};

// Enclosure of exp(S_n phi) over the cylinder of a coding word of length n+1.
Interval<double> cylinder_weight(const GifsSystem& system, const std::vector<Index>& word,
                                 const PotentialSpec& potential);

// log of the sup-weight partition sum over words of n letters.
double log_partition_sup(const GifsSystem& system, const PotentialSpec& potential, int n);

PressureEstimate pressure_word_sum(const GifsSystem& system, const PotentialSpec& potential, int n);

PressureEstimate pressure_spectral(const GifsSystem& system, const PotentialSpec& potential,
                                   const SpectralOptions& opts = {});

// As pressure_spectral, restricted to a subset of coding states.
PressureEstimate pressure_spectral(const CodingView& view, const std::vector<Index>& states,
                                   const PotentialSpec& potential, const SpectralOptions& opts = {});

struct ComponentPressure {
  std::vector<Index> states;  // coding states of the class
  PressureEstimate estimate;
};

// Per strongly connected class of the coding graph; the overall estimate is
// the max, with `component` set to the argmax class.
PressureEstimate pressure_scc_max(const GifsSystem& system, const PotentialSpec& potential,
                                  const SpectralOptions& opts = {},
                                  std::vector<ComponentPressure>* per_component = nullptr);

struct LadderEntry {
  Index horizon = 0;
  PressureEstimate estimate;
  double certified_lower = 0.0;  // running max of lowers
  double certified_upper = 0.0;  // running min of full-system uppers
};

std::vector<LadderEntry> truncation_ladder(const SystemFamily& family, const PotentialSpec& potential,
                                           const std::vector<Index>& horizons, const SpectralOptions& opts = {});

std::string to_string(PressureMethod m);

}  // namespace gifs
