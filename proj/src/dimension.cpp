#include "gifs/dimension.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gifs/error.hpp"

namespace gifs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Mode { Bowen, Upper, Lower };

bool family_conformal(const GifsSystem& sys) {
  return std::all_of(sys.maps.begin(), sys.maps.end(), [](const MapSpec& m) { return is_conformal(m); });
}

bool is_countable(const GifsSystem& sys) { return sys.horizon > 0 || !sys.graph.complete; }

class Solver {
 public:
  Solver(const SystemFamily& family, const SolverOptions& opts, Mode mode)
      : family_(family), opts_(opts), mode_(mode), start_(std::chrono::steady_clock::now()) {
    horizons_ = opts.horizons.empty() ? family.horizons : opts.horizons;
    if (horizons_.empty()) horizons_ = {0};
    vtol_ = opts.initial_variation;
    load(0);
  }

  DimensionResult run() {
    DimensionResult res;
    res.provenance.conformal = conformal_;
    const bool countable = is_countable(sys_);
    if (countable && !sys_.tail)
      fail(ErrorCode::SummabilityWitnessMissing, "countable system '" + sys_.name + "' has no tail witness");
    res.theta = countable ? sys_.tail->threshold : 0.0;
    res.c_scV2 = res.theta;
    res.provenance.summability_witness = !countable || sys_.tail.has_value();
    res.provenance.theta = res.theta;
    if (opts_.check_separation && sys_.graph.vertex_count() > 0) {
      Index h = sys_.graph.vertex_count();
      auto osc = check_separation(sys_, h, SeparationMode::OSC);
      res.provenance.osc = to_string(osc.verdict);
      if (mode_ != Mode::Upper && osc.verdict == SeparationVerdict::OverlapWitness)
        fail(ErrorCode::ConditionViolation, "open set condition fails: images of edges " +
                                                sys_.edge_label(osc.witness->first) + " and " +
                                                sys_.edge_label(osc.witness->second) + " overlap");
      res.provenance.ssc = to_string(check_separation(sys_, h, SeparationMode::SSC).verdict);
    }
    const double tol = opts_.tolerance > 0 ? opts_.tolerance : (countable ? 1e-3 : 1e-6);
    double lo = std::max(res.theta, opts_.floor_hint.value_or(0.0));
    double hi = opts_.s_max > 0 ? opts_.s_max : sys_.dim + 1.0;
    if (hi < lo) hi = lo;

    // sign at the floor
    {
      auto [elo, ehi] = evaluate(lo);
      if (elo.no_periodic_words() && ehi.no_periodic_words() && !countable) {
        finish(res, 0.0, 0.0, DimensionStatus::NoPeriodicWords);
        res.at_upper = ehi;
        res.message = "no periodic words: pressure is -inf";
        return res;
      }
      if (lo > 0 && ehi.full_upper < 0) {
        finish(res, lo, lo, DimensionStatus::IrregularSystem);
        res.at_upper = ehi;
        res.message = "pressure is negative at the summability threshold: no zero of the pressure";
        return res;
      }
      if (elo.lower >= 0) res.at_lower = elo;
    }
    // certify the top of the scan range
    for (;;) {
      auto [elo, ehi] = evaluate(hi);
      if (ehi.full_upper <= 0) {
        res.at_upper = ehi;
        break;
      }
      if (elo.lower > 0 || !refine(elo, ehi)) {
        finish(res, lo, hi, DimensionStatus::IrregularSystem);
        res.message = "no certified sign change of the pressure in the scan range";
        return res;
      }
      if (exhausted()) {
        finish(res, lo, hi, DimensionStatus::BudgetExhausted);
        return res;
      }
    }

    DimensionStatus status = DimensionStatus::Converged;
    while (hi - lo > tol) {
      if (exhausted()) {
        status = DimensionStatus::BudgetExhausted;
        break;
      }
      double mid = lo / 2 + hi / 2;
      if (mid <= lo || mid >= hi) break;
      auto [elo, ehi] = evaluate(mid);
      bool moved = false;
      if (elo.lower >= 0) {
        lo = mid;
        res.at_lower = elo;
        moved = true;
      }
      if (ehi.full_upper <= 0) {
        hi = mid;
        res.at_upper = ehi;
        moved = true;
      }
      if (moved) continue;
      if (!refine(elo, ehi)) {
        status = DimensionStatus::ResolutionLimited;
        squeeze(res, lo, hi, mid, tol);
        break;
      }
    }
    finish(res, lo, hi, status);
    return res;
  }

 private:
  void load(Index idx) {
    hidx_ = idx;
    sys_ = family_.materialize(horizons_[idx]);
    conformal_ = family_conformal(sys_);
  }

  bool exhausted() const {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return evals_ >= opts_.max_evaluations || secs > opts_.time_budget;
  }

  std::pair<PressureEstimate, PressureEstimate> evaluate(double s) {
    SpectralOptions so = opts_.spectral;
    so.variation_tol = vtol_;
    NormSelector lo_sel = mode_ == Mode::Upper ? NormSelector::Norm : NormSelector::Conorm;
    NormSelector hi_sel = mode_ == Mode::Lower ? NormSelector::Conorm : NormSelector::Norm;
    if (conformal_) lo_sel = hi_sel = NormSelector::Norm;
    ++evals_;
    PressureEstimate a = pressure_spectral(sys_, {lo_sel, s, std::nullopt}, so);
    if (lo_sel == hi_sel) return {a, a};
    ++evals_;
    PressureEstimate b = pressure_spectral(sys_, {hi_sel, s, std::nullopt}, so);
    return {a, b};
  }

  // Tighten whichever error dominates: the tail (next horizon) or the
  // partition (halve the variation tolerance).
  bool refine(const PressureEstimate& elo, const PressureEstimate& ehi) {
    bool can_horizon = hidx_ + 1 < horizons_.size();
    bool partition_limited = elo.max_variation > 0 || ehi.max_variation > 0 || elo.budget_hit || ehi.budget_hit;
    bool can_partition = partition_limited && vtol_ / 2 >= opts_.variation_floor;
    double tail_gap = ehi.full_upper - ehi.upper;
    double part_gap = ehi.upper - elo.lower;
    if (can_horizon && (tail_gap > part_gap || !can_partition)) {
      load(hidx_ + 1);
      return true;
    }
    if (can_partition) {
      vtol_ /= 2;
      return true;
    }
    return false;
  }

  // At the finest available resolution the pressure bracket at `stuck`
  // straddles 0. Pressure decreases in s, so each end of [lo, hi] can still
  // move toward `stuck` by bisecting its own side.
  void squeeze(DimensionResult& res, double& lo, double& hi, double stuck, double tol) {
    for (double a = lo, b = stuck; b - a > tol / 2 && !exhausted();) {
      double m = a / 2 + b / 2;
      auto [elo, ehi] = evaluate(m);
      if (elo.lower >= 0) {
        a = lo = m;
        res.at_lower = elo;
      } else {
        b = m;
      }
    }
    for (double a = stuck, b = hi; b - a > tol / 2 && !exhausted();) {
      double m = a / 2 + b / 2;
      auto [elo, ehi] = evaluate(m);
      if (ehi.full_upper <= 0) {
        b = hi = m;
        res.at_upper = ehi;
      } else {
        a = m;
      }
    }
  }

  void finish(DimensionResult& res, double lo, double hi, DimensionStatus st) {
    res.s_lower = lo;
    res.s_upper = hi;
    res.status = st;
    res.horizon = horizons_[hidx_];
    res.variation_tol = vtol_;
    res.evaluations = evals_;
  }

  const SystemFamily& family_;
  SolverOptions opts_;
  Mode mode_;
  std::chrono::steady_clock::time_point start_;
  std::vector<Index> horizons_;
  Index hidx_ = 0;
  double vtol_ = 0.05;
  GifsSystem sys_;
  bool conformal_ = false;
  int evals_ = 0;
};

}  // namespace

std::string to_string(DimensionStatus s) {
  switch (s) {
    case DimensionStatus::Converged: return "converged";
    case DimensionStatus::ResolutionLimited: return "resolution-limited";
    case DimensionStatus::BudgetExhausted: return "budget-exhausted";
    case DimensionStatus::IrregularSystem: return "irregular";
    case DimensionStatus::NoPeriodicWords: return "no-periodic-words";
  }
  return "?";
}

SystemFamily family_of(const GifsSystem& system) {
  if (!is_countable(system)) return finite_family(system);
  SystemFamily f;
  f.name = system.name;
  f.horizons = {system.horizon};
  f.infinite = true;
  f.threshold = system.tail ? system.tail->threshold : 0.0;
  f.materialize = [system](Index) { return system; };
  return f;
}

DimensionResult bowen_dimension(const SystemFamily& family, const SolverOptions& opts) {
  return Solver(family, opts, Mode::Bowen).run();
}

DimensionResult bowen_dimension(const GifsSystem& system, const SolverOptions& opts) {
  return bowen_dimension(family_of(system), opts);
}

DimensionResult upper_estimate(const SystemFamily& family, const SolverOptions& opts) {
  return Solver(family, opts, Mode::Upper).run();
}

DimensionResult lower_estimate(const SystemFamily& family, const SolverOptions& opts) {
  return Solver(family, opts, Mode::Lower).run();
}

ComponentReport dimension_per_component(const GifsSystem& system, const SolverOptions& opts) {
  ComponentReport rep;
  CodingView view(system);
  auto scc = strongly_connected_components(view.matrix());
  const auto& g = system.graph;
  for (Index c = 0; c < scc.components.size(); ++c) {
    if (scc.trivial[c]) continue;
    const auto& states = scc.components[c];
    std::vector<Index> edges;
    if (view.reduced()) {
      edges = states;
    } else {
      std::vector<char> in(g.vertex_count(), 0);
      for (Index v : states) in[v] = 1;
      for (Index e = 0; e < g.edge_count(); ++e)
        if (in[g.edge(e).initial] && in[g.edge(e).terminal]) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    GifsSystem sub = restrict_edges(system, edges);
    sub.horizon = 0;
    sub.graph.complete = true;
    sub.tail.reset();
    ComponentDimension cd;
    cd.component = c;
    cd.states = states;
    cd.result = bowen_dimension(sub, opts);
    cd.result.component = c;
    rep.components.push_back(std::move(cd));
  }
  if (rep.components.empty()) {
    rep.global.status = DimensionStatus::NoPeriodicWords;
    rep.global.message = "no strongly connected class carries a periodic word";
    return rep;
  }
  const ComponentDimension* best = &rep.components.front();
  double lo = -kInf;
  for (const auto& cd : rep.components) {
    lo = std::max(lo, cd.result.s_lower);
    if (cd.result.s_upper > best->result.s_upper) best = &cd;
  }
  rep.global = best->result;
  rep.global.s_lower = lo;
  return rep;
}

}  // namespace gifs
