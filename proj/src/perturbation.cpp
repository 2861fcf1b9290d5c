#include "gifs/perturbation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "gifs/error.hpp"
#include "gifs/scenarios.hpp"

namespace gifs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MapSpec at_eps_zero(const MapSpec& m) {
  MapSpec out = m;
  if (auto* a = std::get_if<PerturbedAffine>(&out.kind)) a->eps = 0.0;
  if (auto* c = std::get_if<PerturbedMoebiusCF>(&out.kind)) c->eps = 0.0;
  return out;
}

GifsSystem materialize_last(const SystemFamily& f) {
  Index h = f.horizons.empty() ? 0 : f.horizons.back();
  return f.materialize(h);
}

Eigen::Matrix2d scalar(double a) { return a * Eigen::Matrix2d::Identity(); }

}  // namespace

GifsSystem limit_system(const PerturbationFamily& family, const GifsSystem& perturbed) {
  GifsSystem out = perturbed;
  out.name = perturbed.name + "/limit";
  for (Index e = 0; e < out.maps.size(); ++e) {
    MapSpec m = at_eps_zero(perturbed.maps[e]);
    if (e >= family.base_edges) {
      Point a = apply(m, center(perturbed.J(perturbed.graph.edge(e).terminal)));
      m.kind = ConstantMap{a};
    }
    out.maps[e] = m;
  }
  return out;
}

std::vector<Point> limit_points(const PerturbationFamily& family, const GifsSystem& perturbed) {
  GifsSystem lim = limit_system(family, perturbed);
  std::vector<Point> out;
  for (Index e = family.base_edges; e < lim.maps.size(); ++e) out.push_back(std::get<ConstantMap>(lim.maps[e].kind).target);
  return out;
}

GifsSystem build_perturbed_affine(const AffineSpec& base, const AffineSpec& extension, double eps) {
  if (base.countable && !base.witness)
    fail(ErrorCode::SummabilityWitnessMissing, "countable base declared without a tail witness");
  if (extension.countable && !extension.witness)
    fail(ErrorCode::SummabilityWitnessMissing, "countable extension declared without a tail witness");
  if (base.J.size() != base.O.size() || extension.J.size() != extension.O.size())
    fail(ErrorCode::InvalidArgument, "every vertex needs both J and O");
  if (!extension.edges.empty() && extension.dim != base.dim)
    fail(ErrorCode::InvalidArgument, "extension dimension differs from the base");

  GifsSystem sys;
  sys.name = extension.edges.empty() ? "affine" : "perturbed_affine";
  sys.dim = base.dim;
  for (Index v = 0; v < base.J.size(); ++v) sys.add_vertex(base.J[v], base.O[v]);
  for (Index v = 0; v < extension.J.size(); ++v) sys.add_vertex(extension.J[v], extension.O[v]);
  const Index n = sys.graph.vertex_count();

  double r = 0;
  auto add = [&](const AffineEdgeSpec& spec) {
    if (spec.from >= n || spec.to >= n) fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
    PerturbedAffine a;
    a.base = spec.M;
    a.direction = spec.direction;
    a.kappa = spec.kappa;
    a.eps = eps;
    a.b = spec.b;
    a.b_slope = spec.b_slope;
    r = std::max(r, singular_values(a.matrix()).first);
    MapSpec m{a, sys.O(spec.to), 1.0};
    sys.add_edge(spec.from, spec.to, m, spec.label);
  };
  for (const auto& e : base.edges) add(e);
  for (const auto& e : extension.edges) add(e);
  if (r >= 1) fail(ErrorCode::ConditionViolation, "affine maps must be contractions");
  sys.r = std::max(r, 1e-12);

  const auto& w = extension.countable ? extension.witness : base.witness;
  if (w) {
    sys.tail = *w;
    sys.horizon = n;
    sys.graph.complete = false;
  }
  return sys;
}

GifsSystem build_perturbed_cf(const std::vector<Complex>& subE, const std::vector<Complex>& fullE, double eps) {
  return perturbed_cf(subE, fullE, eps);
}

AffineSpec affine_demo_base() {
  AffineSpec s;
  s.dim = 1;
  for (int v = 0; v < 2; ++v) {
    s.J.push_back(interval(0, 1));
    s.O.push_back(interval(-0.5, 1.5));
  }
  AffineEdgeSpec e11{0, 0, scalar(1.0 / 3), Point::Zero(), Eigen::Matrix2d::Identity(), 0.05, Point::Zero(), "11"};
  AffineEdgeSpec e12{0, 1, scalar(1.0 / 3), Point(2.0 / 3, 0), Eigen::Matrix2d::Identity(), 0.0, Point::Zero(), "12"};
  AffineEdgeSpec e21{1, 0, scalar(0.5), Point::Zero(), Eigen::Matrix2d::Identity(), 0.0, Point::Zero(), "21"};
  s.edges = {e11, e12, e21};
  return s;
}

AffineSpec affine_demo_extension() {
  AffineSpec s;
  s.dim = 1;
  s.J.push_back(interval(0, 1));
  s.O.push_back(interval(-0.5, 1.5));
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  s.edges = {
      {0, 2, Eigen::Matrix2d::Zero(), Point(0.5, 0), I, 0.1, Point(-0.05, 0), "13"},
      {1, 2, Eigen::Matrix2d::Zero(), Point(0.75, 0), I, 0.1, Point::Zero(), "23"},
      {2, 0, Eigen::Matrix2d::Zero(), Point(0.25, 0), I, 0.1, Point::Zero(), "31"},
  };
  return s;
}

GifsSystem affine_demo(double eps) {
  if (!(eps > 0 && eps < 1)) fail(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");
  GifsSystem sys = build_perturbed_affine(affine_demo_base(), affine_demo_extension(), eps);
  sys.name = "affine_demo_6_2";
  return sys;
}

PerturbationFamily affine_demo_family() {
  PerturbationFamily f;
  f.name = "affine_demo_6_2";
  AffineSpec none;
  none.dim = 1;
  f.base = build_perturbed_affine(affine_demo_base(), none, 0.0);
  f.base.name = "affine_demo_6_2/base";
  f.base_edges = f.base.graph.edge_count();
  f.builder = [](double eps) { return finite_family(affine_demo(eps)); };
  return f;
}

PerturbationFamily cf_family(const std::vector<Complex>& subE, const std::vector<Complex>& fullE) {
  if (subE.empty()) fail(ErrorCode::InvalidAlphabet, "the base alphabet is empty");
  PerturbationFamily f;
  f.name = "perturbed_cf";
  f.base = cf_system(subE);
  f.base_edges = subE.size();
  f.builder = [subE, fullE](double eps) { return finite_family(perturbed_cf(subE, fullE, eps)); };
  // validate eagerly so a bad alphabet fails at construction
  (void)perturbed_cf(subE, fullE, 0.5);
  return f;
}

PerturbationFamily cf_box_perturbation(const std::vector<Complex>& subE, std::vector<Index> boxes) {
  if (subE.empty()) fail(ErrorCode::InvalidAlphabet, "the base alphabet is empty");
  if (boxes.empty()) fail(ErrorCode::InvalidArgument, "at least one box is required");
  PerturbationFamily f;
  f.name = "perturbed_cf_box";
  f.base = cf_system(subE);
  f.base_edges = subE.size();
  f.countable = true;
  f.divergence_threshold = 1.0;
  f.builder = [subE, boxes](double eps) { return perturbed_cf_box_family(subE, eps, boxes); };
  (void)f.builder(0.5).materialize(f.builder(0.5).horizons.front());
  return f;
}

std::vector<SweepRecord> dimension_sweep(const PerturbationFamily& family, const std::vector<double>& epsilons,
                                         const SolverOptions& opts) {
  using Clock = std::chrono::steady_clock;
  std::vector<SweepRecord> rows;
  auto t0 = Clock::now();
  SweepRecord base;
  base.result = bowen_dimension(family.base, opts);
  base.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  base.base_lower = base.result.s_lower;
  base.base_upper = base.result.s_upper;
  base.status = to_string(base.result.status);
  rows.push_back(base);
  const double mid0 = base.result.mid();

  for (double eps : epsilons) {
    SweepRecord row;
    row.eps = eps;
    row.base_lower = base.base_lower;
    row.base_upper = base.base_upper;
    auto t = Clock::now();
    try {
      if (!(eps > 0 && eps < family.eps0)) fail(ErrorCode::InvalidArgument, "eps outside (0, eps0)");
      SystemFamily perturbed = family.builder(eps);
      row.hypothesis_verified = !perturbed.infinite || perturbed.threshold < base.result.s_lower;
      row.result = bowen_dimension(perturbed, opts);
      row.status = to_string(row.result.status);
      if (!row.hypothesis_verified) row.status += "; hypothesis-unverified";
      row.mid_deviation = std::abs(row.result.mid() - mid0);
    } catch (const Error& e) {
      row.failed = true;
      row.status = std::string(to_string(e.code())) + ": " + e.what();
      row.mid_deviation = std::numeric_limits<double>::quiet_NaN();
    }
    row.seconds = std::chrono::duration<double>(Clock::now() - t).count();
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRecord>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "eps,s_lower,s_upper,base_lower,base_upper,mid_deviation,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    os << r.eps << ",";
    if (r.failed)
      os << ",";
    else
      os << r.result.s_lower << "," << r.result.s_upper;
    os << "," << r.base_lower << "," << r.base_upper << ",";
    if (!r.failed) os << r.mid_deviation;
    os << "," << status << "\n";
  }
  return os.str();
}

std::vector<double> geometric_schedule(int j_first, int j_last) {
  if (j_last < j_first) fail(ErrorCode::InvalidArgument, "empty eps schedule");
  std::vector<double> out;
  for (int j = j_first; j <= j_last; ++j) out.push_back(std::ldexp(1.0, -j));
  return out;
}

DivergenceReport degeneracy_divergence_probe(const PerturbationFamily& family, double s,
                                             const std::vector<Index>& horizons, double eps) {
  if (!(s > 0)) fail(ErrorCode::InvalidArgument, "s must be positive");
  if (!(eps > 0 && eps < family.eps0)) fail(ErrorCode::InvalidArgument, "eps outside (0, eps0)");
  if (horizons.empty()) fail(ErrorCode::InvalidArgument, "no horizons given");
  for (Index k = 1; k < horizons.size(); ++k)
    if (horizons[k] <= horizons[k - 1]) fail(ErrorCode::InvalidArgument, "horizons must increase");

  DivergenceReport rep;
  rep.s = s;
  rep.eps = eps;
  rep.horizons = horizons;
  SystemFamily fam = family.builder(eps);
  double tail = 0.0;
  bool single_vertex = false;
  for (Index h : horizons) {
    GifsSystem sys = fam.materialize(h);
    double sup_sum = 0, inf_sum = 0;
    for (Index e = 0; e < sys.graph.edge_count(); ++e) {
      const Shape& J = sys.J(sys.graph.edge(e).terminal);
      sup_sum += std::pow(derivative_range_over_set(sys.maps[e], J, NormSelector::Norm).upper, s);
      inf_sum += std::pow(derivative_range_over_set(sys.maps[e], J, NormSelector::Conorm).lower, s);
    }
    rep.sup_sums.push_back(sup_sum);
    rep.inf_sums.push_back(inf_sum);
    single_vertex = sys.graph.vertex_count() == 1;
    // a one-vertex graph admits every word, so the inf sum bounds the partition function per letter
    if (single_vertex && inf_sum > 1 && !rep.finite_certificate) rep.finite_certificate = h;
    tail = sys.tail && sys.tail->tail_mass ? sys.tail->tail_mass(s) : (fam.infinite ? kInf : 0.0);
  }
  for (Index k = 1; k < rep.sup_sums.size(); ++k) rep.increments.push_back(rep.sup_sums[k] - rep.sup_sums[k - 1]);

  if (horizons.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(horizons.size());
    for (Index k = 0; k < horizons.size(); ++k) {
      double x = std::log(static_cast<double>(std::max<Index>(horizons[k], 1)));
      double y = std::log(rep.sup_sums[k]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double den = n * sxx - sx * sx;
    rep.growth_exponent = den > 0 ? (n * sxy - sx * sy) / den : 0.0;
  }

  rep.analytic_lower_diverges = family.divergence_threshold && s <= *family.divergence_threshold;
  bool sustained = false;
  if (rep.increments.size() >= 2) {
    double last = rep.increments.back(), prev = rep.increments[rep.increments.size() - 2];
    sustained = last > 0 && last >= 0.9 * prev;
  } else if (rep.increments.size() == 1) {
    sustained = rep.increments[0] > 0;
  }

  std::ostringstream imp;
  if (!fam.infinite) {
    rep.verdict = DivergenceVerdict::Converges;
    imp << "finite system: the potential sum is finite at every s";
  } else if (std::isfinite(tail)) {
    rep.verdict = DivergenceVerdict::Converges;
    imp << "the tail beyond the last horizon is bounded by " << tail << ", so P(s phi(eps)) < +inf";
  } else if (rep.analytic_lower_diverges && sustained) {
    rep.verdict = DivergenceVerdict::Diverges;
    imp << "inf_J |T_e'(eps)| >= eps/(|e| + 1)^2 on the degenerate letters, whose s-th powers sum to +inf for s <= "
        << *family.divergence_threshold << "; hence P(s phi(eps)) = +inf and dim K(eps) >= " << s;
  } else {
    rep.verdict = DivergenceVerdict::Inconclusive;
    imp << "no tail bound and no analytic comparison at this s";
  }
  if (rep.finite_certificate)
    imp << "; at horizon " << *rep.finite_certificate
        << " the inf sum exceeds 1, so the truncated pressure is positive and dim K(eps) > " << s;
  rep.implication = imp.str();
  return rep;
}

double degenerate_deviation(const PerturbationFamily& family, double eps) {
  GifsSystem sys = materialize_last(family.builder(eps));
  GifsSystem lim = limit_system(family, sys);
  constexpr int grid = 24;
  double worst = 0;
  for (Index e = family.base_edges; e < sys.graph.edge_count(); ++e) {
    const Shape& J = sys.J(sys.graph.edge(e).terminal);
    double d = 0;
    for (const auto& p : sample_points(J, sys.dim, grid)) d = std::max(d, (apply(sys.maps[e], p) - apply(lim.maps[e], p)).norm());
    Box box = bounding_box(J, sys.dim);
    d += derivative_range_over_set(sys.maps[e], J).upper * (box.hi - box.lo).norm() / grid;
    worst = std::max(worst, d);
  }
  return worst;
}

std::string to_string(DivergenceVerdict v) {
  switch (v) {
    case DivergenceVerdict::Diverges: return "diverges";
    case DivergenceVerdict::Converges: return "converges";
    case DivergenceVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace gifs
