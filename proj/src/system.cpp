#include "gifs/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gifs/error.hpp"

namespace gifs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShapeTol = 1e-9;
constexpr Index kEdgeHorizon = 4096;

}  // namespace

Index GifsSystem::add_vertex(const Shape& j, const Shape& o, std::string label) {
  Index v = graph.add_vertex();
  seeds.push_back({SeedSet{j, SeedRole::Compact}, SeedSet{o, SeedRole::Open}});
  if (label.empty()) label = std::to_string(v + 1);
  vertex_labels.push_back(std::move(label));
  return v;
}

Index GifsSystem::add_edge(Index from, Index to, MapSpec map, std::string label) {
  Index e = graph.add_edge(from, to);
  maps.push_back(std::move(map));
  if (label.empty()) label = vertex_label(from) + ">" + vertex_label(to);
  edge_labels.push_back(std::move(label));
  return e;
}

std::string GifsSystem::vertex_label(Index v) const {
  return v < vertex_labels.size() ? vertex_labels[v] : std::to_string(v + 1);
}

std::string GifsSystem::edge_label(Index e) const {
  return e < edge_labels.size() ? edge_labels[e] : "e" + std::to_string(e);
}

SystemFamily finite_family(GifsSystem system) {
  SystemFamily f;
  f.name = system.name;
  Index k = system.graph.vertex_count();
  f.horizons = {k};
  f.materialize = [sys = std::move(system)](Index) { return sys; };
  return f;
}

GifsSystem restrict_edges(const GifsSystem& system, const std::vector<Index>& edges) {
  GifsSystem out;
  out.name = system.name;
  out.dim = system.dim;
  out.r = system.r;
  out.depth2 = system.depth2;
  out.beta = system.beta;
  out.c_MT = system.c_MT;
  for (Index v = 0; v < system.graph.vertex_count(); ++v)
    out.add_vertex(system.J(v), system.O(v), system.vertex_label(v));
  for (Index e : edges) {
    const auto& ed = system.graph.edge(e);
    out.add_edge(ed.initial, ed.terminal, system.maps[e], system.edge_label(e));
  }
  return out;
}

const ConditionEntry& ConditionReport::at(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  fail(ErrorCode::InvalidArgument, "no condition " + name);
}

bool ConditionReport::any_violated() const {
  // separation is a disjunction: SSC or OSC suffices
  bool sep_violated = true, has_sep = false;
  for (const auto& e : entries) {
    if (e.name == "G6S" || e.name == "G6O") {
      has_sep = true;
      sep_violated = sep_violated && e.status == ConditionStatus::Violated;
    } else if (e.status == ConditionStatus::Violated) {
      return true;
    }
  }
  return has_sep && sep_violated;
}

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::Satisfied: return "satisfied";
    case ConditionStatus::Violated: return "violated";
    case ConditionStatus::NotCheckable: return "not-checkable";
  }
  return "?";
}

std::string to_string(SeparationVerdict v) {
  switch (v) {
    case SeparationVerdict::CertifiedSeparated: return "certified-separated";
    case SeparationVerdict::OverlapWitness: return "overlap-witness";
    case SeparationVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(SummabilityVerdict v) {
  switch (v) {
    case SummabilityVerdict::Summable: return "summable";
    case SummabilityVerdict::Divergent: return "divergent";
    case SummabilityVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

ConditionReport validate_conditions(const GifsSystem& sys, Index horizon) {
  if (horizon == 0) fail(ErrorCode::InvalidArgument, "horizon must be >= 1");
  ConditionReport rep;
  const Index nv = std::min(horizon, sys.graph.vertex_count());
  rep.horizon = nv;
  std::vector<Index> edges;
  for (Index e = 0; e < sys.graph.edge_count() && edges.size() < kEdgeHorizon; ++e) {
    const auto& ed = sys.graph.edge(e);
    if (ed.initial < nv && ed.terminal < nv) edges.push_back(e);
  }

  {
    ConditionEntry g2{"G2"};
    double sup = 0;
    for (Index v = 0; v < nv; ++v) sup = std::max(sup, diameter(sys.J(v), sys.dim));
    g2.value = sup;
    g2.status = std::isfinite(sup) ? ConditionStatus::Satisfied : ConditionStatus::Violated;
    rep.entries.push_back(g2);
  }
  {
    ConditionEntry g3{"G3", ConditionStatus::Satisfied};
    double worst = kInf;
    for (Index v = 0; v < nv; ++v) {
      double d = distance_to_complement(sys.J(v), sys.O(v), sys.dim);
      if (d < worst) worst = d;
      if (d <= 0 && g3.status != ConditionStatus::Violated) {
        g3.status = ConditionStatus::Violated;
        g3.witness = "vertex " + sys.vertex_label(v);
      }
    }
    g3.value = worst;
    rep.entries.push_back(g3);
  }
  {
    ConditionEntry g4{"G4", ConditionStatus::Satisfied};
    double worst = 0;
    for (Index e : edges) {
      const auto& ed = sys.graph.edge(e);
      Shape img = image_enclosure(sys.maps[e], sys.J(ed.terminal));
      if (!contains(sys.J(ed.initial), img, sys.dim, kShapeTol)) {
        g4.status = ConditionStatus::Violated;
        g4.witness = "edge " + sys.edge_label(e) + " image leaves J";
        break;
      }
      double sup = derivative_range_over_set(sys.maps[e], sys.J(ed.terminal)).upper;
      if (!sys.depth2) {
        worst = std::max(worst, sup);
        if (sup > sys.r * (1 + 1e-12)) {
          g4.status = ConditionStatus::Violated;
          g4.witness = "edge " + sys.edge_label(e) + " derivative exceeds r";
          break;
        }
        continue;
      }
      for (Index f : sys.graph.out_edges(ed.terminal)) {
        const auto& fd = sys.graph.edge(f);
        if (fd.terminal >= nv) continue;
        Shape inner = image_enclosure(sys.maps[f], sys.J(fd.terminal));
        double two = derivative_range_over_set(sys.maps[e], inner).upper *
                     derivative_range_over_set(sys.maps[f], sys.J(fd.terminal)).upper;
        worst = std::max(worst, std::sqrt(two));
        if (two > sys.r * sys.r * (1 + 1e-12)) {
          g4.status = ConditionStatus::Violated;
          g4.witness = "edges " + sys.edge_label(e) + "," + sys.edge_label(f) + " two-step derivative exceeds r^2";
          break;
        }
      }
      if (g4.status == ConditionStatus::Violated) break;
    }
    g4.value = worst;
    rep.entries.push_back(g4);
  }
  for (auto mode : {SeparationMode::SSC, SeparationMode::OSC}) {
    auto sep = check_separation(sys, horizon, mode);
    ConditionEntry c{mode == SeparationMode::SSC ? "G6S" : "G6O"};
    c.value = sep.min_gap;
    switch (sep.verdict) {
      case SeparationVerdict::CertifiedSeparated: c.status = ConditionStatus::Satisfied; break;
      case SeparationVerdict::OverlapWitness: c.status = ConditionStatus::Violated; break;
      case SeparationVerdict::Inconclusive: c.status = ConditionStatus::NotCheckable; break;
    }
    if (sep.witness)
      c.witness = "edges " + sys.edge_label(sep.witness->first) + "," + sys.edge_label(sep.witness->second);
    rep.entries.push_back(c);
  }
  {
    ConditionEntry g9{"G9J", ConditionStatus::Satisfied};
    double c = 0;
    for (Index v = 0; v < nv; ++v) {
      double sup = 0;
      for (Index e : sys.graph.out_edges(v)) {
        Index u = sys.graph.edge(e).terminal;
        if (u < nv) sup = std::max(sup, derivative_range_over_set(sys.maps[e], sys.J(u)).upper);
      }
      if (sup == 0) continue;
      c = std::max(c, diameter(sys.J(v), sys.dim) / sup);
    }
    g9.value = c;
    if (!std::isfinite(c)) g9.status = ConditionStatus::Violated;
    rep.entries.push_back(g9);
  }
  return rep;
}

SeparationReport check_separation(const GifsSystem& sys, Index horizon, SeparationMode mode) {
  SeparationReport rep;
  rep.mode = mode;
  const Index nv = std::min(horizon, sys.graph.vertex_count());
  bool inconclusive = false;
  for (Index v = 0; v < nv; ++v) {
    std::vector<Index> out;
    for (Index e : sys.graph.out_edges(v))
      if (e < kEdgeHorizon && sys.graph.edge(e).terminal < nv) out.push_back(e);
    std::vector<Shape> img(out.size());
    std::vector<char> exact(out.size());
    for (Index k = 0; k < out.size(); ++k) {
      bool ex = true;
      img[k] = image_enclosure(sys.maps[out[k]], sys.J(sys.graph.edge(out[k]).terminal), &ex);
      exact[k] = ex;
    }
    for (Index a = 0; a < out.size(); ++a)
      for (Index b = a + 1; b < out.size(); ++b) {
        ++rep.pairs_checked;
        double g = gap(img[a], img[b], sys.dim);
        rep.min_gap = std::min(rep.min_gap, g);
        bool ok = mode == SeparationMode::SSC ? g > kShapeTol : g >= -kShapeTol;
        if (ok) continue;
        if (exact[a] && exact[b]) {
          if (rep.verdict != SeparationVerdict::OverlapWitness) {
            rep.verdict = SeparationVerdict::OverlapWitness;
            rep.witness = std::pair{out[a], out[b]};
          }
        } else {
          inconclusive = true;
          if (!rep.witness) rep.witness = std::pair{out[a], out[b]};
        }
      }
  }
  if (rep.verdict != SeparationVerdict::OverlapWitness) {
    if (inconclusive) {
      rep.verdict = SeparationVerdict::Inconclusive;
    } else {
      rep.witness.reset();
    }
  }
  return rep;
}

ReducedSystem reduce_to_simple(const GifsSystem& sys) {
  auto rep = validate_conditions(sys, std::max<Index>(sys.graph.vertex_count(), 1));
  for (const char* c : {"G3", "G4"})
    if (rep.at(c).status == ConditionStatus::Violated)
      fail(ErrorCode::ConditionViolation, std::string(c) + " fails: " + rep.at(c).witness);

  ReducedSystem out;
  GifsSystem& r = out.system;
  r.name = sys.name.empty() ? "reduced" : sys.name + "/reduced";
  r.dim = sys.dim;
  r.r = sys.r;
  r.depth2 = sys.depth2;
  r.beta = sys.beta;
  r.c_MT = sys.c_MT;
  r.horizon = sys.horizon;
  if (!sys.graph.is_simple()) r.tail = sys.tail;  // coding states are already edges
  const auto& g = sys.graph;
  for (Index e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    r.add_vertex(image_enclosure(sys.maps[e], sys.J(ed.terminal)), sys.O(ed.initial), sys.edge_label(e));
    if (g.out_edges(ed.terminal).empty()) out.dead_ends.push_back(e);
  }
  for (Index e = 0; e < g.edge_count(); ++e)
    for (Index f : g.out_edges(g.edge(e).terminal))
      r.add_edge(e, f, sys.maps[e], sys.edge_label(e) + "|" + sys.edge_label(f));
  return out;
}

std::vector<Index> edge_word_from_vertex_word(const DirectedMultigraph& g, const std::vector<Index>& vertices) {
  std::vector<Index> out;
  for (Index k = 0; k + 1 < vertices.size(); ++k) {
    Index found = Index(-1);
    for (Index e : g.out_edges(vertices[k]))
      if (g.edge(e).terminal == vertices[k + 1]) {
        found = e;
        break;
      }
    if (found == Index(-1))
      fail(ErrorCode::NonAdmissibleWord, "no edge " + std::to_string(vertices[k]) + "->" +
                                             std::to_string(vertices[k + 1]));
    out.push_back(found);
  }
  return out;
}

std::vector<Index> vertex_word_from_edge_word(const DirectedMultigraph& g, const std::vector<Index>& edges) {
  std::vector<Index> out;
  for (Index k = 0; k < edges.size(); ++k) {
    const auto& ed = g.edge(edges[k]);
    if (k > 0 && g.edge(edges[k - 1]).terminal != ed.initial)
      fail(ErrorCode::NonAdmissibleWord, "edges do not chain");
    if (k == 0) out.push_back(ed.initial);
    out.push_back(ed.terminal);
  }
  return out;
}

std::vector<double> coding_row_sups(const GifsSystem& sys, NormSelector sel) {
  const auto& g = sys.graph;
  std::vector<double> out;
  if (g.is_simple()) {
    out.assign(g.vertex_count(), 0.0);
    for (Index e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edge(e);
      out[ed.initial] =
          std::max(out[ed.initial], derivative_range_over_set(sys.maps[e], sys.J(ed.terminal), sel).upper);
    }
  } else {
    out.assign(g.edge_count(), 0.0);
    for (Index e = 0; e < g.edge_count(); ++e) {
      Index t = g.edge(e).terminal;
      if (!g.out_edges(t).empty()) out[e] = derivative_range_over_set(sys.maps[e], sys.J(t), sel).upper;
    }
  }
  return out;
}

SummabilityReport summability_interval(const SystemFamily& family, NormSelector sel,
                                       const std::vector<Index>& horizons, const std::vector<double>& s_grid,
                                       double divergence_threshold) {
  SummabilityReport rep;
  rep.horizons = horizons.empty() ? family.horizons : horizons;
  std::vector<std::vector<double>> sups;
  std::optional<TailWitness> witness;
  for (Index k : rep.horizons) {
    GifsSystem sys = family.materialize(k);
    sups.push_back(coding_row_sups(sys, sel));
    if (sys.tail) witness = sys.tail;
  }
  rep.has_witness = witness.has_value() || !family.infinite;
  if (witness) {
    rep.theta_hat = witness->threshold;
    rep.summable_at_theta = witness->summable_at_threshold;
  } else if (!family.infinite) {
    rep.theta_hat = 0.0;
    rep.summable_at_theta = false;
  }

  double largest_divergent = 0.0;
  for (double s : s_grid) {
    SummabilityPoint pt;
    pt.s = s;
    for (const auto& row : sups) {
      double sum = 0;
      for (double v : row) sum += v > 0 ? std::pow(v, s) : 0.0;
      pt.partial_sums.push_back(sum);
    }
    if (!family.infinite) {
      pt.verdict = SummabilityVerdict::Summable;
    } else if (witness && (s > witness->threshold || (s == witness->threshold && witness->summable_at_threshold)) &&
               std::isfinite(witness->tail_mass(s))) {
      pt.verdict = SummabilityVerdict::Summable;
    } else {
      bool nondecreasing = pt.partial_sums.size() >= 3;
      for (Index j = 2; j < pt.partial_sums.size(); ++j) {
        double a = pt.partial_sums[j - 1] - pt.partial_sums[j - 2];
        double b = pt.partial_sums[j] - pt.partial_sums[j - 1];
        if (b < a) nondecreasing = false;
      }
      if (nondecreasing && pt.partial_sums.back() > divergence_threshold) {
        pt.verdict = SummabilityVerdict::Divergent;
        largest_divergent = std::max(largest_divergent, s);
      }
    }
    rep.points.push_back(std::move(pt));
  }
  if (!witness && family.infinite) rep.theta_hat = largest_divergent;
  return rep;
}

}  // namespace gifs
