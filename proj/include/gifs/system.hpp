#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gifs/geometry.hpp"
#include "gifs/graph.hpp"
#include "gifs/maps.hpp"

namespace gifs {

enum class SeedRole { Compact, Open };

struct SeedSet {
  Shape shape;
  SeedRole role = SeedRole::Compact;
};

struct VertexSeeds {
  SeedSet J;
  SeedSet O{Ball{}, SeedRole::Open};
};

// Tail control for a finite horizon of a countable system. States are coding
// states: vertices of a simple graph, edges of a multigraph.
struct TailWitness {
  enum class Comparison { Geometric, PSeries };

  Comparison comparison = Comparison::Geometric;
  // sum of row_sup(state)^s over states beyond the horizon is finite for s > threshold
  double threshold = 0.0;
  bool summable_at_threshold = false;
  // upper bound for that sum (+inf when no bound is available)
  std::function<double(double s)> tail_mass;
  // sup over every outgoing transition of the full system of sup ||T'|| on the target seed
  std::function<double(Index state)> row_sup;
};

struct GifsSystem {
  std::string name;
  int dim = 2;
  DirectedMultigraph graph;
  std::vector<VertexSeeds> seeds;  // per vertex
  std::vector<MapSpec> maps;       // per edge
  double r = 0.9;                  // contraction bound (per step, or per two steps when depth2)
  bool depth2 = false;
  double beta = 1.0;
  double c_MT = 1.0;
  std::vector<std::string> vertex_labels;
  std::vector<std::string> edge_labels;
  Index horizon = 0;  // 0 for a genuinely finite system
  std::optional<TailWitness> tail;

  const Shape& J(Index v) const { return seeds[v].J.shape; }
  const Shape& O(Index v) const { return seeds[v].O.shape; }
  Index add_vertex(const Shape& j, const Shape& o, std::string label = {});
  Index add_edge(Index from, Index to, MapSpec map, std::string label = {});
  std::string vertex_label(Index v) const;
  std::string edge_label(Index e) const;
};

// Exhaustion of a countable system by finite horizons.
struct SystemFamily {
  std::string name;
  std::function<GifsSystem(Index k)> materialize;
  std::vector<Index> horizons;
  double threshold = 0.0;
  bool infinite = false;
};

SystemFamily finite_family(GifsSystem system);

// Subsystem on the listed edges (all vertices are kept).
GifsSystem restrict_edges(const GifsSystem& system, const std::vector<Index>& edges);

enum class ConditionStatus { Satisfied, Violated, NotCheckable };

struct ConditionEntry {
  std::string name;
  ConditionStatus status = ConditionStatus::NotCheckable;
  std::string witness;
  double value = std::numeric_limits<double>::quiet_NaN();
};

struct ConditionReport {
  Index horizon = 0;
  std::vector<ConditionEntry> entries;

  const ConditionEntry& at(const std::string& name) const;
  bool any_violated() const;
};

ConditionReport validate_conditions(const GifsSystem& system, Index horizon);

enum class SeparationMode { SSC, OSC };
enum class SeparationVerdict { CertifiedSeparated, OverlapWitness, Inconclusive };

struct SeparationReport {
  SeparationMode mode = SeparationMode::OSC;
  SeparationVerdict verdict = SeparationVerdict::CertifiedSeparated;
  double min_gap = std::numeric_limits<double>::infinity();
  std::optional<std::pair<Index, Index>> witness;  // edge pair
  Index pairs_checked = 0;
};

SeparationReport check_separation(const GifsSystem& system, Index horizon, SeparationMode mode);

std::string to_string(ConditionStatus s);
std::string to_string(SeparationVerdict v);

struct ReducedSystem {
  GifsSystem system;            // vertices are the edges of the input
  std::vector<Index> dead_ends;  // input edges whose terminal vertex has no outgoing edge
};

ReducedSystem reduce_to_simple(const GifsSystem& system);

// Edge words of the input are vertex words of the reduced system; these
// helpers translate between vertex and edge codings of a simple graph.
std::vector<Index> edge_word_from_vertex_word(const DirectedMultigraph& g, const std::vector<Index>& vertices);
std::vector<Index> vertex_word_from_edge_word(const DirectedMultigraph& g, const std::vector<Index>& edges);

// Row sups per coding state of the materialized system: sup over outgoing
// transitions of sup ||T'|| (or the conorm) on the target seed.
std::vector<double> coding_row_sups(const GifsSystem& system, NormSelector sel);

enum class SummabilityVerdict { Summable, Divergent, Inconclusive };

struct SummabilityPoint {
  double s = 0;
  SummabilityVerdict verdict = SummabilityVerdict::Inconclusive;
  std::vector<double> partial_sums;  // one per horizon
};

struct SummabilityReport {
  double theta_hat = 0.0;
  bool has_witness = false;
  bool summable_at_theta = false;
  std::vector<Index> horizons;
  std::vector<SummabilityPoint> points;
};

SummabilityReport summability_interval(const SystemFamily& family, NormSelector sel,
                                       const std::vector<Index>& horizons, const std::vector<double>& s_grid,
                                       double divergence_threshold = 1.0);

std::string to_string(SummabilityVerdict v);

}  // namespace gifs
