#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gifs {

using Index = std::size_t;

struct Edge {
  Index initial = 0;
  Index terminal = 0;
};

// Finite materialization of a countable multigraph. `complete` is false when
// the graph is a horizon of a larger countable graph.
class DirectedMultigraph {
 public:
  DirectedMultigraph() = default;
  explicit DirectedMultigraph(Index vertices) : out_(vertices) {}

  Index add_vertex();
  Index add_edge(Index from, Index to);

  Index vertex_count() const { return out_.size(); }
  Index edge_count() const { return edges_.size(); }
  const Edge& edge(Index e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Index>& out_edges(Index v) const { return out_[v]; }

  bool is_simple() const;
  std::optional<std::pair<Index, Index>> parallel_pair() const;

  bool complete = true;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> out_;
};

// Sparse 0-1 matrix on a finite state set, stored as sorted adjacency rows.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(Index n) : rows_(n) {}

  static TransitionMatrix from_rows(std::vector<std::vector<Index>> rows);

  Index size() const { return rows_.size(); }
  const std::vector<Index>& row(Index i) const { return rows_[i]; }
  bool operator()(Index i, Index j) const;
  void set(Index i, Index j);
  Index nonzeros() const;

  // Induced matrix on `states` (indices of the result follow `states`).
  TransitionMatrix restrict(const std::vector<Index>& states) const;

  // Entrywise A <= parent on the common index range.
  bool is_submatrix_of(const TransitionMatrix& parent) const;

  bool operator==(const TransitionMatrix& o) const { return rows_ == o.rows_; }

 private:
  std::vector<std::vector<Index>> rows_;
};

TransitionMatrix build_edge_transition(const DirectedMultigraph& g);
TransitionMatrix build_vertex_transition(const DirectedMultigraph& g);

// Classes are listed in topological order: no transition leads from a later
// class to an earlier one.
struct SccDecomposition {
  std::vector<std::vector<Index>> components;
  std::vector<Index> component_of;
  std::vector<bool> trivial;

  Index nontrivial_count() const;
};

SccDecomposition strongly_connected_components(const TransitionMatrix& a);
bool is_irreducible(const TransitionMatrix& a);

// A countable 0-1 matrix on {0, 1, 2, ...}. Only states below `horizon` are
// ever inspected.
struct CountableMatrix {
  std::function<bool(Index, Index)> entry;
  Index horizon = 0;
};

// Finite irreducible truncations S_1 ⊆ S_2 ⊆ ... built by caching shortest
// connector paths between the first n states.
class IrreducibleLadder {
 public:
  struct Level {
    std::vector<Index> states;  // sorted
    TransitionMatrix matrix;    // indexed by position in `states`
  };

  explicit IrreducibleLadder(CountableMatrix a, Index path_budget = 64);

  const Level& level(Index n);

 private:
  std::vector<Index> connector(Index from, Index to) const;

  CountableMatrix a_;
  Index budget_;
  Index built_ = 0;
  std::vector<Index> members_;
  std::map<Index, std::vector<Index>> cached_out_;  // transitions from cached paths
  std::vector<Level> levels_;
};

// Depth-first enumeration of the admissible words of length n over `alphabet`
// in lexicographic order of the alphabet enumeration. The callback may
// return false to stop early.
void for_each_admissible_word(const TransitionMatrix& a, Index n,
                              const std::vector<Index>& alphabet,
                              const std::function<bool(const std::vector<Index>&)>& visit);

std::vector<std::vector<Index>> admissible_words(const TransitionMatrix& a, Index n,
                                                 const std::vector<Index>& alphabet);

}  // namespace gifs
