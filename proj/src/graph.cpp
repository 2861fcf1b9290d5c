#include "gifs/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "gifs/error.hpp"

namespace gifs {

Index DirectedMultigraph::add_vertex() {
  out_.emplace_back();
  return out_.size() - 1;
}

Index DirectedMultigraph::add_edge(Index from, Index to) {
  if (from >= out_.size() || to >= out_.size())
    fail(ErrorCode::InvalidArgument, "edge endpoint outside the vertex set");
  edges_.push_back({from, to});
  out_[from].push_back(edges_.size() - 1);
  return edges_.size() - 1;
}

std::optional<std::pair<Index, Index>> DirectedMultigraph::parallel_pair() const {
  for (Index v = 0; v < out_.size(); ++v) {
    std::set<Index> seen;
    for (Index e : out_[v])
      if (!seen.insert(edges_[e].terminal).second) return std::pair{v, edges_[e].terminal};
  }
  return std::nullopt;
}

bool DirectedMultigraph::is_simple() const { return !parallel_pair().has_value(); }

TransitionMatrix TransitionMatrix::from_rows(std::vector<std::vector<Index>> rows) {
  TransitionMatrix m;
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  m.rows_ = std::move(rows);
  return m;
}

bool TransitionMatrix::operator()(Index i, Index j) const {
  const auto& r = rows_[i];
  return std::binary_search(r.begin(), r.end(), j);
}

void TransitionMatrix::set(Index i, Index j) {
  auto& r = rows_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j);
  if (it == r.end() || *it != j) r.insert(it, j);
}

Index TransitionMatrix::nonzeros() const {
  Index n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

TransitionMatrix TransitionMatrix::restrict(const std::vector<Index>& states) const {
  std::vector<Index> pos(rows_.size(), Index(-1));
  for (Index k = 0; k < states.size(); ++k) pos[states[k]] = k;
  std::vector<std::vector<Index>> rows(states.size());
  for (Index k = 0; k < states.size(); ++k)
    for (Index j : rows_[states[k]])
      if (pos[j] != Index(-1)) rows[k].push_back(pos[j]);
  return from_rows(std::move(rows));
}

bool TransitionMatrix::is_submatrix_of(const TransitionMatrix& parent) const {
  for (Index i = 0; i < rows_.size(); ++i)
    for (Index j : rows_[i])
      if (i >= parent.size() || !parent(i, j)) return false;
  return true;
}

TransitionMatrix build_edge_transition(const DirectedMultigraph& g) {
  std::vector<std::vector<Index>> rows(g.edge_count());
  for (Index e = 0; e < g.edge_count(); ++e) rows[e] = g.out_edges(g.edge(e).terminal);
  return TransitionMatrix::from_rows(std::move(rows));
}

TransitionMatrix build_vertex_transition(const DirectedMultigraph& g) {
  if (auto p = g.parallel_pair())
    fail(ErrorCode::NonSimpleGraph, "parallel edges " + std::to_string(p->first) + "->" +
                                        std::to_string(p->second));
  std::vector<std::vector<Index>> rows(g.vertex_count());
  for (const auto& e : g.edges()) rows[e.initial].push_back(e.terminal);
  return TransitionMatrix::from_rows(std::move(rows));
}

Index SccDecomposition::nontrivial_count() const {
  return std::count(trivial.begin(), trivial.end(), false);
}

// Iterative Tarjan.
SccDecomposition strongly_connected_components(const TransitionMatrix& a) {
  const Index n = a.size();
  constexpr Index unvisited = Index(-1);
  std::vector<Index> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Index> stack;
  std::vector<std::pair<Index, Index>> call;  // (state, next child position)
  Index counter = 0;
  SccDecomposition out;
  out.component_of.assign(n, 0);

  for (Index root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos == 0 && index[v] == unvisited) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      const auto& row = a.row(v);
      if (pos < row.size()) {
        Index w = row[pos++];
        if (index[w] == unvisited) {
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<Index> comp;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.components.push_back(std::move(comp));
      }
      Index finished = v;
      call.pop_back();
      if (!call.empty()) {
        Index parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  std::reverse(out.components.begin(), out.components.end());
  for (Index c = 0; c < out.components.size(); ++c) {
    const auto& comp = out.components[c];
    for (Index v : comp) out.component_of[v] = c;
    out.trivial.push_back(comp.size() == 1 && !a(comp[0], comp[0]));
  }
  return out;
}

bool is_irreducible(const TransitionMatrix& a) {
  if (a.size() == 0) return false;
  auto scc = strongly_connected_components(a);
  return scc.components.size() == 1 && !scc.trivial[0];
}

IrreducibleLadder::IrreducibleLadder(CountableMatrix a, Index path_budget)
    : a_(std::move(a)), budget_(path_budget) {}

std::vector<Index> IrreducibleLadder::connector(Index from, Index to) const {
  // Shortest path from -> ... -> to with at least one transition.
  const Index h = a_.horizon;
  std::vector<Index> parent(h, Index(-1));
  std::vector<Index> depth(h, 0);
  std::deque<Index> queue;
  for (Index j = 0; j < h; ++j)
    if (a_.entry(from, j)) {
      if (j == to) return {from, to};
      if (parent[j] == Index(-1)) {
        parent[j] = from;
        depth[j] = 1;
        queue.push_back(j);
      }
    }
  while (!queue.empty()) {
    Index v = queue.front();
    queue.pop_front();
    if (depth[v] >= budget_) continue;
    for (Index j = 0; j < h; ++j) {
      if (!a_.entry(v, j)) continue;
      if (j == to) {
        std::vector<Index> path{to, v};
        for (Index u = v; u != from;) {
          u = parent[u];
          path.push_back(u);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (parent[j] == Index(-1) && j != from) {
        parent[j] = v;
        depth[j] = depth[v] + 1;
        queue.push_back(j);
      }
    }
  }
  fail(ErrorCode::ConnectorSearchExhausted,
       "no connector " + std::to_string(from) + "->" + std::to_string(to) + " within budget");
}

const IrreducibleLadder::Level& IrreducibleLadder::level(Index n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "ladder level must be >= 1");
  if (n > a_.horizon) fail(ErrorCode::InvalidArgument, "ladder level beyond search horizon");
  while (built_ < n) {
    Index j = built_;
    std::vector<std::pair<Index, Index>> pairs;
    for (Index i = 0; i <= j; ++i) {
      pairs.push_back({i, j});
      if (i != j) pairs.push_back({j, i});
    }
    for (auto [from, to] : pairs) {
      auto path = connector(from, to);
      for (Index k = 0; k + 1 < path.size(); ++k) {
        auto& out = cached_out_[path[k]];
        if (std::find(out.begin(), out.end(), path[k + 1]) == out.end()) out.push_back(path[k + 1]);
      }
      for (Index v : path)
        if (std::find(members_.begin(), members_.end(), v) == members_.end()) members_.push_back(v);
    }
    ++built_;

    Level lv;
    lv.states = members_;
    std::sort(lv.states.begin(), lv.states.end());
    std::vector<std::vector<Index>> rows(lv.states.size());
    for (Index p = 0; p < lv.states.size(); ++p) {
      Index a = lv.states[p];
      for (Index q = 0; q < lv.states.size(); ++q) {
        Index b = lv.states[q];
        bool on = false;
        if (a < built_) {
          on = a_.entry(a, b);
        } else if (auto it = cached_out_.find(a); it != cached_out_.end()) {
          on = std::find(it->second.begin(), it->second.end(), b) != it->second.end();
        }
        if (on) rows[p].push_back(q);
      }
    }
    lv.matrix = TransitionMatrix::from_rows(std::move(rows));
    levels_.push_back(std::move(lv));
  }
  return levels_[n - 1];
}

void for_each_admissible_word(const TransitionMatrix& a, Index n,
                              const std::vector<Index>& alphabet,
                              const std::function<bool(const std::vector<Index>&)>& visit) {
  if (n == 0) return;
  std::vector<Index> rank(a.size(), Index(-1));
  for (Index k = 0; k < alphabet.size(); ++k) rank[alphabet[k]] = k;
  // Successor lists restricted to the alphabet, in alphabet order.
  std::vector<std::vector<Index>> next(a.size());
  for (Index x : alphabet) {
    for (Index y : a.row(x))
      if (rank[y] != Index(-1)) next[x].push_back(y);
    std::sort(next[x].begin(), next[x].end(), [&](Index p, Index q) { return rank[p] < rank[q]; });
  }
  std::vector<Index> word;
  word.reserve(n);
  std::vector<Index> cursor;
  cursor.reserve(n);
  for (Index first : alphabet) {
    word.assign(1, first);
    cursor.assign(1, 0);
    while (!word.empty()) {
      if (word.size() == n) {
        if (!visit(word)) return;
        word.pop_back();
        cursor.pop_back();
        continue;
      }
      const auto& succ = next[word.back()];
      Index& c = cursor.back();
      if (c < succ.size()) {
        word.push_back(succ[c++]);
        cursor.push_back(0);
      } else {
        word.pop_back();
        cursor.pop_back();
      }
    }
  }
}

std::vector<std::vector<Index>> admissible_words(const TransitionMatrix& a, Index n,
                                                 const std::vector<Index>& alphabet) {
  std::vector<std::vector<Index>> out;
  for_each_admissible_word(a, n, alphabet, [&](const std::vector<Index>& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

}  // namespace gifs
