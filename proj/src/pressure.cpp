#include "gifs/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "gifs/error.hpp"
#include "gifs/spectral.hpp"

namespace gifs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// rounding allowance for accumulated log sums
constexpr double kLogSlack = 1e-12;

using Word = std::vector<Index>;

double safe_log(double x) { return x > 0 ? std::log(x) : -kInf; }

// exp(s * log-derivative) enclosure of one transition
Interval<double> step_weight(const MapSpec& map, const Shape& target, const PotentialSpec& p) {
  auto r = derivative_range_over_set(map, target, p.selector);
  return pow(Interval<double>(r.lower, r.upper), p.s);
}

struct LogSum {
  double m = -kInf;
  double acc = 0.0;
  void add(double x) {
    if (x == -kInf) return;
    if (x == kInf) {
      m = kInf;
      return;
    }
    if (m == kInf) return;
    if (x > m) {
      acc = acc * std::exp(m - x) + 1.0;
      m = x;
    } else {
      acc += std::exp(x - m);
    }
  }
  double value() const { return m == -kInf || m == kInf ? m : m + std::log(acc); }
};

bool has_prefix(const Word& w, const Word& p) {
  return w.size() >= p.size() && std::equal(p.begin(), p.end(), w.begin());
}

// [first, last) of the sorted words that extend p
std::pair<Index, Index> prefix_range(const std::vector<Word>& words, const Word& p) {
  Index lo = std::lower_bound(words.begin(), words.end(), p) - words.begin();
  Index hi = lo;
  while (hi < words.size() && has_prefix(words[hi], p)) ++hi;
  return {lo, hi};
}

std::optional<Index> find_word(const std::vector<Word>& words, const Word& w) {
  auto it = std::lower_bound(words.begin(), words.end(), w);
  if (it != words.end() && *it == w) return static_cast<Index>(it - words.begin());
  return std::nullopt;
}

// the state that is a prefix of p (p itself included)
std::optional<Index> covering_state(const std::vector<Word>& states, const Word& p) {
  for (Index len = p.size(); len >= 1; --len) {
    Word q(p.begin(), p.begin() + len);
    if (auto i = find_word(states, q)) return i;
  }
  return std::nullopt;
}

struct Partition {
  std::vector<Word> states;  // sorted
  std::vector<Shape> enc;
  std::vector<Word> internal;  // split words, sorted
  std::vector<Shape> internal_enc;
  int depth = 1;
  bool budget_hit = false;
  double max_variation = 0.0;
};

double variation(const CodingView& view, const std::vector<char>& mask, const Word& w, const Shape& enc,
                 NormSelector sel) {
  double v = 0.0;
  for (Index a : view.predecessors(w.front())) {
    if (!mask[a]) continue;
    auto r = derivative_range_over_set(view.map(a, w.front()), enc, sel);
    if (!(r.lower > 0)) return kInf;
    v = std::max(v, std::log(r.upper / r.lower));
  }
  return v;
}

Partition build_partition(const CodingView& view, const std::vector<Index>& subset, const std::vector<char>& mask,
                          const PotentialSpec& p, const SpectralOptions& opts) {
  struct Cell {
    Word w;
    Shape enc;
    double var = 0.0;
  };
  std::vector<Cell> cells;
  for (Index a : subset) cells.push_back({Word{a}, view.seed(a), 0.0});

  Index degree = 0;
  for (Index a : subset)
    for (Index b : view.successors(a)) degree += mask[b] ? 1 : 0;
  const Index avg = std::max<Index>(1, degree / std::max<Index>(1, subset.size()));
  const Index max_states = std::max<Index>(subset.size(), opts.nnz_budget / avg);

  Partition part;
  const bool adaptive = opts.variation_tol > 0 && p.s > 0;
  const int target_depth = adaptive ? opts.max_depth : std::min(opts.depth, opts.max_depth);
  auto children = [&](const Cell& c) {
    std::vector<Cell> out;
    for (Index x : view.successors(c.w.back())) {
      if (!mask[x]) continue;
      Word w = c.w;
      w.push_back(x);
      Shape enc = view.cylinder(w);
      out.push_back({std::move(w), std::move(enc), 0.0});
    }
    return out;
  };

  if (adaptive) {
    // Best first: always split the leaf of largest variation, so a limited
    // budget goes where the bracket is widest.
    auto var_of = [&](Cell& c) { c.var = p.s * variation(view, mask, c.w, c.enc, p.selector); };
    for (auto& c : cells) var_of(c);
    auto worse = [&](Index a, Index b) {
      if (cells[a].var != cells[b].var) return cells[a].var < cells[b].var;
      return cells[b].w < cells[a].w;
    };
    std::priority_queue<Index, std::vector<Index>, decltype(worse)> heap(worse);
    for (Index i = 0; i < cells.size(); ++i) heap.push(i);
    std::vector<char> removed(cells.size(), 0);
    Index count = cells.size();
    while (!heap.empty()) {
      Index i = heap.top();
      if (cells[i].var <= opts.variation_tol) break;
      heap.pop();
      if (static_cast<int>(cells[i].w.size()) >= target_depth) continue;
      auto ch = children(cells[i]);
      if (ch.empty()) continue;
      if (count + ch.size() - 1 > max_states) {
        part.budget_hit = true;
        heap.push(i);
        break;
      }
      count += ch.size() - 1;
      removed[i] = 1;
      part.internal.push_back(cells[i].w);
      part.internal_enc.push_back(cells[i].enc);
      for (auto& c : ch) {
        var_of(c);
        cells.push_back(std::move(c));
        removed.push_back(0);
        heap.push(cells.size() - 1);
      }
    }
    std::vector<Cell> leaves;
    for (Index i = 0; i < cells.size(); ++i) {
      if (removed[i]) continue;
      part.depth = std::max(part.depth, static_cast<int>(cells[i].w.size()));
      part.max_variation = std::max(part.max_variation, cells[i].var);
      leaves.push_back(std::move(cells[i]));
    }
    cells = std::move(leaves);
  } else {
    for (int round = 1; round < target_depth; ++round) {
      std::vector<Cell> next;
      Index count = cells.size();
      bool grew = false;
      for (auto& c : cells) {
        if (static_cast<int>(c.w.size()) != round) {
          next.push_back(std::move(c));
          continue;
        }
        auto ch = children(c);
        if (ch.empty() || count + ch.size() - 1 > max_states) {
          if (!ch.empty()) part.budget_hit = true;
          next.push_back(std::move(c));
          continue;
        }
        count += ch.size() - 1;
        part.internal.push_back(c.w);
        part.internal_enc.push_back(c.enc);
        for (auto& x : ch) next.push_back(std::move(x));
        grew = true;
      }
      cells = std::move(next);
      if (!grew) break;
      part.depth = round + 1;
    }
  }

  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.w < b.w; });
  for (auto& c : cells) {
    part.states.push_back(std::move(c.w));
    part.enc.push_back(std::move(c.enc));
  }
  std::vector<Index> order(part.internal.size());
  for (Index i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return part.internal[a] < part.internal[b]; });
  std::vector<Word> iw;
  std::vector<Shape> ie;
  for (Index i : order) {
    iw.push_back(part.internal[i]);
    ie.push_back(part.internal_enc[i]);
  }
  part.internal = std::move(iw);
  part.internal_enc = std::move(ie);
  return part;
}

// Targets of the partition state w: (target state, enclosure of the landing set).
template <typename Visit>
void for_each_transition(const CodingView& view, const std::vector<char>& mask, const Partition& part, Index i,
                         Visit&& visit) {
  const Word& w = part.states[i];
  if (w.size() == 1) {
    for (Index u : view.successors(w[0])) {
      if (!mask[u]) continue;
      auto [lo, hi] = prefix_range(part.states, Word{u});
      for (Index j = lo; j < hi; ++j) visit(j, view.map(w[0], u), part.enc[j]);
    }
    return;
  }
  Word p(w.begin() + 1, w.end());
  const MapSpec& map = view.map(w[0], w[1]);
  auto [lo, hi] = prefix_range(part.states, p);
  if (lo < hi) {
    for (Index j = lo; j < hi; ++j) visit(j, map, part.enc[j]);
    return;
  }
  if (auto j = covering_state(part.states, p)) visit(*j, map, view.cylinder(p));
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseRowMatrix<double> from_triplets(Index n, const Triplets& t) {
  SparseRowMatrix<double> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Upper bound for the pressure of the full countable system. Cells are the
// partition states, one leftover cell per split word v (words in [v] whose
// next letter lies beyond the horizon) and one cell for words starting beyond
// the horizon. Leaving a letter y costs at most row_sup(y)^s, so the latter
// cell carries the tail mass on its outgoing transitions.
double tail_corrected_upper(const CodingView& view, const std::vector<char>& mask, const Partition& part,
                            const Triplets& sup_trip, const PotentialSpec& p, const TailWitness& tail, double T,
                            const SpectralOptions& opts, bool* stalled) {
  const Index nF = part.states.size();
  const Index nI = part.internal.size();
  const Index tau = nF + nI;
  Triplets trip = sup_trip;
  auto rho = [&](Index letter) { return pow(Interval<double>(tail.row_sup(letter)), p.s).upper; };
  auto add = [&](Index i, Index j, double v) { trip.emplace_back(i, j, v); };

  for (Index i = 0; i < nF; ++i) {
    const Word& w = part.states[i];
    if (w.size() == 1) {
      add(i, tau, rho(w[0]));
      for (Index u : view.successors(w[0])) {
        if (!mask[u]) continue;
        auto [lo, hi] = prefix_range(part.internal, Word{u});
        for (Index j = lo; j < hi; ++j)
          add(i, nF + j, step_weight(view.map(w[0], u), part.internal_enc[j], p).upper);
      }
    } else {
      Word q(w.begin() + 1, w.end());
      auto [lo, hi] = prefix_range(part.internal, q);
      for (Index j = lo; j < hi; ++j)
        add(i, nF + j, step_weight(view.map(w[0], w[1]), part.internal_enc[j], p).upper);
    }
  }
  for (Index k = 0; k < nI; ++k) {
    const Word& v = part.internal[k];
    if (v.size() == 1) {
      add(nF + k, tau, rho(v[0]));
      continue;
    }
    Word q(v.begin() + 1, v.end());
    double wgt = step_weight(view.map(v[0], v[1]), view.cylinder(q), p).upper;
    if (auto j = find_word(part.internal, q)) {
      add(nF + k, nF + *j, wgt);
    } else if (auto j = covering_state(part.states, q)) {
      add(nF + k, *j, wgt);
    }
  }
  for (Index j = 0; j <= tau; ++j) add(tau, j, T);

  auto M = from_triplets(tau + 1, trip);
  for (Eigen::Index k = 0; k < M.nonZeros(); ++k)
    if (!std::isfinite(M.valuePtr()[k])) return kInf;
  auto scc = strongly_connected_components(sparsity_pattern(M));
  auto br = block_radius<double>(M, M, scc, opts.cw_tol, opts.max_iter);
  *stalled = *stalled || br.stalled;
  return safe_log(br.upper);
}

PressureEstimate spectral_impl(const CodingView& view, const std::vector<Index>& subset, const PotentialSpec& p,
                               const SpectralOptions& opts, bool full) {
  if (!(p.s >= 0) || !std::isfinite(p.s)) fail(ErrorCode::InvalidArgument, "exponent s must be finite and >= 0");
  PressureEstimate est;
  est.s = p.s;
  est.epsilon = p.epsilon;
  est.method = PressureMethod::Spectral;
  const GifsSystem& sys = view.system();
  est.k = sys.horizon ? sys.horizon : sys.graph.vertex_count();

  std::vector<char> mask(view.size(), 0);
  for (Index a : subset) mask[a] = 1;
  Partition part = build_partition(view, subset, mask, p, opts);
  est.m = part.depth;
  est.states = part.states.size();
  est.budget_hit = part.budget_hit;
  est.max_variation = part.max_variation;

  Triplets lo_trip, hi_trip;
  bool finite = true;
  bool exact = true;
  for (Index i = 0; i < part.states.size(); ++i) {
    for_each_transition(view, mask, part, i, [&](Index j, const MapSpec& map, const Shape& target) {
      auto w = step_weight(map, target, p);
      if (!std::isfinite(w.upper)) finite = false;
      if (w.lower != w.upper) exact = false;
      lo_trip.emplace_back(i, j, w.lower);
      hi_trip.emplace_back(i, j, w.upper);
    });
  }
  est.transitions = hi_trip.size();
  const Index n = part.states.size();
  auto B_sup = from_triplets(n, hi_trip);
  auto scc = strongly_connected_components(sparsity_pattern(B_sup));
  if (finite) {
    auto B_inf = exact ? SparseRowMatrix<double>() : from_triplets(n, lo_trip);
    auto br = block_radius<double>(exact ? B_sup : B_inf, B_sup, scc, opts.cw_tol, opts.max_iter);
    est.stalled = br.stalled;
    if (br.periodic) {
      est.lower = safe_log(br.lower);
      est.upper = safe_log(br.upper);
    } else {
      est.lower = est.upper = -kInf;
    }
  } else {
    auto B_inf = from_triplets(n, lo_trip);
    auto br = block_radius<double>(B_inf, B_inf, scc, opts.cw_tol, opts.max_iter);
    est.lower = br.periodic ? safe_log(br.lower) : -kInf;
    est.upper = br.periodic ? kInf : -kInf;
  }

  const bool incomplete = !sys.graph.complete || sys.horizon > 0;
  if (!incomplete) {
    est.full_upper = est.upper;
    return est;
  }
  if (!full || !sys.tail) {
    est.full_upper = kInf;
    return est;
  }
  const TailWitness& tail = *sys.tail;
  double T = tail.tail_mass(p.s);
  if (!std::isfinite(T)) {
    est.full_upper = kInf;
    est.divergence = true;
    return est;
  }
  if (!finite) {
    est.full_upper = kInf;
    return est;
  }
  double fu = tail_corrected_upper(view, mask, part, hi_trip, p, tail, T, opts, &est.stalled);
  est.full_upper = std::max(est.upper, fu);
  return est;
}

std::vector<Index> all_states(const CodingView& view) {
  std::vector<Index> s(view.size());
  for (Index i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

// Reverse depth-first walk over words of `letters` letters (the last one
// given), maintaining the enclosure of the suffix cylinder.
struct SuffixWalk {
  const CodingView& view;
  const PotentialSpec& p;
  bool use_lower;
  std::function<void(Index first, double log_weight)> leaf;

  void run(Index letter, const Shape& enc, double logw, int remaining) {
    if (remaining == 0) {
      leaf(letter, logw);
      return;
    }
    for (Index a : view.predecessors(letter)) {
      const MapSpec& map = view.map(a, letter);
      auto w = step_weight(map, enc, p);
      double f = use_lower ? w.lower : w.upper;
      double lf = safe_log(f);
      if (lf == -kInf && use_lower) continue;
      run(a, image_enclosure(map, enc), logw + lf, remaining - 1);
    }
  }
};

struct PartitionSums {
  double log_trunc = -kInf;
  double log_full = -kInf;
};

PartitionSums partition_sums(const CodingView& view, const PotentialSpec& p, int n, bool with_full) {
  const GifsSystem& sys = view.system();
  auto rho_trunc = coding_row_sups(sys, p.selector);
  LogSum trunc, full;
  for (Index last = 0; last < view.size(); ++last) {
    if (view.successors(last).empty()) continue;
    double lt = safe_log(pow(Interval<double>(rho_trunc[last]), p.s).upper);
    double lf = with_full ? safe_log(pow(Interval<double>(sys.tail->row_sup(last)), p.s).upper) : 0.0;
    SuffixWalk walk{view, p, false, [&](Index, double logw) {
                      trunc.add(logw + lt);
                      if (with_full) full.add(logw + lf);
                    }};
    walk.run(last, view.seed(last), 0.0, n - 1);
  }
  return {trunc.value(), with_full ? full.value() : trunc.value()};
}

}  // namespace

Interval<double> PressureEstimate::lambda() const { return {std::exp(lower), std::exp(upper)}; }

std::string to_string(PressureMethod m) { return m == PressureMethod::Spectral ? "spectral" : "word-sum"; }

CodingView::CodingView(const GifsSystem& system) : sys_(&system), reduced_(!system.graph.is_simple()) {
  const auto& g = system.graph;
  if (!reduced_) {
    const Index n = g.vertex_count();
    succ_.resize(n);
    succ_edge_.resize(n);
    for (Index v = 0; v < n; ++v) {
      seeds_.push_back(system.J(v));
      std::vector<std::pair<Index, Index>> out;
      for (Index e : g.out_edges(v)) out.emplace_back(g.edge(e).terminal, e);
      std::sort(out.begin(), out.end());
      for (auto [t, e] : out) {
        succ_[v].push_back(t);
        succ_edge_[v].push_back(e);
      }
    }
  } else {
    const Index n = g.edge_count();
    succ_.resize(n);
    for (Index e = 0; e < n; ++e) {
      Index t = g.edge(e).terminal;
      seeds_.push_back(image_enclosure(system.maps[e], system.J(t)));
      succ_[e] = g.out_edges(t);
      std::sort(succ_[e].begin(), succ_[e].end());
    }
  }
  pred_.resize(succ_.size());
  for (Index i = 0; i < succ_.size(); ++i)
    for (Index j : succ_[i]) pred_[j].push_back(i);
}

bool CodingView::admissible(Index i, Index j) const {
  if (i >= succ_.size() || j >= succ_.size()) return false;
  return std::binary_search(succ_[i].begin(), succ_[i].end(), j);
}

const MapSpec& CodingView::map(Index i, Index j) const {
  if (!admissible(i, j))
    fail(ErrorCode::NonAdmissibleWord, "no transition " + std::to_string(i) + "->" + std::to_string(j));
  if (reduced_) return sys_->maps[i];
  auto pos = std::lower_bound(succ_[i].begin(), succ_[i].end(), j) - succ_[i].begin();
  return sys_->maps[succ_edge_[i][pos]];
}

Shape CodingView::cylinder(const std::vector<Index>& word) const {
  if (word.empty()) fail(ErrorCode::InvalidArgument, "empty word");
  Shape enc = seed(word.back());
  for (Index k = word.size() - 1; k-- > 0;) enc = image_enclosure(map(word[k], word[k + 1]), enc);
  return enc;
}

Interval<double> cylinder_weight(const GifsSystem& system, const std::vector<Index>& word,
                                 const PotentialSpec& potential) {
  CodingView view(system);
  if (word.empty()) fail(ErrorCode::NonAdmissibleWord, "empty word");
  for (Index a : word)
    if (a >= view.size()) fail(ErrorCode::NonAdmissibleWord, "letter outside the coding alphabet");
  Interval<double> w(1.0);
  Shape enc = view.seed(word.back());
  for (Index k = word.size() - 1; k-- > 0;) {
    const MapSpec& map = view.map(word[k], word[k + 1]);
    w = w * step_weight(map, enc, potential);
    enc = image_enclosure(map, enc);
  }
  return w;
}

double log_partition_sup(const GifsSystem& system, const PotentialSpec& potential, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "word length must be >= 1");
  CodingView view(system);
  return partition_sums(view, potential, n, false).log_trunc;
}

PressureEstimate pressure_word_sum(const GifsSystem& system, const PotentialSpec& potential, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "word length must be >= 1");
  if (!(potential.s >= 0) || !std::isfinite(potential.s))
    fail(ErrorCode::InvalidArgument, "exponent s must be finite and >= 0");
  CodingView view(system);
  PressureEstimate est;
  est.method = PressureMethod::WordSum;
  est.s = potential.s;
  est.epsilon = potential.epsilon;
  est.n = n;
  est.k = system.horizon ? system.horizon : system.graph.vertex_count();
  est.states = view.size();

  const bool infinite = system.horizon > 0 || !system.graph.complete;
  const bool with_full = infinite && system.tail.has_value();
  auto sums = partition_sums(view, potential, n, with_full);
  est.upper = sums.log_trunc == -kInf ? -kInf : sums.log_trunc / n + kLogSlack;

  // Q(a, b): inf weights of the n-letter words from a that continue into b
  const Index A = view.size();
  Triplets trip;
  for (Index b = 0; b < A; ++b) {
    std::vector<double> row(A, 0.0);
    SuffixWalk walk{view, potential, true, [&](Index first, double logw) { row[first] += std::exp(logw); }};
    walk.run(b, view.seed(b), 0.0, n);
    for (Index a = 0; a < A; ++a)
      if (row[a] > 0) trip.emplace_back(a, b, detail::down(row[a] * (1 - 1e-13)));
  }
  auto Q = from_triplets(A, trip);
  auto scc = strongly_connected_components(sparsity_pattern(Q));
  auto br = block_radius<double>(Q, Q, scc);
  est.stalled = br.stalled;
  est.lower = br.periodic ? safe_log(br.lower) / n : -kInf;
  if (!br.periodic) est.upper = std::max(est.lower, est.upper);
  est.transitions = Q.nonZeros();

  if (!infinite) {
    est.full_upper = est.upper;
  } else if (!with_full) {
    est.full_upper = kInf;
  } else {
    double T = system.tail->tail_mass(potential.s);
    if (!std::isfinite(T)) {
      est.full_upper = kInf;
      est.divergence = true;
    } else {
      // words leaving the horizon somewhere: at most n T R^{n-1}
      double R = 0;
      for (Index a = 0; a < A; ++a) R += pow(Interval<double>(system.tail->row_sup(a)), potential.s).upper;
      R += T;
      LogSum z;
      z.add(sums.log_full);
      if (T > 0) z.add(std::log(n * T) + (n - 1) * std::log(R));
      est.full_upper = std::max(est.upper, z.value() / n + kLogSlack);
    }
  }
  return est;
}

PressureEstimate pressure_spectral(const GifsSystem& system, const PotentialSpec& potential,
                                   const SpectralOptions& opts) {
  CodingView view(system);
  return spectral_impl(view, all_states(view), potential, opts, true);
}

PressureEstimate pressure_spectral(const CodingView& view, const std::vector<Index>& states,
                                   const PotentialSpec& potential, const SpectralOptions& opts) {
  bool full = states.size() == view.size();
  return spectral_impl(view, states, potential, opts, full);
}

PressureEstimate pressure_scc_max(const GifsSystem& system, const PotentialSpec& potential,
                                  const SpectralOptions& opts, std::vector<ComponentPressure>* per_component) {
  CodingView view(system);
  auto scc = strongly_connected_components(view.matrix());
  PressureEstimate global = spectral_impl(view, all_states(view), potential, opts, true);
  PressureEstimate best = global;
  best.lower = best.upper = -kInf;
  best.component.reset();
  best.stalled = false;
  best.budget_hit = false;
  best.states = best.transitions = 0;
  if (per_component) per_component->clear();
  for (Index c = 0; c < scc.components.size(); ++c) {
    if (scc.trivial[c]) continue;
    auto est = spectral_impl(view, scc.components[c], potential, opts, false);
    est.component = c;
    best.stalled = best.stalled || est.stalled;
    best.budget_hit = best.budget_hit || est.budget_hit;
    best.states += est.states;
    best.transitions += est.transitions;
    best.m = std::max(best.m, est.m);
    best.lower = std::max(best.lower, est.lower);
    if (!best.component || est.upper > best.upper) {
      best.upper = std::max(best.upper, est.upper);
      best.component = c;
    }
    if (per_component) per_component->push_back({scc.components[c], est});
  }
  const bool incomplete = !system.graph.complete || system.horizon > 0;
  best.full_upper = incomplete ? std::max(best.upper, global.full_upper) : best.upper;
  return best;
}

std::vector<LadderEntry> truncation_ladder(const SystemFamily& family, const PotentialSpec& potential,
                                           const std::vector<Index>& horizons, const SpectralOptions& opts) {
  for (Index i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1]) fail(ErrorCode::InvalidArgument, "horizons must be strictly increasing");
  std::vector<LadderEntry> out;
  double best_lower = -kInf, best_upper = kInf;
  for (Index k : horizons) {
    GifsSystem sys = family.materialize(k);
    LadderEntry e;
    e.horizon = k;
    e.estimate = pressure_spectral(sys, potential, opts);
    e.estimate.k = k;
    // the pressure of a subsystem bounds that of every larger one from below
    best_lower = std::max(best_lower, e.estimate.lower);
    best_upper = std::min(best_upper, e.estimate.full_upper);
    e.certified_lower = best_lower;
    e.certified_upper = best_upper;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace gifs
