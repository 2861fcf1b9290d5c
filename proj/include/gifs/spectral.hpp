#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gifs/graph.hpp"

namespace gifs {

template <typename Scalar>
using SparseRowMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct PerronBracket {
  Scalar lower = 0;
  Scalar upper = 0;
  Vector<Scalar> vector;
  int iterations = 0;
  bool stalled = false;
};

// Collatz-Wielandt enclosure of the spectral radius of a nonnegative matrix.
// For any positive v, min (Bv)_i / v_i <= rho(B) <= max (Bv)_i / v_i; the
// iteration v <- Bv + alpha v (alpha = current upper bound) drives v toward
// the Perron vector while keeping it positive, also for periodic matrices.
template <typename Scalar>
PerronBracket<Scalar> perron_bracket(const SparseRowMatrix<Scalar>& B, Scalar rel_tol = Scalar(1e-10),
                                     int max_iter = 100000) {
  PerronBracket<Scalar> out;
  const Eigen::Index n = B.rows();
  if (n == 0) return out;
  Eigen::Index widest_row = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    widest_row = std::max<Eigen::Index>(widest_row, B.outerIndexPtr()[i + 1] - B.outerIndexPtr()[i]);
  // relative rounding slack of one row-times-vector evaluation
  const Scalar slack = Scalar(1e-14) + Scalar(4 * (widest_row + 1)) * std::numeric_limits<Scalar>::epsilon();

  Vector<Scalar> v = Vector<Scalar>::Ones(n);
  Vector<Scalar> w(n);
  Scalar lo = 0, hi = std::numeric_limits<Scalar>::infinity();
  Scalar best_lo = 0, best_hi = std::numeric_limits<Scalar>::infinity();
  Vector<Scalar> best_v = v;
  for (int it = 1; it <= max_iter; ++it) {
    w.noalias() = B * v;
    Eigen::Array<Scalar, Eigen::Dynamic, 1> ratio = w.array() / v.array();
    lo = ratio.minCoeff();
    hi = ratio.maxCoeff();
    out.iterations = it;
    if (lo > best_lo) best_lo = lo;
    if (hi < best_hi) {
      best_hi = hi;
      best_v = v;
    }
    if (!(hi > 0) || best_hi - best_lo <= rel_tol * best_hi) break;
    if (it == max_iter) {
      out.stalled = true;
      break;
    }
    v = w + hi * v;
    v /= v.maxCoeff();
    if (!(v.maxCoeff() > 0)) {
      out.stalled = true;
      break;
    }
    // entries far down a long chain underflow; any positive vector is admissible
    v = v.cwiseMax(std::numeric_limits<Scalar>::min());
  }
  // Poorly resolved tiny entries spoil the min ratio. Restricting to the
  // states where v is not negligible bounds rho of a principal submatrix,
  // which is still a lower bound for rho(B).
  for (Scalar t : {Scalar(1e-250), Scalar(1e-150), Scalar(1e-60), Scalar(1e-20), Scalar(1e-8)}) {
    Scalar m = std::numeric_limits<Scalar>::infinity();
    bool any = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(v[i] >= t)) continue;
      Scalar acc = 0;
      for (typename SparseRowMatrix<Scalar>::InnerIterator it(B, i); it; ++it)
        if (v[it.col()] >= t) acc += it.value() * v[it.col()];
      m = std::min(m, acc / v[i]);
      any = true;
    }
    if (any && m > best_lo) best_lo = m;
  }
  out.lower = best_lo * (1 - slack);
  out.upper = best_hi * (1 + slack);
  out.vector = best_v;
  return out;
}

template <typename Scalar>
TransitionMatrix sparsity_pattern(const SparseRowMatrix<Scalar>& B) {
  std::vector<std::vector<Index>> rows(B.rows());
  for (Eigen::Index i = 0; i < B.outerSize(); ++i)
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(B, i); it; ++it)
      rows[i].push_back(static_cast<Index>(it.col()));
  return TransitionMatrix::from_rows(std::move(rows));
}

template <typename Scalar>
SparseRowMatrix<Scalar> principal_submatrix(const SparseRowMatrix<Scalar>& B, const std::vector<Index>& idx) {
  std::vector<Eigen::Index> pos(B.rows(), -1);
  for (Index k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<Eigen::Index>(k);
  std::vector<Eigen::Triplet<Scalar>> trip;
  for (Index k = 0; k < idx.size(); ++k)
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(B, idx[k]); it; ++it)
      if (pos[it.col()] >= 0) trip.emplace_back(static_cast<Eigen::Index>(k), pos[it.col()], it.value());
  SparseRowMatrix<Scalar> S(idx.size(), idx.size());
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

template <typename Scalar>
struct BlockRadius {
  Scalar lower = 0;
  Scalar upper = 0;
  std::ptrdiff_t argmax = -1;  // index of the class in the decomposition
  bool stalled = false;
  bool periodic = false;       // some class is non-trivial
};

// Spectral radius of a block triangular matrix: the max over the diagonal
// blocks of its strongly connected classes. `lower_src` and `upper_src` share
// one sparsity pattern (inf and sup weights of the same transitions).
template <typename Scalar>
BlockRadius<Scalar> block_radius(const SparseRowMatrix<Scalar>& lower_src, const SparseRowMatrix<Scalar>& upper_src,
                                 const SccDecomposition& scc, Scalar rel_tol = Scalar(1e-10),
                                 int max_iter = 100000) {
  BlockRadius<Scalar> out;
  for (Index c = 0; c < scc.components.size(); ++c) {
    if (scc.trivial[c]) continue;
    out.periodic = true;
    const auto& idx = scc.components[c];
    auto up = perron_bracket<Scalar>(principal_submatrix(upper_src, idx), rel_tol, max_iter);
    auto lo = &lower_src == &upper_src ? up : perron_bracket<Scalar>(principal_submatrix(lower_src, idx), rel_tol, max_iter);
    out.stalled = out.stalled || up.stalled || lo.stalled;
    out.lower = std::max(out.lower, lo.lower);
    if (up.upper > out.upper || out.argmax < 0) {
      out.upper = std::max(out.upper, up.upper);
      out.argmax = static_cast<std::ptrdiff_t>(c);
    }
  }
  return out;
}

}  // namespace gifs
