#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls the pressure or dimension code.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "gifs/system.hpp"

namespace oracle {

// Root of sum r_i^s = 1 by plain bisection on [0, 50].
inline double moran_root(const std::vector<double>& ratios) {
  auto f = [&](double s) {
    double t = 0;
    for (double r : ratios) t += std::pow(r, s);
    return t - 1;
  };
  double lo = 0, hi = 50;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

// log of the spectral radius of a dense nonnegative matrix
inline double log_radius(const Eigen::MatrixXd& w) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(w, false);
  double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  return std::log(rho);
}

inline gifs::MapSpec similarity_1d(double ratio, double from_left, double to_left) {
  gifs::Similarity s;
  s.ratio = ratio;
  s.translation = gifs::Point(to_left - ratio * from_left, 0);
  return {s, std::nullopt, 1.0};
}

struct WeightedSystem {
  gifs::GifsSystem system;
  Eigen::MatrixXd ratios;  // ratios(i, j): ratio of the edge i -> j, 0 if absent
};

// A simple graph made of cycles (sizes 1..3) chained into a DAG by forward
// edges, with one similarity of random ratio per edge.
inline WeightedSystem dag_of_cycles(std::mt19937_64& rng, gifs::Index max_states = 8) {
  std::uniform_real_distribution<double> ratio(0.05, 0.6);
  std::uniform_int_distribution<int> csize(1, 3);
  std::vector<std::vector<gifs::Index>> comps;
  gifs::Index n = 0;
  while (n < max_states) {
    gifs::Index k = std::min<gifs::Index>(csize(rng), max_states - n);
    std::vector<gifs::Index> c;
    for (gifs::Index i = 0; i < k; ++i) c.push_back(n++);
    comps.push_back(c);
    if (rng() % 3 == 0) break;
  }
  WeightedSystem out;
  out.ratios = Eigen::MatrixXd::Zero(n, n);
  auto& sys = out.system;
  sys.dim = 1;
  sys.r = 0.6;
  for (gifs::Index v = 0; v < n; ++v) sys.add_vertex(gifs::interval(3.0 * v, 3.0 * v + 1), gifs::interval(3.0 * v - 0.5, 3.0 * v + 1.5));
  auto add = [&](gifs::Index i, gifs::Index j) {
    if (out.ratios(i, j) > 0) return;
    double r = ratio(rng);
    out.ratios(i, j) = r;
    sys.add_edge(i, j, similarity_1d(r, 3.0 * j, 3.0 * i));
  };
  for (const auto& c : comps) {
    for (gifs::Index k = 0; k < c.size(); ++k) add(c[k], c[(k + 1) % c.size()]);
    if (c.size() == 3 && rng() % 2) add(c[0], c[2]);
  }
  for (gifs::Index a = 0; a + 1 < comps.size(); ++a)
    for (gifs::Index b = a + 1; b < comps.size(); ++b)
      if (rng() % 2) add(comps[a][rng() % comps[a].size()], comps[b][rng() % comps[b].size()]);
  return out;
}

inline Eigen::MatrixXd powered(const Eigen::MatrixXd& ratios, double s) {
  Eigen::MatrixXd w = ratios;
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = w(i, j) > 0 ? std::pow(w(i, j), s) : 0.0;
  return w;
}

}  // namespace oracle
