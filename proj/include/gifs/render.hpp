#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gifs/system.hpp"

namespace gifs {

struct CodedPoint {
  Point x = Point::Zero();
  double radius = 0.0;  // the limit point of every extension lies within this distance
};

// T_{e0} o ... o T_{e(n-1)}(anchor) for an edge word; the anchor defaults to
// the centre of the terminal seed.
CodedPoint coding_map(const GifsSystem& system, const std::vector<Index>& edge_word,
                      std::optional<Point> anchor = std::nullopt);

struct CloudPoint {
  Point x = Point::Zero();
  double radius = 0.0;
  std::vector<Index> word;  // edge word
};

struct PointCloud {
  std::string system;
  int depth = 0;
  bool truncated = false;
  std::vector<CloudPoint> points;
};

// One point per admissible edge word of length `depth`, in depth-first order
// of edge indices. `horizon` limits the coding states (vertices of a simple
// graph, edges otherwise); 0 keeps them all.
PointCloud generate_point_cloud(const GifsSystem& system, int depth, Index horizon = 0, Index cap = 100000);

struct RasterBounds {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
};

struct RasterImage {
  int width = 0;
  int height = 0;
  RasterBounds bounds;
  std::vector<std::uint32_t> hits;  // row-major, row 0 at the top

  std::uint32_t at(int ix, int iy) const { return hits[static_cast<std::size_t>(iy) * width + ix]; }
  std::size_t occupied() const;
};

RasterBounds cloud_bounds(const PointCloud& cloud, double margin = 0.02);
RasterImage rasterize(const PointCloud& cloud, const RasterBounds& bounds, int width, int height);

// Occupied pixels are written black on white.
std::string to_pgm(const RasterImage& image, bool binary = false);
std::string cloud_csv(const PointCloud& cloud);

// Random admissible edge words of the given length (uniform over outgoing
// edges at each step, starting from a uniform edge).
std::vector<std::vector<Index>> random_words(const GifsSystem& system, int length, Index count, std::mt19937_64& rng);

struct ChainConstants {
  double r1 = 0.0;       // per-step contraction of long compositions
  double c_chain = 1.0;  // ||(T_w)'|| <= c_chain r1^|w|
  double c_MT = 1.0;
  double sup_diam = 0.0;
};

ChainConstants chain_constants(const GifsSystem& system);

struct ConvergenceProbe {
  double sup_difference = 0.0;  // max |pi(eps, w) - pi(w)| plus both radii
  double map_deviation = 0.0;   // sup_e sup_x |T_e(eps, x) - T_e(x)|
  double bound = 0.0;           // c_MT c_chain / (1 - r1) times map_deviation
  Index words = 0;
  ChainConstants constants;
  bool holds() const { return sup_difference <= bound; }
};

// Compare the coding maps of two systems on the same graph over sampled words.
ConvergenceProbe coding_convergence_probe(const GifsSystem& base, const GifsSystem& perturbed,
                                          const std::vector<std::vector<Index>>& words);

struct LipschitzProbe {
  Index pairs = 0;
  Index violations = 0;
  double worst_ratio = 0.0;  // max distance / bound
  double c_cp = 0.0;
  ChainConstants constants;
};

// Pairs of words sharing a prefix of length j have coding points within
// c_cp r1^(j-2) of each other.
LipschitzProbe lipschitz_probe(const GifsSystem& system, int length, Index pairs, std::mt19937_64& rng);

}  // namespace gifs
