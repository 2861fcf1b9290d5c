#include "gifs/render.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "gifs/error.hpp"

namespace gifs {

namespace {

void check_chain(const GifsSystem& sys, const std::vector<Index>& word) {
  for (Index k = 0; k < word.size(); ++k) {
    if (word[k] >= sys.graph.edge_count()) fail(ErrorCode::NonAdmissibleWord, "edge index out of range");
    if (k > 0 && sys.graph.edge(word[k - 1]).terminal != sys.graph.edge(word[k]).initial)
      fail(ErrorCode::NonAdmissibleWord, "edges " + sys.edge_label(word[k - 1]) + ", " + sys.edge_label(word[k]) +
                                             " do not chain");
  }
}

// sup over the seed of T_e(eps, x) - T_e(x), sampled, plus a Lipschitz slack
double map_deviation(const MapSpec& a, const MapSpec& b, const Shape& seed, int dim) {
  constexpr int grid = 24;
  double worst = 0;
  for (const auto& p : sample_points(seed, dim, grid)) worst = std::max(worst, (apply(a, p) - apply(b, p)).norm());
  double lip = derivative_range_over_set(a, seed).upper + derivative_range_over_set(b, seed).upper;
  Box box = bounding_box(seed, dim);
  double cell = (box.hi - box.lo).norm() / grid;
  return worst + lip * cell;
}

}  // namespace

CodedPoint coding_map(const GifsSystem& sys, const std::vector<Index>& word, std::optional<Point> anchor) {
  if (word.empty()) fail(ErrorCode::NonAdmissibleWord, "empty word");
  check_chain(sys, word);
  Index t = sys.graph.edge(word.back()).terminal;
  Point x = anchor.value_or(center(sys.J(t)));
  Shape enc = sys.J(t);
  for (Index k = word.size(); k-- > 0;) {
    x = apply(sys.maps[word[k]], x);
    enc = image_enclosure(sys.maps[word[k]], enc);
  }
  return {x, diameter(enc, sys.dim)};
}

PointCloud generate_point_cloud(const GifsSystem& sys, int depth, Index horizon, Index cap) {
  if (cap < 1) fail(ErrorCode::InvalidArgument, "cap must be >= 1");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  PointCloud cloud;
  cloud.system = sys.name;
  cloud.depth = depth;
  const auto& g = sys.graph;
  const bool simple = g.is_simple();
  auto allowed = [&](Index e) {
    if (horizon == 0) return true;
    if (!simple) return e < horizon;
    return g.edge(e).initial < horizon && g.edge(e).terminal < horizon;
  };
  std::vector<Index> word;
  std::function<bool()> walk = [&]() -> bool {
    if (static_cast<int>(word.size()) == depth) {
      if (cloud.points.size() >= cap) {
        cloud.truncated = true;
        return false;
      }
      auto p = coding_map(sys, word);
      cloud.points.push_back({p.x, p.radius, word});
      return true;
    }
    Index v = g.edge(word.back()).terminal;
    for (Index e : g.out_edges(v)) {
      if (!allowed(e)) continue;
      word.push_back(e);
      bool go = walk();
      word.pop_back();
      if (!go) return false;
    }
    return true;
  };
  for (Index e = 0; e < g.edge_count(); ++e) {
    if (!allowed(e)) continue;
    word.assign(1, e);
    if (!walk()) break;
  }
  return cloud;
}

std::size_t RasterImage::occupied() const {
  return static_cast<std::size_t>(std::count_if(hits.begin(), hits.end(), [](std::uint32_t h) { return h > 0; }));
}

RasterBounds cloud_bounds(const PointCloud& cloud, double margin) {
  RasterBounds b{0, 1, 0, 1};
  if (cloud.points.empty()) return b;
  b.xmin = b.ymin = std::numeric_limits<double>::infinity();
  b.xmax = b.ymax = -std::numeric_limits<double>::infinity();
  for (const auto& p : cloud.points) {
    b.xmin = std::min(b.xmin, p.x.x());
    b.xmax = std::max(b.xmax, p.x.x());
    b.ymin = std::min(b.ymin, p.x.y());
    b.ymax = std::max(b.ymax, p.x.y());
  }
  double pad = margin * std::max({b.xmax - b.xmin, b.ymax - b.ymin, 1e-9});
  b.xmin -= pad;
  b.xmax += pad;
  b.ymin -= pad;
  b.ymax += pad;
  return b;
}

RasterImage rasterize(const PointCloud& cloud, const RasterBounds& bounds, int width, int height) {
  if (width < 1 || height < 1) fail(ErrorCode::DegenerateBounds, "resolution must be positive");
  if (!(bounds.xmax > bounds.xmin) || (height > 1 && !(bounds.ymax > bounds.ymin)))
    fail(ErrorCode::DegenerateBounds, "raster bounds have zero extent");
  RasterImage img;
  img.width = width;
  img.height = height;
  img.bounds = bounds;
  img.hits.assign(static_cast<std::size_t>(width) * height, 0);
  for (const auto& p : cloud.points) {
    double x = p.x.x(), y = p.x.y();
    if (x < bounds.xmin || x > bounds.xmax) continue;
    if (height > 1 && (y < bounds.ymin || y > bounds.ymax)) continue;
    int ix = static_cast<int>(std::floor((x - bounds.xmin) / (bounds.xmax - bounds.xmin) * width));
    int iy = height == 1 ? 0 : static_cast<int>(std::floor((bounds.ymax - y) / (bounds.ymax - bounds.ymin) * height));
    ix = std::clamp(ix, 0, width - 1);
    iy = std::clamp(iy, 0, height - 1);
    ++img.hits[static_cast<std::size_t>(iy) * width + ix];
  }
  return img;
}

std::string to_pgm(const RasterImage& img, bool binary) {
  std::ostringstream os;
  os << (binary ? "P5" : "P2") << "\n" << img.width << " " << img.height << "\n255\n";
  for (int iy = 0; iy < img.height; ++iy) {
    for (int ix = 0; ix < img.width; ++ix) {
      unsigned char v = img.at(ix, iy) > 0 ? 0 : 255;
      if (binary) {
        os.put(static_cast<char>(v));
      } else {
        os << static_cast<int>(v) << (ix + 1 < img.width ? " " : "");
      }
    }
    if (!binary) os << "\n";
  }
  return os.str();
}

std::string cloud_csv(const PointCloud& cloud) {
  std::ostringstream os;
  os.precision(17);
  os << "word,x,y,radius\n";
  for (const auto& p : cloud.points) {
    for (Index k = 0; k < p.word.size(); ++k) os << (k ? "." : "") << p.word[k];
    os << "," << p.x.x() << "," << p.x.y() << "," << p.radius << "\n";
  }
  return os.str();
}

std::vector<std::vector<Index>> random_words(const GifsSystem& sys, int length, Index count, std::mt19937_64& rng) {
  const auto& g = sys.graph;
  std::vector<std::vector<Index>> out;
  if (g.edge_count() == 0 || length < 1) return out;
  std::uniform_int_distribution<Index> first(0, g.edge_count() - 1);
  Index attempts = 0;
  while (out.size() < count && attempts < 100 * count) {
    ++attempts;
    std::vector<Index> w{first(rng)};
    while (static_cast<int>(w.size()) < length) {
      const auto& out_e = g.out_edges(g.edge(w.back()).terminal);
      if (out_e.empty()) break;
      std::uniform_int_distribution<Index> pick(0, out_e.size() - 1);
      w.push_back(out_e[pick(rng)]);
    }
    if (static_cast<int>(w.size()) == length) out.push_back(std::move(w));
  }
  return out;
}

ChainConstants chain_constants(const GifsSystem& sys) {
  ChainConstants c;
  c.c_MT = sys.c_MT;
  double one = 0;
  for (Index e = 0; e < sys.graph.edge_count(); ++e)
    one = std::max(one, derivative_range_over_set(sys.maps[e], sys.J(sys.graph.edge(e).terminal)).upper);
  for (Index v = 0; v < sys.graph.vertex_count(); ++v) c.sup_diam = std::max(c.sup_diam, diameter(sys.J(v), sys.dim));
  c.r1 = sys.depth2 ? sys.r : std::min(one, sys.r);
  if (c.r1 <= 0) c.r1 = 1e-300;
  // odd-length compositions carry one extra single-step factor
  c.c_chain = std::max(1.0, one / c.r1);
  return c;
}

ConvergenceProbe coding_convergence_probe(const GifsSystem& base, const GifsSystem& perturbed,
                                          const std::vector<std::vector<Index>>& words) {
  const auto& gb = base.graph;
  const auto& gp = perturbed.graph;
  bool same = gb.vertex_count() == gp.vertex_count() && gb.edge_count() == gp.edge_count();
  for (Index e = 0; same && e < gb.edge_count(); ++e)
    same = gb.edge(e).initial == gp.edge(e).initial && gb.edge(e).terminal == gp.edge(e).terminal;
  if (!same) fail(ErrorCode::AlphabetMismatch, "systems do not share a coding alphabet");

  ConvergenceProbe pr;
  pr.constants = chain_constants(perturbed);
  for (Index e = 0; e < gp.edge_count(); ++e)
    pr.map_deviation = std::max(pr.map_deviation, map_deviation(perturbed.maps[e], base.maps[e],
                                                                perturbed.J(gp.edge(e).terminal), perturbed.dim));
  pr.bound = pr.constants.c_MT * pr.constants.c_chain / (1 - pr.constants.r1) * pr.map_deviation;
  for (const auto& w : words) {
    auto a = coding_map(perturbed, w);
    auto b = coding_map(base, w);
    pr.sup_difference = std::max(pr.sup_difference, (a.x - b.x).norm() + a.radius + b.radius);
    ++pr.words;
  }
  return pr;
}

LipschitzProbe lipschitz_probe(const GifsSystem& sys, int length, Index pairs, std::mt19937_64& rng) {
  LipschitzProbe pr;
  pr.constants = chain_constants(sys);
  const auto& c = pr.constants;
  pr.c_cp = c.c_MT * c.sup_diam * c.c_chain * c.r1 * c.r1;
  const auto& g = sys.graph;
  auto prefixes = random_words(sys, length, pairs, rng);
  for (const auto& w : prefixes) {
    std::uniform_int_distribution<int> cut(1, length - 1);
    int j = cut(rng);
    // a second word agreeing with w on the first j letters
    std::vector<Index> u(w.begin(), w.begin() + j);
    while (static_cast<int>(u.size()) < length) {
      const auto& out_e = g.out_edges(g.edge(u.back()).terminal);
      if (out_e.empty()) break;
      std::uniform_int_distribution<Index> pick(0, out_e.size() - 1);
      u.push_back(out_e[pick(rng)]);
    }
    if (static_cast<int>(u.size()) != length) continue;
    auto a = coding_map(sys, w);
    auto b = coding_map(sys, u);
    double bound = pr.c_cp * std::pow(c.r1, j - 2) + a.radius + b.radius;
    double d = (a.x - b.x).norm();
    ++pr.pairs;
    pr.worst_ratio = std::max(pr.worst_ratio, d / bound);
    if (d > bound) ++pr.violations;
  }
  return pr;
}

}  // namespace gifs
