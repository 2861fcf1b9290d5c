#include "gifs/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gifs/error.hpp"

namespace gifs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MapSpec similarity_1d(double ratio, double from_center, double to_center) {
  Similarity s;
  s.ratio = ratio;
  s.translation = Point(to_center - ratio * from_center, 0.0);
  return {s, std::nullopt, 1.0};
}

std::string letter_label(Complex e) {
  std::ostringstream os;
  os << e.real();
  if (e.imag() > 0) os << "+" << e.imag() << "i";
  if (e.imag() < 0) os << e.imag() << "i";
  return os.str();
}

const Ball kCfJ{Point(0.5, 0.0), 0.5};
const Ball kCfO{Point(0.5, 0.0), 0.75};

}  // namespace

GifsSystem ladder_system(Index k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "ladder horizon must be >= 1");
  GifsSystem sys;
  sys.name = "ladder_6_1";
  sys.dim = 1;
  sys.r = 0.5;
  sys.horizon = k;
  sys.graph.complete = false;
  auto c = [](Index v) { return 3.0 * static_cast<double>(v); };  // v is 1-based
  auto rad = [](Index v) { return std::ldexp(1.0, -static_cast<int>(v)); };
  for (Index v = 1; v <= k; ++v) sys.add_vertex(Ball{Point(c(v), 0.0), rad(v)}, Ball{Point(c(v), 0.0), 1.0});
  // images of J_u under T_1u tile J_1 from the left
  double left = c(1) - rad(1);
  for (Index u = 1; u <= k; ++u) {
    double len = rad(u);  // 2 * (1/2) * rad(u)
    sys.add_edge(0, u - 1, similarity_1d(0.5, c(u), left + len / 2));
    left += len;
  }
  for (Index v = 2; v <= k; ++v) sys.add_edge(v - 1, v - 2, similarity_1d(rad(v), c(v - 1), c(v)));

  TailWitness w;
  w.comparison = TailWitness::Comparison::Geometric;
  w.threshold = 0.0;
  w.summable_at_threshold = false;
  w.tail_mass = [k](double s) {
    if (s <= 0) return kInf;
    return std::exp2(-static_cast<double>(k + 1) * s) / (1 - std::exp2(-s));
  };
  w.row_sup = [](Index state) { return std::ldexp(1.0, -static_cast<int>(state + 1)); };
  sys.tail = w;
  return sys;
}

SystemFamily ladder_family(std::vector<Index> horizons) {
  SystemFamily f;
  f.name = "ladder_6_1";
  f.horizons = std::move(horizons);
  f.threshold = 0.0;
  f.infinite = true;
  f.materialize = [](Index k) { return ladder_system(k); };
  return f;
}

GifsSystem ladder_subsystem() {
  GifsSystem full = ladder_system(2);
  // edges of ladder_system(2): 11, 12, 21
  GifsSystem sub = restrict_edges(full, {0, 1, 2});
  sub.name = "ladder_6_1/{1,2}";
  return sub;
}

GifsSystem moran_system(const std::vector<double>& ratios) {
  return disjoint_moran({ratios});
}

GifsSystem disjoint_moran(const std::vector<std::vector<double>>& groups) {
  GifsSystem sys;
  sys.name = "moran";
  sys.dim = 1;
  double rmax = 0;
  for (Index g = 0; g < groups.size(); ++g) {
    const auto& ratios = groups[g];
    double total = std::accumulate(ratios.begin(), ratios.end(), 0.0);
    if (ratios.empty() || total > 1 + 1e-12)
      fail(ErrorCode::InvalidArgument, "Moran ratios must be nonempty with sum <= 1");
    for (double r : ratios)
      if (!(r > 0 && r < 1)) fail(ErrorCode::InvalidArgument, "Moran ratios must lie in (0, 1)");
    double base = 3.0 * static_cast<double>(g);
    sys.add_vertex(interval(base, base + 1), interval(base - 0.5, base + 1.5));
  }
  for (Index g = 0; g < groups.size(); ++g) {
    const auto& ratios = groups[g];
    double total = std::accumulate(ratios.begin(), ratios.end(), 0.0);
    double gap = ratios.size() > 1 ? (1 - total) / static_cast<double>(ratios.size() - 1) : 0.0;
    double base = 3.0 * static_cast<double>(g);
    double left = base;
    for (double r : ratios) {
      sys.add_edge(g, g, similarity_1d(r, base + 0.5, left + r / 2));
      left += r + gap;
      rmax = std::max(rmax, r);
    }
  }
  sys.r = rmax;
  return sys;
}

std::vector<Complex> gaussian_box(int N) {
  std::vector<Complex> out;
  for (int j = 1; j <= N; ++j)
    for (int m = 1; m <= j; ++m)
      for (int n = -j; n <= j; ++n)
        if (std::max(m, std::abs(n)) == j) out.emplace_back(m, n);
  return out;
}

std::vector<Complex> real_alphabet(int max_m) {
  std::vector<Complex> out;
  for (int m = 1; m <= max_m; ++m) out.emplace_back(m, 0);
  return out;
}

GifsSystem perturbed_cf(const std::vector<Complex>& sub, const std::vector<Complex>& full, double eps) {
  auto valid = [](Complex e) {
    return e.real() >= 1 && e.real() == std::round(e.real()) && e.imag() == std::round(e.imag());
  };
  for (const auto& e : full)
    if (!valid(e)) fail(ErrorCode::InvalidAlphabet, "letter " + letter_label(e) + " is not in E_*");
  for (const auto& e : sub) {
    if (!valid(e)) fail(ErrorCode::InvalidAlphabet, "letter " + letter_label(e) + " is not in E_*");
    if (std::find(full.begin(), full.end(), e) == full.end())
      fail(ErrorCode::InvalidAlphabet, "sub alphabet letter " + letter_label(e) + " missing from the full alphabet");
  }
  std::vector<Complex> letters = sub;
  for (const auto& e : full)
    if (std::find(letters.begin(), letters.end(), e) == letters.end()) letters.push_back(e);
  bool degenerate = letters.size() > sub.size();
  if (degenerate && !(eps > 0 && eps < 1)) fail(ErrorCode::InvalidArgument, "eps must lie in (0, 1)");

  GifsSystem sys;
  sys.name = "perturbed_cf";
  sys.dim = 2;
  sys.add_vertex(kCfJ, kCfO, "v");
  for (Index k = 0; k < letters.size(); ++k) {
    MapSpec m;
    if (k < sub.size())
      m.kind = MoebiusCF{letters[k]};
    else
      m.kind = PerturbedMoebiusCF{letters[k], eps};
    m.domain = Shape(kCfO);
    sys.add_edge(0, 0, m, letter_label(letters[k]));
  }
  // contraction: single steps, or pairs when the letter 1 (|T_1'(0)| = 1) is present
  double one = 0, two = 0;
  std::vector<Shape> images;
  std::vector<double> sups;
  for (const auto& m : sys.maps) {
    images.push_back(image_enclosure(m, kCfJ));
    sups.push_back(derivative_range_over_set(m, kCfJ).upper);
    one = std::max(one, sups.back());
  }
  if (one < 1) {
    sys.r = std::max(one, 1e-12);
  } else {
    for (Index f = 0; f < sys.maps.size(); ++f)
      for (Index e = 0; e < sys.maps.size(); ++e)
        two = std::max(two, derivative_range_over_set(sys.maps[e], images[f]).upper * sups[f]);
    sys.depth2 = true;
    sys.r = std::sqrt(two);
  }
  return sys;
}

GifsSystem cf_system(const std::vector<Complex>& alphabet) {
  GifsSystem sys = perturbed_cf(alphabet, alphabet, 0.5);
  sys.name = "cf";
  return sys;
}

double cf_box_tail_mass(int N, double s) {
  if (s <= 1) return kInf;
  double a = N - 0.5;
  return 4 * std::pow(a, 2 - 2 * s) / (2 * s - 2) + std::pow(a, 1 - 2 * s) / (2 * s - 1);
}

SystemFamily perturbed_cf_box_family(const std::vector<Complex>& sub, double eps, std::vector<Index> boxes) {
  SystemFamily f;
  f.name = sub.empty() ? "cf_box" : "perturbed_cf_box";
  f.horizons = std::move(boxes);
  f.threshold = 1.0;
  f.infinite = true;
  f.materialize = [sub, eps](Index N) {
    std::vector<Complex> full = gaussian_box(static_cast<int>(N));
    for (const auto& e : sub)
      if (std::find(full.begin(), full.end(), e) == full.end()) full.push_back(e);
    GifsSystem sys = sub.empty() ? cf_system(full) : perturbed_cf(sub, full, eps);
    sys.horizon = N;
    sys.graph.complete = false;
    TailWitness w;
    w.comparison = TailWitness::Comparison::PSeries;
    w.threshold = 1.0;
    w.summable_at_threshold = false;
    w.tail_mass = [N](double s) { return cf_box_tail_mass(static_cast<int>(N), s); };
    std::vector<double> sups;
    for (const auto& m : sys.maps) sups.push_back(derivative_range_over_set(m, kCfJ).upper);
    w.row_sup = [sups](Index state) { return sups.at(state); };
    sys.tail = w;
    return sys;
  };
  return f;
}

SystemFamily cf_box_family(std::vector<Index> boxes) { return perturbed_cf_box_family({}, 0.5, std::move(boxes)); }

}  // namespace gifs
