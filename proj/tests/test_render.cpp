#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gifs/error.hpp"
#include "gifs/perturbation.hpp"
#include "gifs/render.hpp"
#include "gifs/scenarios.hpp"
#include "oracles.hpp"

using namespace gifs;

namespace {

GifsSystem cantor() { return moran_system({1.0 / 3, 1.0 / 3}); }

// ternary digits 0/2 only, up to the first `level` digits
bool cantor_column(int col, int width, int level) {
  int cells = 1;
  for (int i = 0; i < level; ++i) cells *= 3;
  int c = col * cells / width;
  for (int i = 0; i < level; ++i) {
    if (c % 3 == 1) return false;
    c /= 3;
  }
  return true;
}

}  // namespace

TEST_CASE("fixed points of one map and of CF words") {
  GifsSystem half;
  half.dim = 1;
  half.r = 0.5;
  half.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  half.add_edge(0, 0, oracle::similarity_1d(0.5, 0, 0));
  auto p = coding_map(half, std::vector<Index>(30, 0), Point(1, 0));
  CHECK(p.x.x() == doctest::Approx(std::ldexp(1.0, -30)));
  CHECK(std::abs(p.x.x()) <= p.radius);

  auto cf = cf_system({Complex(1, 0), Complex(2, 0)});
  CHECK(std::abs(coding_map(cf, std::vector<Index>(25, 0)).x.x() - (std::sqrt(5.0) - 1) / 2) < 1e-6);
  CHECK(std::abs(coding_map(cf, std::vector<Index>(25, 1)).x.x() - (std::sqrt(2.0) - 1)) < 1e-6);
}

TEST_CASE("non-chaining words are rejected") {
  auto sys = ladder_system(3);
  // edge 0 is 1->1 and edge 4 is 3->2: 0 then 4 does not chain
  CHECK_THROWS_AS(coding_map(sys, {0, 4}), Error);
}

TEST_CASE("Cantor clouds") {
  auto cloud = generate_point_cloud(cantor(), 3);
  REQUIRE(cloud.points.size() == 8);
  std::set<long> got;
  for (const auto& p : cloud.points) got.insert(std::lround((p.x.x() - 1.0 / 54) * 27));
  // level-3 intervals start at (ternary 0/2 digits)/27; centres sit 1/54 further
  CHECK(got == std::set<long>{0, 2, 6, 8, 18, 20, 24, 26});

  auto deep = generate_point_cloud(cantor(), 6);
  auto img = rasterize(deep, RasterBounds{0, 1, -0.5, 0.5}, 81, 1);
  for (int c = 0; c < 81; ++c) CHECK((img.at(c, 0) > 0) == cantor_column(c, 81, 4));
}

TEST_CASE("empty admissibility gives an empty cloud") {
  GifsSystem sys;
  sys.dim = 1;
  sys.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  CHECK(generate_point_cloud(sys, 3).points.empty());
}

TEST_CASE("CF cloud stays inside the seed disk and respects the cap") {
  std::vector<Complex> letters;
  for (int m = 1; m <= 3; ++m)
    for (int n = -3; n <= 3; ++n) letters.emplace_back(m, n);
  auto cf = cf_system(letters);
  auto cloud = generate_point_cloud(cf, 4, 0, 100000);
  CHECK(cloud.truncated);
  CHECK(cloud.points.size() == 100000);
  for (const auto& p : cloud.points) CHECK((p.x - Point(0.5, 0)).norm() <= 0.5 + 1e-12);
}

TEST_CASE("rasterization") {
  PointCloud c;
  c.points.push_back({Point(0.5, 0.5), 0, {}});
  auto one = rasterize(c, RasterBounds{0, 1, 0, 1}, 3, 3);
  CHECK(one.occupied() == 1);
  CHECK(one.at(1, 1) == 1);
  c.points = {{Point(0, 0), 0, {}}, {Point(1, 1), 0, {}}};
  auto two = rasterize(c, RasterBounds{0, 1, 0, 1}, 3, 3);
  CHECK(two.at(0, 2) == 1);
  CHECK(two.at(2, 0) == 1);
  CHECK(two.occupied() == 2);
  CHECK_THROWS_AS(rasterize(c, RasterBounds{1, 1, 0, 1}, 3, 3), Error);
}

TEST_CASE("PGM output is deterministic and well formed") {
  auto cloud = generate_point_cloud(cf_system({Complex(1, 0), Complex(2, 0), Complex(1, 1)}), 6);
  auto img = rasterize(cloud, cloud_bounds(cloud), 64, 48);
  std::string a = to_pgm(img), b = to_pgm(img);
  CHECK(a == b);
  CHECK(a.rfind("P2\n64 48\n255\n", 0) == 0);
  std::string bin = to_pgm(img, true);
  CHECK(bin.rfind("P5\n64 48\n255\n", 0) == 0);
  CHECK(bin.size() == std::string("P5\n64 48\n255\n").size() + 64 * 48);
  CHECK(cloud_csv(cloud).rfind("word,x,y,radius\n", 0) == 0);
}

TEST_CASE("coding-map convergence probe") {
  auto fam = cf_family({Complex(1, 0), Complex(2, 0)}, {Complex(1, 0), Complex(2, 0), Complex(3, 0)});
  std::mt19937_64 rng(17);
  auto pert = perturbed_cf({Complex(1, 0), Complex(2, 0)}, {Complex(1, 0), Complex(2, 0), Complex(3, 0)}, 0.1);
  auto lim = limit_system(fam, pert);
  auto words = random_words(pert, 20, 200, rng);
  auto pr = coding_convergence_probe(lim, pert, words);
  CHECK(pr.words == 200);
  CHECK(pr.holds());

  // identical systems differ only by the radii
  auto same = coding_convergence_probe(pert, pert, words);
  double radii = 0;
  for (const auto& w : words) radii = std::max(radii, 2 * coding_map(pert, w).radius);
  CHECK(same.sup_difference <= radii + 1e-15);

  // halving the deviation roughly halves the probe
  auto pert2 = perturbed_cf({Complex(1, 0), Complex(2, 0)}, {Complex(1, 0), Complex(2, 0), Complex(3, 0)}, 0.05);
  auto pr2 = coding_convergence_probe(lim, pert2, words);
  CHECK(pr2.map_deviation == doctest::Approx(pr.map_deviation / 2).epsilon(0.1));
  CHECK(pr2.holds());

  CHECK_THROWS_AS(coding_convergence_probe(cantor(), pert, words), Error);
}

TEST_CASE("property: Lipschitz bound on word pairs") {
  std::mt19937_64 rng(23);
  for (const auto& sys : {cf_system({Complex(1, 0), Complex(2, 0), Complex(2, 1)}), affine_demo(0.1), ladder_system(5)}) {
    auto pr = lipschitz_probe(sys, 18, 1000, rng);
    CHECK(pr.pairs > 900);
    CHECK(pr.violations == 0);
  }
}
