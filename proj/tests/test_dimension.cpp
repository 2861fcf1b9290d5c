#include <doctest.h>

#include <cmath>
#include <random>

#include "gifs/dimension.hpp"
#include "gifs/error.hpp"
#include "gifs/perturbation.hpp"
#include "gifs/scenarios.hpp"
#include "oracles.hpp"

using namespace gifs;

namespace {

bool contains(const DimensionResult& r, double x, double slack = 1e-12) {
  return r.s_lower - slack <= x && x <= r.s_upper + slack;
}

}  // namespace

TEST_CASE("Cantor and golden closed forms") {
  auto cantor = bowen_dimension(moran_system({1.0 / 3, 1.0 / 3}));
  CHECK(cantor.status == DimensionStatus::Converged);
  CHECK(contains(cantor, std::log(2.0) / std::log(3.0)));
  CHECK(cantor.width() <= 1e-6);
  auto golden = bowen_dimension(moran_system({0.5, 0.25}));
  double x = (std::sqrt(5.0) - 1) / 2;
  CHECK(contains(golden, -std::log(x) / std::log(2.0)));
}

TEST_CASE("the ladder subsystem matches (1/2)^s + (1/8)^s = 1") {
  auto r = bowen_dimension(ladder_subsystem());
  CHECK(contains(r, oracle::moran_root({0.5, 0.125})));
  CHECK(std::abs(r.mid() - 0.5514) < 5e-4);
  CHECK(r.provenance.osc == "certified-separated");
}

TEST_CASE("property: random Moran systems") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.05, 0.6);
  for (int t = 0; t < 6; ++t) {
    int n = 2 + static_cast<int>(rng() % 5);
    std::vector<double> ratios;
    double total = 0;
    for (int i = 0; i < n; ++i) {
      ratios.push_back(u(rng));
      total += ratios.back();
    }
    // keep the images disjoint
    if (total > 1)
      for (double& r : ratios) r /= total * 1.001;
    auto res = bowen_dimension(moran_system(ratios));
    CHECK(contains(res, oracle::moran_root(ratios)));
    CHECK(res.width() <= 1e-6);
  }
}

TEST_CASE("conformal similarity systems: lower and upper estimates coincide") {
  auto sys = moran_system({0.3, 0.2, 0.1});
  auto up = upper_estimate(family_of(sys));
  auto lo = lower_estimate(family_of(sys));
  CHECK(up.s_lower <= lo.s_upper);
  CHECK(lo.s_lower <= up.s_upper);
  CHECK(up.c_scV2 == 0.0);
}

TEST_CASE("perturbed affine with conformal parts: conorm and norm brackets agree within distortion slack") {
  auto sys = affine_demo(0.1);
  auto up = upper_estimate(family_of(sys));
  auto lo = lower_estimate(family_of(sys));
  CHECK(std::abs(up.mid() - lo.mid()) <= up.width() + lo.width() + 1e-9);
}

TEST_CASE("an acyclic graph has no periodic words") {
  GifsSystem sys;
  sys.dim = 1;
  sys.r = 0.5;
  sys.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  sys.add_vertex(interval(3, 4), interval(2.5, 4.5));
  sys.add_edge(0, 1, oracle::similarity_1d(0.5, 3, 0));
  auto r = bowen_dimension(sys);
  CHECK(r.status == DimensionStatus::NoPeriodicWords);
  CHECK(r.s_upper == 0.0);
  GifsSystem empty;
  empty.dim = 1;
  empty.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  CHECK(upper_estimate(family_of(empty)).s_upper == 0.0);
  CHECK(lower_estimate(family_of(empty)).s_upper == 0.0);
}

TEST_CASE("overlapping images raise a condition violation") {
  GifsSystem sys;
  sys.dim = 1;
  sys.r = 0.5;
  sys.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  sys.add_edge(0, 0, oracle::similarity_1d(0.5, 0, 0));
  sys.add_edge(0, 0, oracle::similarity_1d(0.5, 0, 0.25));
  try {
    bowen_dimension(sys);
    FAIL("expected a condition violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConditionViolation);
  }
}

TEST_CASE("a countable horizon without a tail witness is refused") {
  auto sys = ladder_system(4);
  sys.tail.reset();
  try {
    bowen_dimension(sys);
    FAIL("expected a missing-witness error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SummabilityWitnessMissing);
  }
}

TEST_CASE("the countable ladder") {
  SolverOptions o;
  o.horizons = {2, 4, 8, 16, 32};
  auto r = bowen_dimension(ladder_family(), o);
  CHECK(r.provenance.summability_witness);
  CHECK(r.theta == 0.0);
  auto sub = bowen_dimension(ladder_subsystem());
  CHECK(r.s_upper >= sub.s_lower);
  CHECK(r.s_lower >= sub.s_lower - 1e-9);
  CHECK(r.width() <= 1e-3 + 1e-12);
}

TEST_CASE("the CF box family carries theta = 1 into the upper bound") {
  SolverOptions o;
  o.horizons = {2};
  o.tolerance = 1e-2;
  o.variation_floor = 0.0125;
  auto r = upper_estimate(cf_box_family({2}), o);
  CHECK(r.c_scV2 == doctest::Approx(1.0));
  CHECK(r.upper_bound() >= 1.0);
}

TEST_CASE("per-component dimensions") {
  auto sys = disjoint_moran({{1.0 / 3, 1.0 / 3}, {0.5, 0.125}});
  auto rep = dimension_per_component(sys);
  REQUIRE(rep.components.size() == 2);
  double a = std::log(2.0) / std::log(3.0), b = oracle::moran_root({0.5, 0.125});
  bool first_is_cantor = contains(rep.components[0].result, a, 1e-9);
  CHECK(contains(rep.components[first_is_cantor ? 0 : 1].result, a, 1e-9));
  CHECK(contains(rep.components[first_is_cantor ? 1 : 0].result, b, 1e-9));
  CHECK(contains(rep.global, a, 1e-9));

  auto one = dimension_per_component(moran_system({0.5, 0.25}));
  REQUIRE(one.components.size() == 1);
  CHECK(one.components[0].result.s_lower == one.global.s_lower);

  auto lad = dimension_per_component(ladder_system(6));
  CHECK(lad.components.size() == 1);
}

TEST_CASE("results are reproducible") {
  auto a = bowen_dimension(cf_system({Complex(1, 0), Complex(2, 0)}));
  auto b = bowen_dimension(cf_system({Complex(1, 0), Complex(2, 0)}));
  CHECK(a.s_lower == b.s_lower);
  CHECK(a.s_upper == b.s_upper);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("a resolution-limited solve still squeezes both ends") {
  SolverOptions o;
  o.tolerance = 1e-3;
  auto r = bowen_dimension(cf_system(gaussian_box(1)), o);
  CHECK(r.status == DimensionStatus::ResolutionLimited);
  CHECK(r.width() <= 2e-3);
  REQUIRE(r.at_lower);
  REQUIRE(r.at_upper);
  CHECK(r.at_lower->lower >= 0);
  CHECK(r.at_upper->full_upper <= 0);
}
