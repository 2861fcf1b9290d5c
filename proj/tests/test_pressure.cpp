#include <doctest.h>

#include <cmath>
#include <random>

#include "gifs/pressure.hpp"
#include "gifs/scenarios.hpp"
#include "oracles.hpp"

using namespace gifs;

namespace {

PotentialSpec at(double s, NormSelector sel = NormSelector::Norm) { return {sel, s, std::nullopt}; }

bool brackets(const PressureEstimate& e, double x, double slack = 1e-12) {
  return e.lower - slack <= x && x <= e.upper + slack;
}

}  // namespace

TEST_CASE("cylinder weights") {
  auto sys = moran_system({0.5, 0.25});
  auto w = cylinder_weight(sys, {0, 1}, at(1));
  CHECK(w.lower == doctest::Approx(0.5));
  CHECK(w.upper == doctest::Approx(0.5));
  auto w3 = cylinder_weight(sys, {0, 1, 0}, at(1));
  CHECK(w3.lower == doctest::Approx(0.125));
  CHECK(w3.upper == doctest::Approx(0.125));
  auto cf = cf_system({Complex(1, 0)});
  auto c = cylinder_weight(cf, {0, 0}, at(2));
  CHECK(c.lower >= 1.0 / 16 - 1e-12);
  CHECK(c.upper <= 1.0 + 1e-12);
  CHECK(c.lower <= c.upper);
  auto z = cylinder_weight(cf, {0, 0, 0}, at(0));
  CHECK(z.lower == doctest::Approx(1.0));
  CHECK(z.upper == doctest::Approx(1.0));
}

TEST_CASE("word sums on full shifts") {
  auto sys = moran_system({0.5, 0.125});
  auto e0 = pressure_word_sum(sys, at(0), 8);
  CHECK(e0.lower == doctest::Approx(std::log(2.0)));
  CHECK(e0.upper == doctest::Approx(std::log(2.0)));
  auto e = pressure_word_sum(sys, at(0.5514), 10);
  CHECK(e.width() < 1e-3);
  CHECK(brackets(e, std::log(std::pow(0.5, 0.5514) + std::pow(0.125, 0.5514))));
  auto three = pressure_word_sum(moran_system({0.25, 0.25, 0.25}), at(1), 6);
  CHECK(three.lower == doctest::Approx(std::log(0.75)));
}

TEST_CASE("spectral pressure examples") {
  auto e = pressure_spectral(moran_system({0.5, 0.125}), at(1));
  CHECK(e.lower == doctest::Approx(std::log(0.625)));
  CHECK(e.upper == doctest::Approx(std::log(0.625)));

  GifsSystem cyc;
  cyc.dim = 1;
  cyc.r = 0.5;
  cyc.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  cyc.add_vertex(interval(3, 4), interval(2.5, 4.5));
  cyc.add_edge(0, 1, oracle::similarity_1d(0.5, 3, 0));
  cyc.add_edge(1, 0, oracle::similarity_1d(0.5, 0, 3));
  auto c = pressure_spectral(cyc, at(1));
  CHECK(c.lower == doctest::Approx(std::log(0.5)));
  CHECK(c.upper == doctest::Approx(std::log(0.5)));
}

TEST_CASE("CF brackets shrink with refinement depth") {
  auto cf = cf_system({Complex(1, 0), Complex(2, 0)});
  SpectralOptions o2, o3, o4;
  o2.depth = 2;
  o3.depth = 3;
  o4.depth = 4;
  auto e2 = pressure_spectral(cf, at(1), o2);
  auto e3 = pressure_spectral(cf, at(1), o3);
  auto e4 = pressure_spectral(cf, at(1), o4);
  CHECK(e3.width() <= e2.width());
  CHECK(e4.width() <= e3.width());
  // all brackets enclose the same pressure
  CHECK(std::max({e2.lower, e3.lower, e4.lower}) <= std::min({e2.upper, e3.upper, e4.upper}));
}

TEST_CASE("SCC max: components without periodic words do not contribute") {
  GifsSystem sys;
  sys.dim = 1;
  sys.r = 0.5;
  for (int v = 0; v < 3; ++v) sys.add_vertex(interval(3.0 * v, 3.0 * v + 1), interval(3.0 * v - 0.5, 3.0 * v + 1.5));
  sys.add_edge(0, 1, oracle::similarity_1d(0.5, 3, 0));
  sys.add_edge(1, 0, oracle::similarity_1d(0.5, 0, 3));
  sys.add_edge(1, 2, oracle::similarity_1d(0.1, 6, 3.5));
  std::vector<ComponentPressure> parts;
  auto e = pressure_scc_max(sys, at(1), {}, &parts);
  CHECK(e.lower == doctest::Approx(std::log(0.5)));
  CHECK(parts.size() == 1);
}

TEST_CASE("SCC max on disjoint full shifts") {
  auto sys = disjoint_moran({{0.5}, {0.25}});
  std::vector<ComponentPressure> parts;
  auto e = pressure_scc_max(sys, at(1), {}, &parts);
  CHECK(parts.size() == 2);
  CHECK(e.upper == doctest::Approx(std::log(0.5)));
  REQUIRE(e.component.has_value());
  CHECK(parts[*e.component].estimate.upper == doctest::Approx(std::log(0.5)));
}

TEST_CASE("ladder at horizon 4 is a single component") {
  std::vector<ComponentPressure> parts;
  pressure_scc_max(ladder_system(4), at(0.6), {}, &parts);
  CHECK(parts.size() == 1);
  CHECK(parts[0].states.size() == 4);
}

TEST_CASE("property: SCC max agrees with the dense spectral radius") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    auto ws = oracle::dag_of_cycles(rng);
    for (double s : {0.3, 1.0}) {
      auto e = pressure_scc_max(ws.system, at(s));
      double truth = oracle::log_radius(oracle::powered(ws.ratios, s));
      CHECK(brackets(e, truth, 1e-9));
      CHECK(e.width() <= 1e-8);
    }
  }
}

TEST_CASE("no periodic words") {
  GifsSystem sys;
  sys.dim = 1;
  sys.r = 0.5;
  sys.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  sys.add_vertex(interval(3, 4), interval(2.5, 4.5));
  sys.add_edge(0, 1, oracle::similarity_1d(0.5, 3, 0));
  CHECK(pressure_scc_max(sys, at(1)).no_periodic_words());
}

TEST_CASE("property: truncation ladders have nondecreasing certified lowers") {
  for (double s : {0.4, 0.5514, 0.7, 1.0}) {
    auto lad = truncation_ladder(ladder_family(), at(s), {2, 4, 8});
    for (Index k = 1; k < lad.size(); ++k) {
      CHECK(lad[k].estimate.lower >= lad[k - 1].estimate.lower - 1e-12);
      CHECK(lad[k].certified_upper <= lad[k - 1].certified_upper);
    }
    CHECK(lad.back().certified_lower <= lad.back().certified_upper);
  }
  SpectralOptions o;
  o.variation_tol = 0.1;
  auto cf = truncation_ladder(cf_box_family(), at(1.2), {2, 4, 8}, o);
  for (Index k = 1; k < cf.size(); ++k) CHECK(cf[k].estimate.lower >= cf[k - 1].estimate.lower - 1e-12);
}

TEST_CASE("a finite family's ladder is constant") {
  auto lad = truncation_ladder(finite_family(moran_system({0.5, 0.25})), at(1), {1, 2, 3});
  for (const auto& e : lad) CHECK(e.estimate.lower == doctest::Approx(lad[0].estimate.lower));
}

TEST_CASE("the countable ladder upper is finite and bounds the lower") {
  auto lad = truncation_ladder(ladder_family(), at(0.5514), {2, 4, 8, 16});
  CHECK(std::isfinite(lad.back().certified_upper));
  CHECK(lad.back().certified_lower <= lad.back().certified_upper);
  // the {1,2} subsystem value is a floor
  auto sub = pressure_spectral(ladder_subsystem(), at(0.5514));
  CHECK(lad.back().certified_lower >= sub.lower - 1e-12);
}

TEST_CASE("below the summability threshold the full upper is infinite") {
  auto e = pressure_spectral(cf_box_family().materialize(4), at(0.9));
  CHECK(std::isinf(e.full_upper));
  CHECK(e.divergence);
}

TEST_CASE("horizons must increase") {
  CHECK_THROWS(truncation_ladder(ladder_family(), at(1), {4, 2}));
}

TEST_CASE("deep ladder truncations keep a tight certified lower bound") {
  auto sys = ladder_family().materialize(64);
  auto e = pressure_spectral(sys, {NormSelector::Norm, 0.625, std::nullopt}, {});
  CHECK(e.lower > 0);
  CHECK(e.upper - e.lower < 1e-8);
}

TEST_CASE("adaptive partitions stay within the transition budget") {
  auto sys = cf_system(gaussian_box(2));
  double prev = INFINITY;
  for (Index budget : {20000, 80000, 320000}) {
    SpectralOptions so;
    so.variation_tol = 1e-4;
    so.nnz_budget = budget;
    auto e = pressure_spectral(sys, at(1.5), so);
    CHECK(e.budget_hit);
    CHECK(e.transitions <= budget);
    CHECK(e.max_variation <= prev);
    prev = e.max_variation;
  }
}
