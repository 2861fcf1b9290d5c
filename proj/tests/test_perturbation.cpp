#include <doctest.h>

#include <cmath>

#include "gifs/error.hpp"
#include "gifs/perturbation.hpp"
#include "gifs/scenarios.hpp"

using namespace gifs;

namespace {

const std::vector<Complex> kSub{{1, 0}, {2, 0}};
const std::vector<Complex> kFull{{1, 0}, {2, 0}, {3, 0}, {1, 1}};

Eigen::Matrix2d rotation(double a) {
  Eigen::Matrix2d r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

}  // namespace

TEST_CASE("degenerate CF letter derivative") {
  auto sys = build_perturbed_cf(kSub, {{1, 0}, {2, 0}, {3, 0}}, 0.1);
  REQUIRE(sys.graph.edge_count() == 3);
  auto r = derivative_range_over_set(sys.maps[2], sys.J(0));
  CHECK(r.upper == doctest::Approx(0.1 / (3.45 * 3.45)).epsilon(1e-9));
  CHECK(r.lower == doctest::Approx(0.1 / (3.55 * 3.55)).epsilon(1e-9));
}

TEST_CASE("degenerate images shrink to 1/(e + 1/2)") {
  auto fam = cf_family(kSub, kFull);
  auto pts = limit_points(fam, build_perturbed_cf(kSub, kFull, 0.2));
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].x() == doctest::Approx(1 / 3.5));
  Complex a = 1.0 / Complex(1.5, 1);
  CHECK(pts[1].x() == doctest::Approx(a.real()));
  CHECK(pts[1].y() == doctest::Approx(a.imag()));
  double prev = INFINITY;
  for (double eps : geometric_schedule(1, 8)) {
    double d = degenerate_deviation(fam, eps);
    CHECK(d <= prev);
    prev = d;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("degenerate affine edges shrink toward their declared points") {
  auto fam = affine_demo_family();
  double prev = INFINITY;
  for (double eps : geometric_schedule(1, 10)) {
    double d = degenerate_deviation(fam, eps);
    CHECK(d <= prev);
    prev = d;
  }
  CHECK(prev < 1e-3);
  auto pts = limit_points(fam, affine_demo(0.3));
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].x() == doctest::Approx(0.5));
  CHECK(pts[1].x() == doctest::Approx(0.75));
  CHECK(pts[2].x() == doctest::Approx(0.25));
}

TEST_CASE("base edges converge to the base maps") {
  auto fam = affine_demo_family();
  for (double eps : {0.1, 0.01, 0.001}) {
    auto sys = affine_demo(eps);
    for (Index e = 0; e < fam.base_edges; ++e) {
      double a = derivative_range_over_set(sys.maps[e], sys.J(0)).upper;
      double b = derivative_range_over_set(fam.base.maps[e], fam.base.J(0)).upper;
      CHECK(std::abs(a - b) <= 0.05 * eps + 1e-15);
    }
  }
}

TEST_CASE("subE = fullE leaves the base unchanged") {
  for (double eps : {0.5, 0.1}) {
    auto sys = build_perturbed_cf(kSub, kSub, eps);
    auto base = cf_system(kSub);
    REQUIRE(sys.maps.size() == base.maps.size());
    for (Index e = 0; e < sys.maps.size(); ++e)
      CHECK((apply(sys.maps[e], Point(0.3, 0.1)) - apply(base.maps[e], Point(0.3, 0.1))).norm() == 0.0);
  }
}

TEST_CASE("affine builder: zero perturbation and a rotated degenerate edge") {
  AffineSpec none;
  none.dim = 1;
  auto base = build_perturbed_affine(affine_demo_base(), none, 0.7);
  for (Index e = 1; e < 3; ++e)
    CHECK(derivative_range_over_set(base.maps[e], base.J(0)).upper ==
          doctest::Approx(e == 1 ? 1.0 / 3 : 0.5));

  AffineSpec b2;
  b2.dim = 2;
  b2.J = {Shape(Ball{Point(0, 0), 1})};
  b2.O = {Shape(Ball{Point(0, 0), 2})};
  b2.edges = {{0, 0, 0.5 * Eigen::Matrix2d::Identity(), Point(0.4, 0), Eigen::Matrix2d::Identity(), 0, Point::Zero(), "a"}};
  AffineSpec ext;
  ext.dim = 2;
  ext.edges = {{0, 0, Eigen::Matrix2d::Zero(), Point(-0.5, 0), rotation(0.9), 0.1, Point::Zero(), "b"}};
  for (double eps : {0.3, 0.05}) {
    auto sys = build_perturbed_affine(b2, ext, eps);
    auto r = derivative_range_over_set(sys.maps[1], sys.J(0));
    CHECK(r.lower == doctest::Approx(0.1 * eps));
    CHECK(r.upper == doctest::Approx(0.1 * eps));
  }
}

TEST_CASE("affine demo separation at small eps") {
  auto sys = affine_demo(0.05);
  CHECK(check_separation(sys, 3, SeparationMode::SSC).verdict == SeparationVerdict::CertifiedSeparated);
  CHECK_FALSE(validate_conditions(sys, 3).any_violated());
}

TEST_CASE("declared countable extension without a witness") {
  AffineSpec ext = affine_demo_extension();
  ext.countable = true;
  try {
    build_perturbed_affine(affine_demo_base(), ext, 0.1);
    FAIL("expected SummabilityWitnessMissing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SummabilityWitnessMissing);
  }
}

TEST_CASE("invalid alphabets") {
  try {
    cf_family({{0, 1}}, {{0, 1}});
    FAIL("expected InvalidAlphabet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidAlphabet);
  }
  CHECK_THROWS_AS(build_perturbed_cf({{5, 0}}, {{1, 0}}, 0.1), Error);
}

TEST_CASE("sweep rows match standalone solves") {
  auto fam = affine_demo_family();
  auto rows = dimension_sweep(fam, {0.1, 0.05});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].eps == 0.0);
  for (Index k = 1; k < rows.size(); ++k) {
    auto direct = bowen_dimension(affine_demo(rows[k].eps));
    CHECK(direct.s_lower == rows[k].result.s_lower);
    CHECK(direct.s_upper == rows[k].result.s_upper);
    CHECK(rows[k].base_lower == rows[0].result.s_lower);
  }
}

TEST_CASE("property: affine sweep deviation is nonincreasing") {
  auto rows = dimension_sweep(affine_demo_family(), {0.2, 0.1, 0.05, 0.025});
  for (Index k = 2; k < rows.size(); ++k) {
    double slack = rows[k].result.width() + rows[k - 1].result.width() + 2 * rows[0].result.width();
    CHECK(rows[k].mid_deviation <= rows[k - 1].mid_deviation + slack);
  }
  CHECK(rows.back().mid_deviation < rows[1].mid_deviation);
}

TEST_CASE("a family with nothing to degenerate reproduces the base in every row") {
  auto rows = dimension_sweep(cf_family(kSub, kSub), {0.2, 0.1});
  for (const auto& r : rows) {
    CHECK(r.result.s_lower == rows[0].result.s_lower);
    CHECK(r.result.s_upper == rows[0].result.s_upper);
  }
}

TEST_CASE("failing rows are recorded, not thrown") {
  auto rows = dimension_sweep(affine_demo_family(), {1.5, 0.1});
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].failed);
  CHECK(rows[1].status.find("InvalidArgument") != std::string::npos);
  CHECK_FALSE(rows[2].failed);
  auto csv = sweep_csv(rows);
  CHECK(csv.rfind("eps,s_lower,s_upper,base_lower,base_upper,mid_deviation,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("divergence probe verdicts") {
  auto fam = cf_box_perturbation(kSub, {5, 10, 20});
  auto d = degeneracy_divergence_probe(fam, 0.9, {5, 10, 20}, 0.1);
  CHECK(d.verdict == DivergenceVerdict::Diverges);
  CHECK(d.analytic_lower_diverges);
  CHECK(d.growth_exponent > 0);
  for (Index k = 1; k < d.sup_sums.size(); ++k) CHECK(d.sup_sums[k] > d.sup_sums[k - 1]);
  CHECK(d.increments[1] >= d.increments[0]);

  auto c = degeneracy_divergence_probe(fam, 1.5, {5, 10, 20}, 0.1);
  CHECK(c.verdict == DivergenceVerdict::Converges);
  CHECK(c.increments[1] < c.increments[0]);

  auto f = degeneracy_divergence_probe(cf_family(kSub, kFull), 0.9, {1, 2}, 0.1);
  CHECK(f.verdict == DivergenceVerdict::Converges);
  CHECK(to_string(f.verdict) == "converges");
}

TEST_CASE("geometric schedules") {
  auto s = geometric_schedule(2, 4);
  CHECK(s == std::vector<double>{0.25, 0.125, 0.0625});
  CHECK_THROWS(geometric_schedule(3, 2));
}

TEST_CASE("sweeps label rows whose summability hypothesis fails") {
  SolverOptions o;
  o.tolerance = 1e-2;
  o.variation_floor = 0.0125;
  auto rows = dimension_sweep(cf_box_perturbation(kSub, {2, 3}), {0.25}, o);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[1].hypothesis_verified);
  CHECK(rows[1].status.find("hypothesis-unverified") != std::string::npos);
  CHECK(rows[1].result.s_lower >= 1.0);

  auto finite = dimension_sweep(affine_demo_family(), {0.1});
  CHECK(finite[1].hypothesis_verified);
  CHECK(finite[1].status.find("hypothesis") == std::string::npos);
}
