#include <doctest.h>

#include <cmath>
#include <random>

#include "gifs/error.hpp"
#include "gifs/render.hpp"
#include "gifs/scenarios.hpp"
#include "gifs/system.hpp"

using namespace gifs;

namespace {

MapSpec sim1(double r, double t) {
  Similarity s;
  s.ratio = r;
  s.translation = Point(t, 0);
  return {s, std::nullopt, 1.0};
}

GifsSystem line_system(std::vector<std::pair<double, double>> maps, double r = 0.5) {
  GifsSystem sys;
  sys.dim = 1;
  sys.r = r;
  sys.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  for (auto [ratio, t] : maps) sys.add_edge(0, 0, sim1(ratio, t));
  return sys;
}

// two vertices with parallel edges
GifsSystem parallel_system() {
  GifsSystem sys;
  sys.dim = 1;
  sys.r = 0.3;
  sys.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  sys.add_vertex(interval(3, 4), interval(2.5, 4.5));
  sys.add_edge(0, 1, sim1(0.25, 0 - 0.25 * 3));
  sys.add_edge(0, 1, sim1(0.25, 0.5 - 0.25 * 3));
  sys.add_edge(1, 0, sim1(0.3, 3));
  sys.add_edge(1, 0, sim1(0.3, 3.7));
  sys.add_edge(0, 0, sim1(0.2, 0.8));
  return sys;
}

void check_reduction(const GifsSystem& sys, std::uint64_t seed) {
  ReducedSystem red = reduce_to_simple(sys);
  CHECK(red.system.graph.is_simple());
  CHECK(red.system.graph.vertex_count() == sys.graph.edge_count());
  std::mt19937_64 rng(seed);
  auto words = random_words(sys, 20, 100, rng);
  REQUIRE(words.size() == 100);
  for (const auto& w : words) {
    Index last = w.back();
    Point anchor = apply(sys.maps[last], center(sys.J(sys.graph.edge(last).terminal)));
    auto a = coding_map(sys, w);
    auto rw = edge_word_from_vertex_word(red.system.graph, w);
    auto b = coding_map(red.system, rw, anchor);
    CHECK((a.x - b.x).norm() <= 1e-9);
    CHECK(vertex_word_from_edge_word(red.system.graph, rw) == w);
  }
}

}  // namespace

TEST_CASE("ladder at horizon 5 satisfies the seed conditions") {
  auto sys = ladder_system(5);
  auto rep = validate_conditions(sys, 5);
  for (const char* c : {"G2", "G3", "G4"}) CHECK(rep.at(c).status == ConditionStatus::Satisfied);
  CHECK(rep.at("G9J").status == ConditionStatus::Satisfied);
  CHECK_FALSE(rep.any_violated());
}

TEST_CASE("J = O violates the interior condition with the vertex as witness") {
  GifsSystem sys;
  sys.dim = 1;
  sys.add_vertex(interval(0, 1), interval(0, 1));
  sys.add_edge(0, 0, sim1(0.5, 0));
  auto rep = validate_conditions(sys, 1);
  CHECK(rep.at("G3").status == ConditionStatus::Violated);
  CHECK(rep.at("G3").witness.find("vertex") != std::string::npos);
}

TEST_CASE("declared r below a map ratio violates contraction") {
  auto sys = line_system({{0.6, 0}, {0.2, 0.8}}, 0.5);
  auto rep = validate_conditions(sys, 1);
  CHECK(rep.at("G4").status == ConditionStatus::Violated);
  CHECK(rep.at("G4").witness.find("edge") != std::string::npos);
}

TEST_CASE("separation oracles") {
  auto cantor = line_system({{1.0 / 3, 0}, {1.0 / 3, 2.0 / 3}});
  CHECK(check_separation(cantor, 1, SeparationMode::OSC).verdict == SeparationVerdict::CertifiedSeparated);
  CHECK(check_separation(cantor, 1, SeparationMode::SSC).verdict == SeparationVerdict::CertifiedSeparated);
  auto overlap = line_system({{0.5, 0}, {0.5, 0.25}});
  auto rep = check_separation(overlap, 1, SeparationMode::OSC);
  CHECK(rep.verdict == SeparationVerdict::OverlapWitness);
  CHECK(rep.witness.has_value());
  auto cf = cf_system({Complex(1, 0), Complex(2, 0)});
  CHECK(check_separation(cf, 1, SeparationMode::OSC).verdict == SeparationVerdict::CertifiedSeparated);
}

TEST_CASE("reduction of a two-loop full shift is the full line graph") {
  auto sys = line_system({{1.0 / 3, 0}, {1.0 / 3, 2.0 / 3}});
  auto red = reduce_to_simple(sys);
  CHECK(red.system.graph.vertex_count() == 2);
  CHECK(red.system.graph.edge_count() == 4);
  CHECK(red.dead_ends.empty());
}

TEST_CASE("reduction flags dead-end edges") {
  GifsSystem sys;
  sys.dim = 1;
  sys.r = 0.5;
  sys.add_vertex(interval(0, 1), interval(-0.5, 1.5));
  sys.add_vertex(interval(3, 4), interval(2.5, 4.5));
  sys.add_edge(0, 0, sim1(0.3, 0));
  sys.add_edge(0, 1, sim1(0.3, 0.7 - 0.9));
  auto red = reduce_to_simple(sys);
  REQUIRE(red.dead_ends.size() == 1);
  CHECK(red.dead_ends[0] == 1);
  CHECK(red.system.graph.out_edges(1).empty());
}

TEST_CASE("property: reduction preserves coding points under word translation") {
  check_reduction(line_system({{1.0 / 3, 0}, {1.0 / 3, 2.0 / 3}}), 1);
  check_reduction(parallel_system(), 2);
  check_reduction(cf_system({Complex(1, 0), Complex(2, 0), Complex(1, 1)}), 3);
}

TEST_CASE("summability intervals") {
  std::vector<double> grid{0.05, 0.5, 1.0, 2.0};
  auto lad = summability_interval(ladder_family({2, 4, 8}), NormSelector::Norm, {}, grid);
  CHECK(lad.has_witness);
  CHECK(lad.theta_hat == 0.0);
  for (const auto& p : lad.points) CHECK(p.verdict == SummabilityVerdict::Summable);

  auto cf = summability_interval(cf_box_family({2, 4, 8}), NormSelector::Norm, {}, {0.8, 1.5});
  CHECK(cf.theta_hat == doctest::Approx(1.0));
  CHECK(cf.points[1].verdict == SummabilityVerdict::Summable);
  CHECK(cf.points[0].verdict != SummabilityVerdict::Summable);

  auto fin = summability_interval(finite_family(line_system({{0.5, 0}, {0.25, 0.7}})), NormSelector::Norm, {}, grid);
  CHECK(fin.theta_hat == 0.0);
  for (const auto& p : fin.points) CHECK(p.verdict == SummabilityVerdict::Summable);
}

TEST_CASE("restrict_edges keeps vertices and the chosen maps") {
  auto sub = ladder_subsystem();
  CHECK(sub.graph.vertex_count() == 2);
  CHECK(sub.graph.edge_count() == 3);
  CHECK_FALSE(sub.tail.has_value());
}

TEST_CASE("row sups of the ladder follow 2^-(v+1)") {
  auto sys = ladder_system(6);
  auto sups = coding_row_sups(sys, NormSelector::Norm);
  REQUIRE(sups.size() == 6);
  CHECK(sups[0] == doctest::Approx(0.5));
  for (Index v = 1; v < 6; ++v) CHECK(sups[v] == doctest::Approx(std::ldexp(1.0, -static_cast<int>(v + 1))));
  for (Index v = 0; v < 6; ++v) CHECK(sups[v] <= sys.tail->row_sup(v) * (1 + 1e-12));
}
