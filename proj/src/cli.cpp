#include "gifs/cli.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "gifs/dimension.hpp"
#include "gifs/error.hpp"
#include "gifs/perturbation.hpp"
#include "gifs/pressure.hpp"
#include "gifs/render.hpp"

namespace gifs {

namespace {

constexpr const char* kVersion = "1.0.0";

// JSON has no infinities; they travel as strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Index last_horizon(const SystemFamily& f) { return f.horizons.empty() ? 0 : f.horizons.back(); }

Json meta(const RunConfig& cfg, const std::string& command, const SystemFamily* family) {
  Json m{{"config_digest", cfg.digest}, {"scenario", cfg.scenario}, {"command", command},
         {"version", kVersion},         {"seed", cfg.seed},         {"threads", cfg.threads}};
  if (family) {
    m["horizons"] = family->horizons;
    m["countable"] = family->infinite;
  }
  m["budget"] = {{"nnz_budget", cfg.dimension.nnz_budget},
                 {"max_evaluations", cfg.dimension.max_evaluations},
                 {"time_budget", cfg.dimension.time_budget}};
  return m;
}

Json record(const std::string& kind, const Json& meta_block) {
  Json r{{"record", kind}};
  r["meta"] = meta_block;
  return r;
}

Json estimate_json(const PressureEstimate& e) {
  Json j{{"s", e.s},
         {"n", e.n},
         {"k", e.k},
         {"m", e.m},
         {"lower", num(e.lower)},
         {"upper", num(e.upper)},
         {"full_upper", num(e.full_upper)},
         {"divergence_flag", e.divergence},
         {"states", e.states},
         {"transitions", e.transitions},
         {"stalled", e.stalled},
         {"budget_hit", e.budget_hit},
         {"max_variation", num(e.max_variation)},
         {"method", to_string(e.method)}};
  if (e.epsilon) j["epsilon"] = *e.epsilon;
  if (e.component) j["component"] = *e.component;
  return j;
}

Json dimension_json(const DimensionResult& r) {
  Json j{{"s_lower", num(r.s_lower)},
         {"s_upper", num(r.s_upper)},
         {"upper_bound", num(r.upper_bound())},
         {"theta", num(r.theta)},
         {"c_scV2", num(r.c_scV2)},
         {"status", to_string(r.status)},
         {"horizon", r.horizon},
         {"variation_tol", r.variation_tol},
         {"evaluations", r.evaluations},
         {"message", r.message}};
  if (r.component) j["component"] = *r.component;
  const auto& p = r.provenance;
  j["provenance"] = {{"conformal", p.conformal},
                     {"ssc", p.ssc},
                     {"osc", p.osc},
                     {"summability_witness", p.summability_witness},
                     {"theta", num(p.theta)},
                     {"conditions_violated", p.conditions_violated}};
  if (r.at_lower) j["at_lower"] = estimate_json(*r.at_lower);
  if (r.at_upper) j["at_upper"] = estimate_json(*r.at_upper);
  return j;
}

SolverOptions solver_options(const RunConfig& cfg) {
  const auto& d = cfg.dimension;
  SolverOptions o;
  o.tolerance = d.tolerance;
  o.s_max = d.s_max;
  o.horizons = d.horizons;
  o.max_evaluations = d.max_evaluations;
  o.time_budget = d.time_budget;
  o.initial_variation = d.initial_variation;
  o.variation_floor = d.variation_floor;
  o.spectral.nnz_budget = static_cast<Index>(d.nnz_budget);
  o.check_separation = d.check_separation;
  return o;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  f << content;
  if (!f) fail(ErrorCode::InvalidArgument, "write to '" + path + "' failed");
}

PerturbationFamily require_perturbation(const RunConfig& cfg) {
  auto p = scenario_perturbation(cfg);
  if (!p) fail(ErrorCode::InvalidArgument, "scenario '" + cfg.scenario + "' has no degenerate perturbation");
  return *p;
}

Json separation_json(const SeparationReport& s) {
  Json j{{"verdict", to_string(s.verdict)}, {"min_gap", num(s.min_gap)}, {"pairs_checked", s.pairs_checked}};
  if (s.witness) j["witness"] = {s.witness->first, s.witness->second};
  return j;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  SystemFamily fam = scenario_family(cfg);
  Index h = last_horizon(fam);
  GifsSystem sys = fam.materialize(h);
  Json r = record("analyze", meta(cfg, "analyze", &fam));
  r["system"] = sys.name;
  r["vertices"] = sys.graph.vertex_count();
  r["edges"] = sys.graph.edge_count();
  r["simple"] = sys.graph.is_simple();
  r["horizon"] = h;

  ConditionReport rep = validate_conditions(sys, std::max<Index>(h, 1));
  Json conds = Json::array();
  for (const auto& e : rep.entries)
    conds.push_back({{"name", e.name}, {"status", to_string(e.status)}, {"witness", e.witness}, {"value", num(e.value)}});
  r["conditions"] = conds;
  auto ssc = check_separation(sys, h, SeparationMode::SSC);
  auto osc = check_separation(sys, h, SeparationMode::OSC);
  r["separation"] = {{"ssc", separation_json(ssc)}, {"osc", separation_json(osc)}};

  TransitionMatrix a = sys.graph.is_simple() ? build_vertex_transition(sys.graph) : build_edge_transition(sys.graph);
  SccDecomposition scc = strongly_connected_components(a);
  Json sizes = Json::array();
  for (Index c = 0; c < scc.components.size(); ++c)
    if (!scc.trivial[c]) sizes.push_back(scc.components[c].size());
  r["scc"] = {{"coding_states", a.size()},
              {"classes", scc.components.size()},
              {"nontrivial", scc.nontrivial_count()},
              {"nontrivial_sizes", sizes},
              {"irreducible", is_irreducible(a)}};

  std::mt19937_64 rng(cfg.seed);
  if (sys.graph.edge_count() > 0) {
    auto lip = lipschitz_probe(sys, cfg.checks.word_length, static_cast<Index>(cfg.checks.pairs), rng);
    r["lipschitz_probe"] = {{"pairs", lip.pairs},
                            {"violations", lip.violations},
                            {"worst_ratio", num(lip.worst_ratio)},
                            {"c_cp", num(lip.c_cp)}};
  }
  if (auto pert = scenario_perturbation(cfg)) {
    GifsSystem lim = limit_system(*pert, sys);
    auto words = random_words(sys, cfg.checks.word_length, static_cast<Index>(cfg.checks.words), rng);
    auto pr = coding_convergence_probe(lim, sys, words);
    r["coding_probe"] = {{"words", pr.words},
                         {"sup_difference", num(pr.sup_difference)},
                         {"bound", num(pr.bound)},
                         {"holds", pr.holds()}};
  }
  out << r.dump() << "\n";
  return rep.any_violated() || osc.verdict == SeparationVerdict::OverlapWitness ? ExitViolation : ExitOk;
}

int cmd_pressure(const RunConfig& cfg, std::ostream& out) {
  SystemFamily fam = scenario_family(cfg);
  const auto& pp = cfg.pressure;
  PotentialSpec pot{pp.selector == "conorm" ? NormSelector::Conorm : NormSelector::Norm, pp.s, std::nullopt};
  if (scenario_perturbation(cfg)) pot.epsilon = cfg.params.eps;
  SpectralOptions opts;
  opts.depth = pp.depth;
  opts.variation_tol = pp.variation_tol;
  opts.nnz_budget = static_cast<Index>(pp.nnz_budget);
  Json m = meta(cfg, "pressure", &fam);
  if (pp.method == "word_sum") {
    for (Index h : fam.horizons) {
      Json r = record("pressure", m);
      r["horizon"] = h;
      r["estimate"] = estimate_json(pressure_word_sum(fam.materialize(h), pot, pp.n));
      out << r.dump() << "\n";
    }
    return ExitOk;
  }
  for (const auto& e : truncation_ladder(fam, pot, fam.horizons, opts)) {
    Json r = record("pressure", m);
    r["horizon"] = e.horizon;
    r["estimate"] = estimate_json(e.estimate);
    r["certified_lower"] = num(e.certified_lower);
    r["certified_upper"] = num(e.certified_upper);
    out << r.dump() << "\n";
  }
  return ExitOk;
}

int cmd_dimension(const RunConfig& cfg, std::ostream& out) {
  SystemFamily fam = scenario_family(cfg);
  DimensionResult res = bowen_dimension(fam, solver_options(cfg));
  Json r = record("dimension", meta(cfg, "dimension", &fam));
  r["result"] = dimension_json(res);
  out << r.dump() << "\n";
  return ExitOk;
}

int cmd_components(const RunConfig& cfg, std::ostream& out) {
  SystemFamily fam = scenario_family(cfg);
  GifsSystem sys = fam.materialize(last_horizon(fam));
  ComponentReport rep = dimension_per_component(sys, solver_options(cfg));
  Json m = meta(cfg, "components", &fam);
  for (const auto& c : rep.components) {
    Json r = record("component", m);
    r["component"] = c.component;
    r["states"] = c.states;
    r["result"] = dimension_json(c.result);
    out << r.dump() << "\n";
  }
  Json r = record("components", m);
  r["count"] = rep.components.size();
  r["global"] = dimension_json(rep.global);
  out << r.dump() << "\n";
  return ExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  PerturbationFamily pert = require_perturbation(cfg);
  auto rows = dimension_sweep(pert, cfg.sweep_epsilons, solver_options(cfg));
  std::string path = cfg.output.csv.empty() ? "sweep.csv" : cfg.output.csv;
  write_file(path, sweep_csv(rows));
  Json m = meta(cfg, "sweep", nullptr);
  bool monotone = true;
  for (Index k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    Json r = record("sweep_row", m);
    r["eps"] = row.eps;
    r["status"] = row.status;
    r["failed"] = row.failed;
    r["hypothesis_verified"] = row.hypothesis_verified;
    if (!row.failed) {
      r["result"] = dimension_json(row.result);
      r["mid_deviation"] = num(row.mid_deviation);
    }
    out << r.dump() << "\n";
    // later rows have smaller eps; allow the two bracket widths as slack
    if (k >= 2 && !row.failed && !rows[k - 1].failed) {
      double slack = row.result.width() + rows[k - 1].result.width() + 2 * rows[0].result.width();
      if (row.eps < rows[k - 1].eps && row.mid_deviation > rows[k - 1].mid_deviation + slack) monotone = false;
    }
  }
  Json r = record("sweep_summary", m);
  r["csv"] = path;
  r["rows"] = rows.size();
  r["deviation_nonincreasing"] = monotone;
  out << r.dump() << "\n";
  return ExitOk;
}

int cmd_probe(const RunConfig& cfg, std::ostream& out) {
  PerturbationFamily pert = require_perturbation(cfg);
  Json m = meta(cfg, "probe-divergence", nullptr);
  for (double eps : cfg.probe.epsilons) {
    auto rep = degeneracy_divergence_probe(pert, cfg.probe.s, cfg.probe.horizons, eps);
    Json r = record("divergence", m);
    Json incs = Json::array(), sups = Json::array(), infs = Json::array();
    for (double x : rep.increments) incs.push_back(num(x));
    for (double x : rep.sup_sums) sups.push_back(num(x));
    for (double x : rep.inf_sums) infs.push_back(num(x));
    r["s"] = rep.s;
    r["eps"] = rep.eps;
    r["horizons"] = rep.horizons;
    r["sup_sums"] = sups;
    r["inf_sums"] = infs;
    r["increments"] = incs;
    r["growth_exponent"] = num(rep.growth_exponent);
    r["verdict"] = to_string(rep.verdict);
    r["analytic_lower_diverges"] = rep.analytic_lower_diverges;
    if (rep.finite_certificate) r["finite_certificate"] = *rep.finite_certificate;
    r["implication"] = rep.implication;
    out << r.dump() << "\n";
  }
  return ExitOk;
}

int cmd_render(const RunConfig& cfg, std::ostream& out) {
  SystemFamily fam = scenario_family(cfg);
  const auto& rp = cfg.render;
  Index h = rp.horizon ? rp.horizon : last_horizon(fam);
  GifsSystem sys = fam.materialize(h);
  PointCloud cloud = generate_point_cloud(sys, rp.depth, 0, rp.cap);
  RasterBounds b = rp.bounds ? *rp.bounds : cloud_bounds(cloud);
  RasterImage img = rasterize(cloud, b, rp.width, rp.height);
  std::string pgm = to_pgm(img, rp.binary);
  write_file(cfg.output.pgm, pgm);
  if (!cfg.output.csv.empty()) write_file(cfg.output.csv, cloud_csv(cloud));
  Json r = record("render", meta(cfg, "render", &fam));
  r["horizon"] = h;
  r["pgm"] = cfg.output.pgm;
  r["format"] = rp.binary ? "P5" : "P2";
  r["width"] = img.width;
  r["height"] = img.height;
  r["bounds"] = {num(b.xmin), num(b.xmax), num(b.ymin), num(b.ymax)};
  r["points"] = cloud.points.size();
  r["truncated"] = cloud.truncated;
  r["occupied"] = img.occupied();
  r["pgm_fnv1a"] = hex64(fnv1a(pgm));
  out << r.dump() << "\n";
  return ExitOk;
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out) {
  SystemFamily fam = scenario_family(cfg);
  GifsSystem sys = fam.materialize(last_horizon(fam));
  ReducedSystem red = reduce_to_simple(sys);
  Json config{{"scenario", "inline"}, {"system", system_to_json(red.system)}};
  if (!cfg.output.config.empty()) write_file(cfg.output.config, config.dump(2) + "\n");
  Json r = record("reduce", meta(cfg, "reduce", &fam));
  r["vertices"] = red.system.graph.vertex_count();
  r["edges"] = red.system.graph.edge_count();
  r["dead_ends"] = red.dead_ends;
  r["tail_witness_dropped"] = sys.tail.has_value();
  r["config"] = config;
  out << r.dump() << "\n";
  return ExitOk;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"analyze", "pressure", "dimension",        "components",
                                              "sweep",   "render",   "probe-divergence", "reduce"};
  return names;
}

Json error_record(const std::string& command, const std::string& code, const std::string& message) {
  return {{"record", "error"}, {"command", command}, {"code", code}, {"message", message}};
}

int run(const std::string& command, const RunConfig& cfg, std::ostream& records) {
  try {
    if (command == "analyze") return cmd_analyze(cfg, records);
    if (command == "pressure") return cmd_pressure(cfg, records);
    if (command == "dimension") return cmd_dimension(cfg, records);
    if (command == "components") return cmd_components(cfg, records);
    if (command == "sweep") return cmd_sweep(cfg, records);
    if (command == "probe-divergence") return cmd_probe(cfg, records);
    if (command == "render") return cmd_render(cfg, records);
    if (command == "reduce") return cmd_reduce(cfg, records);
    fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  } catch (const Error& e) {
    Json r = error_record(command, std::string(to_string(e.code())), e.what());
    r["meta"] = meta(cfg, command, nullptr);
    records << r.dump() << "\n";
    return e.code() == ErrorCode::ConditionViolation ? ExitViolation : ExitFault;
  } catch (const std::exception& e) {
    Json r = error_record(command, "InternalError", e.what());
    r["meta"] = meta(cfg, command, nullptr);
    records << r.dump() << "\n";
    return ExitFault;
  }
}

void apply_override(Json& doc, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    fail(ErrorCode::SchemaViolation, "override '" + assignment + "' is not of the form key.path=value");
  std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  if (!doc.is_object()) doc = Json::object();
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    auto dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) fail(ErrorCode::SchemaViolation, "override path '" + path + "' has an empty component");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    Json& next = (*node)[key];
    if (!next.is_object()) next = Json::object();
    node = &next;
    start = dot + 1;
  }
}

}  // namespace gifs
