#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gifs/perturbation.hpp"
#include "gifs/render.hpp"
#include "gifs/system.hpp"

namespace gifs {

using Json = nlohmann::json;

struct ScenarioParams {
  std::vector<Complex> alphabet;
  std::vector<Complex> sub_alphabet;
  std::vector<Complex> full_alphabet;
  double eps = 0.1;
  std::vector<std::vector<double>> groups;  // moran: one ratio list per vertex
  std::vector<Index> horizons;              // ladder horizons or E_* boxes
};

struct PressureParams {
  double s = 1.0;
  std::string method = "spectral";  // or "word_sum"
  std::string selector = "norm";    // or "conorm"
  int n = 8;                        // word length for word_sum
  int depth = 1;
  double variation_tol = 0.0;
  double nnz_budget = 4e6;
};

struct DimensionParams {
  double tolerance = 0.0;
  double s_max = 0.0;
  std::vector<Index> horizons;
  int max_evaluations = 400;
  double time_budget = 120.0;
  double initial_variation = 0.05;
  double variation_floor = 0.05 / 32;
  double nnz_budget = 4e6;
  bool check_separation = true;
};

struct ProbeParams {
  double s = 0.99;
  std::vector<Index> horizons{5, 10, 20};
  std::vector<double> epsilons{0.25, 0.125, 0.0625};
};

struct RenderParams {
  int depth = 8;
  int width = 512;
  int height = 512;
  std::optional<RasterBounds> bounds;
  bool binary = false;
  Index cap = 200000;
  Index horizon = 0;  // 0: the last horizon of the scenario
};

struct CheckParams {
  int words = 200;       // coding-map probe sample size
  int word_length = 20;
  int pairs = 1000;      // Lipschitz probe pairs
};

struct OutputParams {
  std::string records;  // JSON lines; empty writes to stdout
  std::string csv;      // sweep table (render: optional point cloud)
  std::string pgm = "render.pgm";
  std::string config;   // reduce: the reduced system as a config file
};

struct RunConfig {
  std::string scenario;
  ScenarioParams params;
  std::optional<GifsSystem> inline_system;
  std::uint64_t seed = 1;
  int threads = 1;
  PressureParams pressure;
  DimensionParams dimension;
  std::vector<double> sweep_epsilons;
  ProbeParams probe;
  RenderParams render;
  CheckParams checks;
  OutputParams output;

  Json normalized;     // the config with every default filled in
  std::string digest;  // FNV-1a of the normalized config, hex
};

// Throws SchemaViolation listing every offending field path.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const Json& doc);
inline RunConfig parse_config(const char* text) { return parse_config(std::string(text)); }

const std::vector<std::string>& scenario_names();

// The scenario as a system family (finite scenarios have one horizon).
SystemFamily scenario_family(const RunConfig& config);
// Degenerate-perturbation scenarios only.
std::optional<PerturbationFamily> scenario_perturbation(const RunConfig& config);

// Inline system description; throws SchemaViolation on malformed input.
Json system_to_json(const GifsSystem& system);
GifsSystem system_from_json(const Json& j);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace gifs
