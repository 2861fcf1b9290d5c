#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "gifs/cli.hpp"
#include "gifs/error.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string scenario;
  std::vector<std::string> overrides;
  std::optional<long long> seed;
  std::optional<int> threads;
  std::string records;
};

int execute(const std::string& command, const Options& o) {
  using gifs::Json;
  Json doc = Json::object();
  try {
    if (!o.config_path.empty()) {
      std::ifstream f(o.config_path);
      if (!f) gifs::fail(gifs::ErrorCode::InvalidArgument, "cannot read config '" + o.config_path + "'");
      std::stringstream buf;
      buf << f.rdbuf();
      try {
        doc = Json::parse(buf.str());
      } catch (const Json::parse_error& e) {
        gifs::fail(gifs::ErrorCode::SchemaViolation, std::string("$: not valid JSON: ") + e.what());
      }
    }
    if (!o.scenario.empty()) doc["scenario"] = o.scenario;
    if (o.seed) doc["seed"] = *o.seed;
    if (o.threads) doc["threads"] = *o.threads;
    if (!o.records.empty()) {
      if (!doc["output"].is_object()) doc["output"] = Json::object();
      doc["output"]["records"] = o.records;
    }
    for (const auto& s : o.overrides) gifs::apply_override(doc, s);
    gifs::RunConfig cfg = gifs::parse_config(doc);

    if (cfg.output.records.empty()) return gifs::run(command, cfg, std::cout);
    std::ofstream out(cfg.output.records, std::ios::binary);
    if (!out) gifs::fail(gifs::ErrorCode::InvalidArgument, "cannot open '" + cfg.output.records + "'");
    return gifs::run(command, cfg, out);
  } catch (const gifs::Error& e) {
    std::cout << gifs::error_record(command, std::string(gifs::to_string(e.code())), e.what()).dump() << "\n";
    return gifs::ExitFault;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified Hausdorff dimension estimates for graph-directed iterated function systems"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;
  const std::map<std::string, std::string> about{
      {"analyze", "check the system conditions, separation and sampled coding bounds"},
      {"pressure", "pressure brackets along the truncation horizons"},
      {"dimension", "certified dimension bracket from Bowen's equation"},
      {"components", "dimension of each strongly connected class"},
      {"sweep", "dimension along a schedule of perturbation parameters"},
      {"render", "rasterize the limit set to a PGM image"},
      {"probe-divergence", "summability of the degenerating edges"},
      {"reduce", "rewrite a multigraph system on its line graph"}};
  for (const auto& name : gifs::command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("-c,--config", o.config_path, "JSON config file");
    sub->add_option("--scenario", o.scenario, "built-in scenario (overrides the config)");
    sub->add_option("--set", o.overrides, "override a config field: path.to.key=value");
    sub->add_option("--seed", o.seed, "seed for sampled checks");
    sub->add_option("--threads", o.threads, "worker cap (results do not depend on it)");
    sub->add_option("-o,--records", o.records, "write JSON-lines records here instead of stdout");
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);
  return execute(chosen, o);
}
