#include "gifs/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "gifs/dimension.hpp"
#include "gifs/error.hpp"
#include "gifs/scenarios.hpp"

namespace gifs {

namespace {

// Collects every violation instead of stopping at the first.
struct Checker {
  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  bool object(const Json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) error(path + "." + k, "unknown field");
    return true;
  }

  double number(const Json& obj, const std::string& key, const std::string& path, double def, double lo, double hi,
                bool open_lo = false, bool open_hi = false) {
    if (!obj.contains(key)) return def;
    const Json& v = obj.at(key);
    std::string p = path + "." + key;
    if (!v.is_number()) {
      error(p, "expected a number");
      return def;
    }
    double x = v.get<double>();
    if (!range_ok(x, lo, hi, open_lo, open_hi)) {
      error(p, "must lie in " + range_text(lo, hi, open_lo, open_hi));
      return def;
    }
    return x;
  }

  long long integer(const Json& obj, const std::string& key, const std::string& path, long long def, long long lo,
                    long long hi) {
    if (!obj.contains(key)) return def;
    const Json& v = obj.at(key);
    std::string p = path + "." + key;
    if (!v.is_number_integer()) {
      error(p, "expected an integer");
      return def;
    }
    long long x = v.get<long long>();
    if (x < lo || x > hi) {
      error(p, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return def;
    }
    return x;
  }

  bool boolean(const Json& obj, const std::string& key, const std::string& path, bool def) {
    if (!obj.contains(key)) return def;
    if (!obj.at(key).is_boolean()) {
      error(path + "." + key, "expected true or false");
      return def;
    }
    return obj.at(key).get<bool>();
  }

  std::string choice(const Json& obj, const std::string& key, const std::string& path, const std::string& def,
                     const std::vector<std::string>& options) {
    if (!obj.contains(key)) return def;
    const Json& v = obj.at(key);
    if (!v.is_string() || std::find(options.begin(), options.end(), v.get<std::string>()) == options.end()) {
      std::string all;
      for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
      error(path + "." + key, "expected one of " + all);
      return def;
    }
    return v.get<std::string>();
  }

  std::string string(const Json& obj, const std::string& key, const std::string& path, const std::string& def) {
    if (!obj.contains(key)) return def;
    if (!obj.at(key).is_string()) {
      error(path + "." + key, "expected a string");
      return def;
    }
    return obj.at(key).get<std::string>();
  }

  std::vector<double> numbers(const Json& obj, const std::string& key, const std::string& path,
                              std::vector<double> def, double lo, double hi, bool open_lo, bool open_hi) {
    if (!obj.contains(key)) return def;
    const Json& v = obj.at(key);
    std::string p = path + "." + key;
    if (!v.is_array() || v.empty()) {
      error(p, "expected a nonempty array of numbers");
      return def;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::string pi = p + "[" + std::to_string(i) + "]";
      if (!v[i].is_number()) {
        error(pi, "expected a number");
        ok = false;
        continue;
      }
      double x = v[i].get<double>();
      if (!range_ok(x, lo, hi, open_lo, open_hi)) {
        error(pi, "must lie in " + range_text(lo, hi, open_lo, open_hi));
        ok = false;
      }
      out.push_back(x);
    }
    return ok ? out : def;
  }

  std::vector<Index> horizons(const Json& obj, const std::string& key, const std::string& path,
                              std::vector<Index> def) {
    if (!obj.contains(key)) return def;
    const Json& v = obj.at(key);
    std::string p = path + "." + key;
    if (!v.is_array() || v.empty()) {
      error(p, "expected a nonempty array of positive integers");
      return def;
    }
    std::vector<Index> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<long long>() < 1) {
        error(p + "[" + std::to_string(i) + "]", "expected a positive integer");
        return def;
      }
      out.push_back(v[i].get<Index>());
      if (i > 0 && out[i] <= out[i - 1]) {
        error(p, "horizons must increase");
        return def;
      }
    }
    return out;
  }

  std::optional<Point> point(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty() || v.size() > 2 || !std::all_of(v.begin(), v.end(), [](const Json& x) {
          return x.is_number();
        })) {
      error(path, "expected [x] or [x, y]");
      return std::nullopt;
    }
    return Point(v[0].get<double>(), v.size() > 1 ? v[1].get<double>() : 0.0);
  }

  std::optional<Eigen::Matrix2d> matrix(const Json& v, const std::string& path) {
    bool ok = v.is_array() && v.size() == 2;
    for (std::size_t i = 0; ok && i < 2; ++i)
      ok = v[i].is_array() && v[i].size() == 2 && v[i][0].is_number() && v[i][1].is_number();
    if (!ok) {
      error(path, "expected [[a, b], [c, d]]");
      return std::nullopt;
    }
    Eigen::Matrix2d m;
    m << v[0][0].get<double>(), v[0][1].get<double>(), v[1][0].get<double>(), v[1][1].get<double>();
    return m;
  }

  std::optional<Complex> letter(const Json& v, const std::string& path) {
    if (v.is_number_integer()) return Complex(v.get<double>(), 0);
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer())
      return Complex(v[0].get<double>(), v[1].get<double>());
    error(path, "expected a letter m or [m, n] with integer entries");
    return std::nullopt;
  }

  std::vector<Complex> alphabet(const Json& obj, const std::string& key, const std::string& path,
                                std::vector<Complex> def) {
    if (!obj.contains(key)) return def;
    const Json& v = obj.at(key);
    std::string p = path + "." + key;
    if (!v.is_array() || v.empty()) {
      error(p, "expected a nonempty array of letters");
      return def;
    }
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (auto e = letter(v[i], p + "[" + std::to_string(i) + "]")) out.push_back(*e);
    return out.size() == v.size() ? out : def;
  }

  std::optional<Shape> shape(const Json& v, const std::string& path) {
    if (!v.is_object() || v.size() != 1) {
      error(path, "expected {\"ball\": ...}, {\"box\": ...} or {\"interval\": [a, b]}");
      return std::nullopt;
    }
    const auto& [kind, body] = *v.items().begin();
    std::string p = path + "." + kind;
    if (kind == "interval") {
      if (!body.is_array() || body.size() != 2 || !body[0].is_number() || !body[1].is_number() ||
          !(body[0].get<double>() < body[1].get<double>())) {
        error(p, "expected [a, b] with a < b");
        return std::nullopt;
      }
      return Shape(interval(body[0].get<double>(), body[1].get<double>()));
    }
    if (kind == "ball") {
      if (!object(body, p, {"center", "radius"}) || !body.contains("center") || !body.contains("radius")) {
        error(p, "needs center and radius");
        return std::nullopt;
      }
      auto c = point(body.at("center"), p + ".center");
      double r = number(body, "radius", p, -1, 0, INFINITY, true, false);
      if (!c || r <= 0) return std::nullopt;
      return Shape(Ball{*c, r});
    }
    if (kind == "box") {
      if (!object(body, p, {"lo", "hi"}) || !body.contains("lo") || !body.contains("hi")) {
        error(p, "needs lo and hi");
        return std::nullopt;
      }
      auto lo = point(body.at("lo"), p + ".lo");
      auto hi = point(body.at("hi"), p + ".hi");
      if (!lo || !hi) return std::nullopt;
      if (!(lo->x() < hi->x()) || lo->y() > hi->y()) {
        error(p, "lo must lie below hi");
        return std::nullopt;
      }
      return Shape(Box{*lo, *hi});
    }
    error(path, "unknown shape '" + kind + "'");
    return std::nullopt;
  }

  static bool range_ok(double x, double lo, double hi, bool open_lo, bool open_hi) {
    if (!std::isfinite(x)) return false;
    if (open_lo ? !(x > lo) : !(x >= lo)) return false;
    if (open_hi ? !(x < hi) : !(x <= hi)) return false;
    return true;
  }

  static std::string range_text(double lo, double hi, bool open_lo, bool open_hi) {
    std::ostringstream os;
    os << (open_lo ? "(" : "[") << lo << ", " << hi << (open_hi ? ")" : "]");
    return os.str();
  }
};

Json point_json(const Point& p) { return Json::array({p.x(), p.y()}); }
Json matrix_json(const Eigen::Matrix2d& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}
Json letter_json(Complex e) { return Json::array({static_cast<long long>(e.real()), static_cast<long long>(e.imag())}); }
Json alphabet_json(const std::vector<Complex>& a) {
  Json out = Json::array();
  for (auto e : a) out.push_back(letter_json(e));
  return out;
}

Json shape_json(const Shape& s) {
  if (const auto* b = std::get_if<Ball>(&s)) return {{"ball", {{"center", point_json(b->center)}, {"radius", b->radius}}}};
  const auto& x = std::get<Box>(s);
  return {{"box", {{"lo", point_json(x.lo)}, {"hi", point_json(x.hi)}}}};
}

Json map_json(const MapSpec& m) {
  Json j = std::visit(
      [](const auto& k) -> Json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Similarity>)
          return {{"type", "similarity"}, {"ratio", k.ratio}, {"isometry", matrix_json(k.isometry)},
                  {"translation", point_json(k.translation)}};
        else if constexpr (std::is_same_v<T, ConformalAffine>)
          return {{"type", "conformal_affine"}, {"matrix", matrix_json(k.M)}, {"translation", point_json(k.b)}};
        else if constexpr (std::is_same_v<T, MoebiusCF>)
          return {{"type", "cf"}, {"e", letter_json(k.e)}};
        else if constexpr (std::is_same_v<T, PerturbedMoebiusCF>)
          return {{"type", "cf_eps"}, {"e", letter_json(k.e)}, {"eps", k.eps}};
        else if constexpr (std::is_same_v<T, ConstantMap>)
          return {{"type", "constant"}, {"target", point_json(k.target)}};
        else
          return {{"type", "perturbed_affine"}, {"base", matrix_json(k.base)}, {"direction", matrix_json(k.direction)},
                  {"kappa", k.kappa}, {"eps", k.eps}, {"b", point_json(k.b)}, {"b_slope", point_json(k.b_slope)}};
      },
      m.kind);
  if (m.domain) j["domain"] = shape_json(*m.domain);
  j["beta"] = m.beta;
  return j;
}

std::optional<MapSpec> parse_map(Checker& c, const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    c.error(path, "a map needs a string field 'type'");
    return std::nullopt;
  }
  const std::string type = j.at("type").get<std::string>();
  const std::size_t before = c.errors.size();
  MapSpec m;
  auto pt = [&](const char* key, Point def) {
    if (!j.contains(key)) return def;
    return c.point(j.at(key), path + "." + key).value_or(def);
  };
  auto mat = [&](const char* key, Eigen::Matrix2d def) {
    if (!j.contains(key)) return def;
    return c.matrix(j.at(key), path + "." + key).value_or(def);
  };
  auto letter = [&]() -> Complex {
    if (!j.contains("e")) {
      c.error(path + ".e", "required");
      return {1, 0};
    }
    return c.letter(j.at("e"), path + ".e").value_or(Complex(1, 0));
  };
  if (type == "similarity") {
    c.object(j, path, {"type", "ratio", "isometry", "rotation", "translation", "domain", "beta"});
    Similarity s;
    s.ratio = c.number(j, "ratio", path, 0.5, 0, 1, true, true);
    if (!j.contains("ratio")) c.error(path + ".ratio", "required");
    if (j.contains("isometry") && j.contains("rotation")) c.error(path, "give isometry or rotation, not both");
    if (j.contains("rotation")) {
      double a = c.number(j, "rotation", path, 0, -360, 360) * M_PI / 180;
      s.isometry << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    }
    s.isometry = mat("isometry", s.isometry);
    if ((s.isometry.transpose() * s.isometry - Eigen::Matrix2d::Identity()).norm() > 1e-9)
      c.error(path + ".isometry", "not orthogonal");
    s.translation = pt("translation", Point::Zero());
    m.kind = s;
  } else if (type == "conformal_affine") {
    c.object(j, path, {"type", "matrix", "translation", "domain", "beta"});
    ConformalAffine a;
    if (!j.contains("matrix")) c.error(path + ".matrix", "required");
    a.M = mat("matrix", a.M);
    a.b = pt("translation", Point::Zero());
    m.kind = a;
  } else if (type == "cf") {
    c.object(j, path, {"type", "e", "domain", "beta"});
    m.kind = MoebiusCF{letter()};
  } else if (type == "cf_eps") {
    c.object(j, path, {"type", "e", "eps", "domain", "beta"});
    Complex e = letter();
    m.kind = PerturbedMoebiusCF{e, c.number(j, "eps", path, 0.1, 0, 1, false, true)};
  } else if (type == "constant") {
    c.object(j, path, {"type", "target", "domain", "beta"});
    if (!j.contains("target")) c.error(path + ".target", "required");
    m.kind = ConstantMap{pt("target", Point::Zero())};
  } else if (type == "perturbed_affine") {
    c.object(j, path, {"type", "base", "direction", "kappa", "eps", "b", "b_slope", "domain", "beta"});
    PerturbedAffine a;
    a.base = mat("base", a.base);
    a.direction = mat("direction", a.direction);
    a.kappa = c.number(j, "kappa", path, 0, -1e6, 1e6);
    a.eps = c.number(j, "eps", path, 0, 0, 1, false, true);
    a.b = pt("b", Point::Zero());
    a.b_slope = pt("b_slope", Point::Zero());
    m.kind = a;
  } else {
    c.error(path + ".type", "unknown map type '" + type + "'");
    return std::nullopt;
  }
  if (j.contains("domain")) m.domain = c.shape(j.at("domain"), path + ".domain");
  m.beta = c.number(j, "beta", path, 1.0, 0, 1, true, false);
  if (c.errors.size() != before) return std::nullopt;
  return m;
}

std::optional<GifsSystem> parse_system(Checker& c, const Json& j, const std::string& path) {
  if (!c.object(j, path, {"name", "dim", "r", "depth2", "beta", "c_MT", "vertices", "edges"})) return std::nullopt;
  const std::size_t before = c.errors.size();
  GifsSystem sys;
  sys.name = c.string(j, "name", path, "inline");
  sys.dim = static_cast<int>(c.integer(j, "dim", path, 2, 1, 2));
  sys.depth2 = c.boolean(j, "depth2", path, false);
  sys.beta = c.number(j, "beta", path, 1.0, 0, 1, true, false);
  sys.c_MT = c.number(j, "c_MT", path, 1.0, 0, 1e9, true, false);

  if (!j.contains("vertices") || !j.at("vertices").is_array() || j.at("vertices").empty()) {
    c.error(path + ".vertices", "expected a nonempty array");
    return std::nullopt;
  }
  const Json& vs = j.at("vertices");
  for (std::size_t v = 0; v < vs.size(); ++v) {
    std::string p = path + ".vertices[" + std::to_string(v) + "]";
    if (!c.object(vs[v], p, {"label", "J", "O"})) continue;
    if (!vs[v].contains("J") || !vs[v].contains("O")) {
      c.error(p, "needs J and O");
      continue;
    }
    auto J = c.shape(vs[v].at("J"), p + ".J");
    auto O = c.shape(vs[v].at("O"), p + ".O");
    if (J && O) {
      if (!contains(*O, *J, sys.dim)) c.error(p, "J must lie inside O");
      sys.add_vertex(*J, *O, c.string(vs[v], "label", p, ""));
    }
  }
  if (c.errors.size() != before) return std::nullopt;

  if (!j.contains("edges") || !j.at("edges").is_array()) {
    c.error(path + ".edges", "expected an array");
    return std::nullopt;
  }
  const Json& es = j.at("edges");
  const long long n = static_cast<long long>(sys.graph.vertex_count());
  for (std::size_t e = 0; e < es.size(); ++e) {
    std::string p = path + ".edges[" + std::to_string(e) + "]";
    if (!c.object(es[e], p, {"from", "to", "label", "map"})) continue;
    if (!es[e].contains("from") || !es[e].contains("to") || !es[e].contains("map")) {
      c.error(p, "needs from, to and map");
      continue;
    }
    long long from = c.integer(es[e], "from", p, -1, 0, n - 1);
    long long to = c.integer(es[e], "to", p, -1, 0, n - 1);
    auto m = parse_map(c, es[e].at("map"), p + ".map");
    if (from < 0 || to < 0 || !m) continue;
    if (!m->domain) m->domain = sys.O(static_cast<Index>(to));
    sys.add_edge(static_cast<Index>(from), static_cast<Index>(to), *m, c.string(es[e], "label", p, ""));
  }
  if (c.errors.size() != before) return std::nullopt;

  if (j.contains("r")) {
    sys.r = c.number(j, "r", path, 0.5, 0, 1, true, true);
  } else {
    double r = 0;
    for (Index e = 0; e < sys.graph.edge_count(); ++e)
      r = std::max(r, derivative_range_over_set(sys.maps[e], sys.J(sys.graph.edge(e).terminal)).upper);
    if (r >= 1)
      c.error(path + ".r", "the maps do not contract on the seeds; give r (with depth2 for two-step contraction)");
    sys.r = std::max(r, 1e-12);
  }
  if (c.errors.size() != before) return std::nullopt;
  return sys;
}

Json system_json_impl(const GifsSystem& sys) {
  Json vs = Json::array(), es = Json::array();
  for (Index v = 0; v < sys.graph.vertex_count(); ++v)
    vs.push_back({{"label", sys.vertex_label(v)}, {"J", shape_json(sys.J(v))}, {"O", shape_json(sys.O(v))}});
  for (Index e = 0; e < sys.graph.edge_count(); ++e)
    es.push_back({{"from", sys.graph.edge(e).initial},
                  {"to", sys.graph.edge(e).terminal},
                  {"label", sys.edge_label(e)},
                  {"map", map_json(sys.maps[e])}});
  return {{"name", sys.name}, {"dim", sys.dim},   {"r", sys.r},       {"depth2", sys.depth2},
          {"beta", sys.beta}, {"c_MT", sys.c_MT}, {"vertices", vs}, {"edges", es}};
}

struct ScenarioInfo {
  std::string name;
  std::set<std::string> params;
};

const std::vector<ScenarioInfo>& scenarios() {
  static const std::vector<ScenarioInfo> all{
      {"ladder_6_1", {"horizons"}},
      {"ladder_6_1_subsystem", {}},
      {"affine_demo_6_2", {"eps"}},
      {"cf_system", {"alphabet"}},
      {"perturbed_cf", {"sub_alphabet", "full_alphabet", "eps"}},
      {"cf_box", {"boxes"}},
      {"perturbed_cf_box", {"sub_alphabet", "eps", "boxes"}},
      {"moran", {"ratios", "groups"}},
      {"inline", {}},
  };
  return all;
}

std::vector<Complex> letters(std::initializer_list<int> ms) {
  std::vector<Complex> out;
  for (int m : ms) out.emplace_back(m, 0);
  return out;
}

Json params_json(const RunConfig& c) {
  const auto& p = c.params;
  const std::string& s = c.scenario;
  Json j = Json::object();
  if (s == "ladder_6_1") j["horizons"] = p.horizons;
  if (s == "affine_demo_6_2" || s == "perturbed_cf" || s == "perturbed_cf_box") j["eps"] = p.eps;
  if (s == "cf_system") j["alphabet"] = alphabet_json(p.alphabet);
  if (s == "perturbed_cf" || s == "perturbed_cf_box") j["sub_alphabet"] = alphabet_json(p.sub_alphabet);
  if (s == "perturbed_cf") j["full_alphabet"] = alphabet_json(p.full_alphabet);
  if (s == "cf_box" || s == "perturbed_cf_box") j["boxes"] = p.horizons;
  if (s == "moran") j["groups"] = p.groups;
  return j;
}

Json normalize(const RunConfig& c) {
  Json j;
  j["scenario"] = c.scenario;
  j["params"] = params_json(c);
  if (c.inline_system) j["system"] = system_json_impl(*c.inline_system);
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  const auto& pr = c.pressure;
  j["pressure"] = {{"s", pr.s},         {"method", pr.method},         {"selector", pr.selector},
                   {"n", pr.n},         {"depth", pr.depth},           {"variation_tol", pr.variation_tol},
                   {"nnz_budget", pr.nnz_budget}};
  const auto& d = c.dimension;
  j["dimension"] = {{"tolerance", d.tolerance},
                    {"s_max", d.s_max},
                    {"horizons", d.horizons},
                    {"max_evaluations", d.max_evaluations},
                    {"time_budget", d.time_budget},
                    {"initial_variation", d.initial_variation},
                    {"variation_floor", d.variation_floor},
                    {"nnz_budget", d.nnz_budget},
                    {"check_separation", d.check_separation}};
  j["sweep"] = {{"epsilons", c.sweep_epsilons}};
  j["probe"] = {{"s", c.probe.s}, {"horizons", c.probe.horizons}, {"epsilons", c.probe.epsilons}};
  const auto& r = c.render;
  j["render"] = {{"depth", r.depth},   {"width", r.width}, {"height", r.height},
                 {"binary", r.binary}, {"cap", r.cap},     {"horizon", r.horizon}};
  if (r.bounds) j["render"]["bounds"] = {r.bounds->xmin, r.bounds->xmax, r.bounds->ymin, r.bounds->ymax};
  j["checks"] = {{"words", c.checks.words}, {"word_length", c.checks.word_length}, {"pairs", c.checks.pairs}};
  j["output"] = {{"records", c.output.records}, {"csv", c.output.csv}, {"pgm", c.output.pgm},
                 {"config", c.output.config}};
  return j;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : scenarios()) out.push_back(s.name);
    return out;
  }();
  return names;
}

RunConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::SchemaViolation, std::string("$: not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_config(const Json& doc) {
  Checker c;
  RunConfig cfg;
  if (!c.object(doc, "$", {"scenario", "params", "system", "seed", "threads", "pressure", "dimension", "sweep",
                           "probe", "render", "checks", "output"}))
    fail(ErrorCode::SchemaViolation, c.errors.front());

  const auto& names = scenario_names();
  if (!doc.contains("scenario")) {
    c.error("$.scenario", "required");
  } else {
    cfg.scenario = c.choice(doc, "scenario", "$", "", names);
  }

  // scenario parameters
  const Json empty = Json::object();
  const Json& pj = doc.contains("params") ? doc.at("params") : empty;
  auto info = std::find_if(scenarios().begin(), scenarios().end(),
                           [&](const ScenarioInfo& s) { return s.name == cfg.scenario; });
  if (info != scenarios().end() && c.object(pj, "$.params", info->params)) {
    auto& p = cfg.params;
    const std::string& s = cfg.scenario;
    p.eps = c.number(pj, "eps", "$.params", 0.1, 0, 1, true, true);
    if (s == "ladder_6_1") p.horizons = c.horizons(pj, "horizons", "$.params", {2, 4, 8, 16, 32});
    if (s == "cf_box") p.horizons = c.horizons(pj, "boxes", "$.params", {2, 4, 8});
    if (s == "perturbed_cf_box") p.horizons = c.horizons(pj, "boxes", "$.params", {5, 10, 20});
    if (s == "cf_system") p.alphabet = c.alphabet(pj, "alphabet", "$.params", letters({1, 2}));
    if (s == "perturbed_cf" || s == "perturbed_cf_box")
      p.sub_alphabet = c.alphabet(pj, "sub_alphabet", "$.params", letters({1, 2}));
    if (s == "perturbed_cf") {
      std::vector<Complex> full = letters({1, 2, 3});
      full.emplace_back(1, 1);
      p.full_alphabet = c.alphabet(pj, "full_alphabet", "$.params", full);
    }
    if (s == "moran") {
      if (pj.contains("ratios") && pj.contains("groups")) c.error("$.params", "give ratios or groups, not both");
      if (pj.contains("groups")) {
        const Json& g = pj.at("groups");
        if (!g.is_array() || g.empty()) c.error("$.params.groups", "expected a nonempty array of ratio lists");
        for (std::size_t i = 0; g.is_array() && i < g.size(); ++i) {
          Json wrap = {{"ratios", g[i]}};
          p.groups.push_back(c.numbers(wrap, "ratios", "$.params.groups[" + std::to_string(i) + "]", {}, 0, 1,
                                       true, true));
        }
      } else {
        p.groups = {c.numbers(pj, "ratios", "$.params", {1.0 / 3, 1.0 / 3}, 0, 1, true, true)};
      }
      for (std::size_t i = 0; i < p.groups.size(); ++i) {
        double total = 0;
        for (double r : p.groups[i]) total += r;
        if (total > 1 + 1e-12) c.error("$.params", "moran ratios of group " + std::to_string(i) + " sum above 1");
      }
    }
  }
  if (cfg.scenario == "inline") {
    if (!doc.contains("system"))
      c.error("$.system", "required for the inline scenario");
    else
      cfg.inline_system = parse_system(c, doc.at("system"), "$.system");
  } else if (doc.contains("system")) {
    c.error("$.system", "only used by the inline scenario");
  }

  cfg.seed = static_cast<std::uint64_t>(c.integer(doc, "seed", "$", 1, 0, std::numeric_limits<long long>::max()));
  cfg.threads = static_cast<int>(c.integer(doc, "threads", "$", 1, 1, 1024));

  auto section = [&](const char* key, const std::set<std::string>& allowed) -> const Json& {
    if (!doc.contains(key)) return empty;
    const Json& s = doc.at(key);
    return c.object(s, std::string("$.") + key, allowed) ? s : empty;
  };

  {
    const Json& s = section("pressure", {"s", "method", "selector", "n", "depth", "variation_tol", "nnz_budget"});
    auto& p = cfg.pressure;
    p.s = c.number(s, "s", "$.pressure", 1.0, 0, 100);
    p.method = c.choice(s, "method", "$.pressure", "spectral", {"spectral", "word_sum"});
    p.selector = c.choice(s, "selector", "$.pressure", "norm", {"norm", "conorm"});
    p.n = static_cast<int>(c.integer(s, "n", "$.pressure", 8, 1, 64));
    p.depth = static_cast<int>(c.integer(s, "depth", "$.pressure", 1, 1, 40));
    p.variation_tol = c.number(s, "variation_tol", "$.pressure", 0.0, 0, 10);
    p.nnz_budget = c.number(s, "nnz_budget", "$.pressure", 4e6, 1, 1e9);
  }
  {
    const Json& s = section("dimension", {"tolerance", "s_max", "horizons", "max_evaluations", "time_budget",
                                          "initial_variation", "variation_floor", "nnz_budget", "check_separation"});
    auto& d = cfg.dimension;
    d.tolerance = c.number(s, "tolerance", "$.dimension", 0.0, 0, 1);
    d.s_max = c.number(s, "s_max", "$.dimension", 0.0, 0, 100);
    d.horizons = c.horizons(s, "horizons", "$.dimension", {});
    d.max_evaluations = static_cast<int>(c.integer(s, "max_evaluations", "$.dimension", 400, 1, 100000));
    d.time_budget = c.number(s, "time_budget", "$.dimension", 120.0, 0, 1e6, true, false);
    d.initial_variation = c.number(s, "initial_variation", "$.dimension", 0.05, 0, 10, true, false);
    d.variation_floor = c.number(s, "variation_floor", "$.dimension", 0.05 / 32, 0, 10, true, false);
    d.nnz_budget = c.number(s, "nnz_budget", "$.dimension", 4e6, 1, 1e9);
    d.check_separation = c.boolean(s, "check_separation", "$.dimension", true);
  }
  {
    const Json& s = section("sweep", {"epsilons"});
    cfg.sweep_epsilons = c.numbers(s, "epsilons", "$.sweep", geometric_schedule(2, 7), 0, 1, true, true);
  }
  {
    const Json& s = section("probe", {"s", "horizons", "epsilons"});
    cfg.probe.s = c.number(s, "s", "$.probe", 0.99, 0, 100, true, false);
    cfg.probe.horizons = c.horizons(s, "horizons", "$.probe", cfg.probe.horizons);
    cfg.probe.epsilons = c.numbers(s, "epsilons", "$.probe", cfg.probe.epsilons, 0, 1, true, true);
  }
  {
    const Json& s = section("render", {"depth", "width", "height", "bounds", "binary", "cap", "horizon"});
    auto& r = cfg.render;
    r.depth = static_cast<int>(c.integer(s, "depth", "$.render", 8, 1, 64));
    r.width = static_cast<int>(c.integer(s, "width", "$.render", 512, 1, 16384));
    r.height = static_cast<int>(c.integer(s, "height", "$.render", 512, 1, 16384));
    r.binary = c.boolean(s, "binary", "$.render", false);
    r.cap = static_cast<Index>(c.integer(s, "cap", "$.render", 200000, 1, 100000000));
    r.horizon = static_cast<Index>(c.integer(s, "horizon", "$.render", 0, 0, 1000000));
    if (s.contains("bounds")) {
      const Json& b = s.at("bounds");
      if (!b.is_array() || b.size() != 4 || !std::all_of(b.begin(), b.end(), [](const Json& x) { return x.is_number(); }))
        c.error("$.render.bounds", "expected [xmin, xmax, ymin, ymax]");
      else if (!(b[0].get<double>() < b[1].get<double>()) || b[2].get<double>() > b[3].get<double>())
        c.error("$.render.bounds", "degenerate bounds");
      else
        r.bounds = RasterBounds{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    }
  }
  {
    const Json& s = section("checks", {"words", "word_length", "pairs"});
    cfg.checks.words = static_cast<int>(c.integer(s, "words", "$.checks", 200, 1, 1000000));
    cfg.checks.word_length = static_cast<int>(c.integer(s, "word_length", "$.checks", 20, 2, 200));
    cfg.checks.pairs = static_cast<int>(c.integer(s, "pairs", "$.checks", 1000, 1, 10000000));
  }
  {
    const Json& s = section("output", {"records", "csv", "pgm", "config"});
    cfg.output.records = c.string(s, "records", "$.output", "");
    cfg.output.csv = c.string(s, "csv", "$.output", "");
    cfg.output.pgm = c.string(s, "pgm", "$.output", "render.pgm");
    cfg.output.config = c.string(s, "config", "$.output", "");
  }

  if (!c.errors.empty()) {
    std::string msg = std::to_string(c.errors.size()) + " schema violation(s):";
    for (const auto& e : c.errors) msg += "\n  " + e;
    fail(ErrorCode::SchemaViolation, msg);
  }
  cfg.normalized = normalize(cfg);
  cfg.digest = hex64(fnv1a(cfg.normalized.dump()));
  return cfg;
}

SystemFamily scenario_family(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const std::string& s = cfg.scenario;
  if (s == "ladder_6_1") return ladder_family(p.horizons);
  if (s == "ladder_6_1_subsystem") return finite_family(ladder_subsystem());
  if (s == "affine_demo_6_2") return finite_family(affine_demo(p.eps));
  if (s == "cf_system") return finite_family(cf_system(p.alphabet));
  if (s == "perturbed_cf") return finite_family(perturbed_cf(p.sub_alphabet, p.full_alphabet, p.eps));
  if (s == "cf_box") return cf_box_family(p.horizons);
  if (s == "perturbed_cf_box") return perturbed_cf_box_family(p.sub_alphabet, p.eps, p.horizons);
  if (s == "moran") return finite_family(disjoint_moran(p.groups));
  if (s == "inline" && cfg.inline_system) return family_of(*cfg.inline_system);
  fail(ErrorCode::InvalidArgument, "unknown scenario '" + s + "'");
}

std::optional<PerturbationFamily> scenario_perturbation(const RunConfig& cfg) {
  const auto& p = cfg.params;
  if (cfg.scenario == "affine_demo_6_2") return affine_demo_family();
  if (cfg.scenario == "perturbed_cf") return cf_family(p.sub_alphabet, p.full_alphabet);
  if (cfg.scenario == "perturbed_cf_box") return cf_box_perturbation(p.sub_alphabet, p.horizons);
  return std::nullopt;
}

Json system_to_json(const GifsSystem& system) { return system_json_impl(system); }

GifsSystem system_from_json(const Json& j) {
  Checker c;
  auto sys = parse_system(c, j, "$");
  if (!c.errors.empty() || !sys) {
    std::string msg = std::to_string(c.errors.size()) + " schema violation(s):";
    for (const auto& e : c.errors) msg += "\n  " + e;
    fail(ErrorCode::SchemaViolation, msg);
  }
  return *sys;
}

}  // namespace gifs
