#include "optomech/config.hpp"

#include <initializer_list>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

void allow_only(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be a key-value object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

ChainSpec parse_chain(const Json& j, const std::optional<ChainSpec>& base) {
  allow_only(j, "chain", {"n_cavities", "scheme", "line", "theta", "phi", "per_bs"});
  int n = base ? base->n_cavities : 1;
  ChainScheme scheme = base ? base->scheme : ChainScheme::TwoMode;
  int line = base ? base->line : 0;
  double theta = base && !base->bs_list.empty() ? base->bs_list.front().theta : constants::pi / 4;
  double phi = base && !base->bs_list.empty() ? base->bs_list.front().phi : constants::pi / 2;
  std::vector<std::pair<double, double>> per_bs;
  if (j.contains("n_cavities")) n = integer(j["n_cavities"], "n_cavities");
  if (j.contains("scheme")) scheme = parse_chain_scheme(text(j["scheme"], "scheme"));
  if (j.contains("line")) line = integer(j["line"], "line");
  if (j.contains("theta")) theta = number(j["theta"], "theta");
  if (j.contains("phi")) phi = number(j["phi"], "phi");
  if (j.contains("per_bs")) {
    if (!j["per_bs"].is_array()) throw ConfigError("'per_bs' must be an array of [theta, phi]");
    for (const Json& pair : j["per_bs"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw ConfigError("'per_bs' entries must be [theta, phi]");
      per_bs.emplace_back(number(pair[0], "per_bs"), number(pair[1], "per_bs"));
    }
  }
  return make_chain(n, scheme, theta, phi, line, per_bs);
}

SweepSpec parse_sweep(const Json& j, SweepSpec spec) {
  allow_only(j, "sweep", {"name", "axes", "observables"});
  if (j.contains("name")) spec.name = text(j["name"], "name");
  if (j.contains("axes")) {
    if (!j["axes"].is_array()) throw ConfigError("'axes' must be an array");
    spec.axes.clear();
    for (const Json& a : j["axes"]) {
      allow_only(a, "sweep axis", {"axis", "min", "max", "n_points", "scale"});
      if (!a.contains("axis") || !a.contains("min") || !a.contains("max") || !a.contains("n_points"))
        throw ConfigError("sweep axis needs 'axis', 'min', 'max' and 'n_points'");
      AxisSpec axis;
      axis.axis = parse_axis(text(a["axis"], "axis"));
      axis.min = number(a["min"], "min");
      axis.max = number(a["max"], "max");
      axis.n_points = integer(a["n_points"], "n_points");
      if (a.contains("scale")) axis.scale = parse_axis_scale(text(a["scale"], "scale"));
      spec.axes.push_back(axis);
    }
  }
  if (j.contains("observables")) {
    if (!j["observables"].is_array()) throw ConfigError("'observables' must be an array");
    spec.observables.clear();
    for (const Json& o : j["observables"]) spec.observables.push_back(text(o, "observables"));
  }
  return spec;
}

}  // namespace

RunConfig parse_config(const Json& j, RunConfig c) {
  allow_only(j, "config", {"params", "scheme", "io_mode", "edge_threshold", "beam_splitter", "chain",
                           "sweep", "output"});
  if (j.contains("params")) c.params = params_from_json(j["params"], c.params);
  if (j.contains("scheme")) c.scheme = parse_scheme(text(j["scheme"], "scheme"));
  if (j.contains("io_mode")) c.io_mode = parse_io_mode(text(j["io_mode"], "io_mode"));
  if (j.contains("edge_threshold")) c.edge_threshold = number(j["edge_threshold"], "edge_threshold");
  if (j.contains("beam_splitter")) {
    const Json& bs = j["beam_splitter"];
    allow_only(bs, "beam_splitter", {"theta", "phi"});
    if (bs.contains("theta")) c.bs.theta = number(bs["theta"], "theta");
    if (bs.contains("phi")) c.bs.phi = number(bs["phi"], "phi");
  }
  if (j.contains("chain")) c.chain = parse_chain(j["chain"], c.chain);
  if (j.contains("sweep")) c.sweep = parse_sweep(j["sweep"], c.sweep.value_or(SweepSpec{}));
  if (j.contains("output")) {
    const Json& out = j["output"];
    allow_only(out, "output", {"path", "format"});
    if (out.contains("path")) c.output.path = text(out["path"], "path");
    if (out.contains("format")) c.output.format = text(out["format"], "format");
  }
  if (c.chain && c.sweep) throw ConfigError("a config selects either a chain or a sweep, not both");
  if (!(c.edge_threshold > 0)) throw ConfigError("edge_threshold must be > 0");
  sync_sweep(c);
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  const std::string content = read_file(path);
  Json j;
  try {
    j = Json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return parse_config(j, std::move(base));
}

void sync_sweep(RunConfig& c) {
  if (!c.sweep) return;
  c.sweep->base = c.params;
  c.sweep->scheme = c.scheme;
  c.sweep->bs = c.bs;
  c.sweep->io_mode = c.io_mode;
  c.sweep->edge_threshold = c.edge_threshold;
}

Json snapshot(const RunConfig& c) {
  Json j;
  j["parameters"] = to_json(c.params);
  j["scheme"] = to_string(c.scheme);
  j["io_mode"] = to_string(c.io_mode);
  j["edge_threshold"] = c.edge_threshold;
  if (c.chain)
    j["chain"] = to_json(*c.chain);
  else
    j["beam_splitter"] = {{"theta", c.bs.theta}, {"phi", c.bs.phi}};
  j["code_version"] = kCodeVersion;
  return j;
}

}  // namespace optomech
