#include "optomech/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const Json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError("'" + key + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (const Json& x : j) out.push_back(number(x, key));
  return out;
}

std::string text(const Json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::array<std::string, 2> quadrature_names(const ModeLabel& mode) {
  if (mode.mechanical) return {"q_" + mode.name, "p_" + mode.name};
  return {"X_" + mode.name, "Y_" + mode.name};
}

}  // namespace

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return std::string(buf.data(), end);
}

std::string format_17(double value) {
  std::array<char, 64> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

Json to_json(const SystemParams& p) {
  Json j;
  j["cavity_length"] = p.cavity_length;
  j["effective_mass"] = p.effective_mass;
  j["wavelength"] = p.wavelength;
  j["input_power"] = p.input_power;
  j["temperature"] = p.temperature;
  j["kappa"] = p.kappa;
  j["gamma_m"] = p.gamma_m;
  if (p.detuning_2.kind == Detuning::Kind::Absolute)
    j["detuning_2"] = p.detuning_2.value;
  else
    j["detuning_2_ratio"] = p.detuning_2.value;
  j["frequency_unit"] = to_string(p.frequency_unit);
  j["input_noise"] = to_string(p.input_noise);
  if (p.g0_override) j["g0_override"] = *p.g0_override;
  return j;
}

SystemParams params_from_json(const Json& j, SystemParams p) {
  if (!j.is_object()) throw ConfigError("parameters must be a key-value object");
  if (j.contains("detuning_2") && j.contains("detuning_2_ratio"))
    throw ConfigError("give either 'detuning_2' or 'detuning_2_ratio', not both");
  for (const auto& [key, value] : j.items()) {
    if (key == "cavity_length") p.cavity_length = number(value, key);
    else if (key == "effective_mass") p.effective_mass = number(value, key);
    else if (key == "wavelength") p.wavelength = number(value, key);
    else if (key == "input_power") p.input_power = number(value, key);
    else if (key == "temperature") p.temperature = number(value, key);
    else if (key == "kappa") p.kappa = numbers(value, key);
    else if (key == "gamma_m") p.gamma_m = numbers(value, key);
    else if (key == "detuning_2") p.detuning_2 = Detuning::absolute(number(value, key));
    else if (key == "detuning_2_ratio") p.detuning_2 = Detuning::in_omega_m(number(value, key));
    else if (key == "frequency_unit") p.frequency_unit = parse_frequency_unit(text(value, key));
    else if (key == "input_noise") p.input_noise = parse_input_noise(text(value, key));
    else if (key == "g0_override")
      p.g0_override = value.is_null() ? std::nullopt : std::optional<double>(number(value, key));
    else throw ConfigError("unknown parameter key '" + key + "'");
  }
  validate(p);
  return p;
}

Json to_json(const SteadyState& ss) {
  Json j;
  j["q_s"] = ss.q_s;
  Json alpha = Json::array();
  for (const Complex& a : ss.alpha) alpha.push_back({{"re", a.real()}, {"im", a.imag()}});
  j["alpha"] = alpha;
  j["residual"] = ss.residual;
  return j;
}

Json to_json(const EntanglementReport& report) {
  Json j;
  Json labels = Json::array();
  for (const ModeLabel& l : report.labels)
    labels.push_back({{"name", l.name}, {"mechanical", l.mechanical}, {"cavity", l.cavity}});
  j["labels"] = labels;
  j["edge_threshold"] = report.edge_threshold;
  Json en = Json::array();
  for (Eigen::Index i = 0; i < report.log_negativity.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < report.log_negativity.cols(); ++k)
      row.push_back(report.log_negativity(i, k));
    en.push_back(row);
  }
  j["log_negativity"] = en;
  Json edges = Json::array();
  for (const Edge& e : report.edges)
    edges.push_back({{"a", report.labels[static_cast<std::size_t>(e.a)].name},
                     {"b", report.labels[static_cast<std::size_t>(e.b)].name},
                     {"class", [&] {
                        switch (classify_edge(report, e)) {
                          case EdgeClass::IntraCavity: return "intra_cavity";
                          case EdgeClass::Adjacent: return "adjacent";
                          case EdgeClass::NextAdjacent: return "next_adjacent";
                          case EdgeClass::Distant: return "distant";
                        }
                        return "?";
                      }()},
                     {"log_negativity", report.log_negativity(e.a, e.b)}});
  j["edges"] = edges;
  j["shape"] = to_string(report.shape);
  return j;
}

Json to_json(const ChainSpec& chain) {
  Json j;
  j["n_cavities"] = chain.n_cavities;
  j["scheme"] = to_string(chain.scheme);
  j["line"] = chain.line;
  Json bs = Json::array();
  for (const BeamSplitterSpec& b : chain.bs_list)
    bs.push_back({{"theta", b.theta}, {"phi", b.phi}, {"mode_a", b.mode_a}, {"mode_b", b.mode_b}});
  j["beam_splitters"] = bs;
  return j;
}

std::string matrix_csv(const Eigen::MatrixXd& M) {
  std::string out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index k = 0; k < M.cols(); ++k) {
      if (k) out += ',';
      out += format_17(M(i, k));
    }
    out += '\n';
  }
  return out;
}

std::string covariance_csv(const CovarianceMatrix& cm) {
  std::string header;
  for (const ModeLabel& m : cm.modes)
    for (const std::string& q : quadrature_names(m)) header += (header.empty() ? "" : ",") + q;
  return header + '\n' + matrix_csv(cm.V);
}

std::string report_csv(const EntanglementReport& report) {
  std::string out = "mode";
  for (const ModeLabel& l : report.labels) out += "," + csv_field(l.name);
  out += '\n';
  for (Eigen::Index i = 0; i < report.log_negativity.rows(); ++i) {
    out += csv_field(report.labels[static_cast<std::size_t>(i)].name);
    for (Eigen::Index k = 0; k < report.log_negativity.cols(); ++k)
      out += "," + format_shortest(report.log_negativity(i, k));
    out += '\n';
  }
  return out;
}

std::string comment_block(const Json& snapshot, std::string_view marker) {
  return std::string(marker) + " " + snapshot.dump() + "\n";
}

std::string report_dot(const EntanglementReport& report, const Json& snapshot) {
  std::string out = comment_block(snapshot, "//");
  out += "graph entanglement {\n";
  out += "  label=\"" + std::string(to_string(report.shape)) + "\";\n";
  for (const ModeLabel& l : report.labels)
    out += "  \"" + l.name + "\" [shape=" + (l.mechanical ? "box" : "circle") +
           ", group=" + std::to_string(l.cavity) + "];\n";
  for (const Edge& e : report.edges) {
    const std::string w = format_shortest(report.log_negativity(e.a, e.b));
    out += "  \"" + report.labels[static_cast<std::size_t>(e.a)].name + "\" -- \"" +
           report.labels[static_cast<std::size_t>(e.b)].name + "\" [weight=" + w + ", label=\"" +
           w + "\"];\n";
  }
  return out + "}\n";
}

Json sweep_metadata(const SweepSpec& spec) {
  Json j;
  j["preset"] = spec.name;
  j["scheme"] = to_string(spec.scheme);
  j["parameters"] = to_json(spec.base);
  j["frequency_unit"] = to_string(spec.base.frequency_unit);
  j["io_mode"] = to_string(spec.io_mode);
  j["beam_splitter"] = {{"theta", spec.bs.theta}, {"phi", spec.bs.phi}};
  j["edge_threshold"] = spec.edge_threshold;
  Json axes = Json::array();
  for (const AxisSpec& a : spec.axes)
    axes.push_back({{"axis", to_string(a.axis)},
                    {"min", a.min},
                    {"max", a.max},
                    {"n_points", a.n_points},
                    {"scale", to_string(a.scale)}});
  j["axes"] = axes;
  j["observables"] = spec.observables;
  j["code_version"] = kCodeVersion;
  return j;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = comment_block(sweep_metadata(result.spec), "#");
  std::vector<std::string> header = result.axis_columns;
  header.insert(header.end(), result.value_columns.begin(), result.value_columns.end());
  if (result.has_shape) header.emplace_back("shape");
  for (const char* c : {"status", "spectral_abscissa", "steady_residual", "lyapunov_residual", "error"})
    header.emplace_back(c);
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += '\n';
  for (const SweepRow& row : result.rows) {
    std::string line;
    for (double v : row.axis_values) line += format_shortest(v) + ",";
    for (const auto& v : row.values) line += (v ? format_shortest(*v) : std::string()) + ",";
    if (result.has_shape) line += row.shape + ",";
    line += std::string(to_string(row.status)) + ",";
    line += format_shortest(row.spectral_abscissa) + ",";
    line += format_shortest(row.steady_residual) + ",";
    line += format_shortest(row.lyapunov_residual) + ",";
    line += csv_field(row.error);
    out += line + '\n';
  }
  return out;
}

Json sweep_json(const SweepResult& result) {
  Json j;
  j["metadata"] = sweep_metadata(result.spec);
  j["axis_columns"] = result.axis_columns;
  j["value_columns"] = result.value_columns;
  Json rows = Json::array();
  for (const SweepRow& row : result.rows) {
    Json r;
    r["axes"] = row.axis_values;
    Json values = Json::object();
    for (std::size_t c = 0; c < row.values.size(); ++c)
      values[result.value_columns[c]] = row.values[c] ? Json(*row.values[c]) : Json(nullptr);
    r["values"] = values;
    if (result.has_shape) r["shape"] = row.shape;
    r["status"] = to_string(row.status);
    r["unstable"] = row.status == PointStatus::Unstable;
    r["spectral_abscissa"] = row.spectral_abscissa;
    r["steady_residual"] = row.steady_residual;
    r["lyapunov_residual"] = row.lyapunov_residual;
    if (!row.error.empty()) r["error"] = row.error;
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace optomech
