#include "optomech/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

#include "optomech/config.hpp"

namespace optomech::cli {

namespace {

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string out_path;
  std::string format;
  std::string dump_steady_state;
  std::string dot_path;
  std::string scheme;
  std::string chain_scheme;
  std::string io_mode;
  std::string input_noise;
  std::string frequency_unit;
  std::optional<double> length, mass, wavelength, power, temperature, kappa, gamma_m;
  std::optional<double> detuning, detuning_abs, g0, threshold, theta, phi;
  std::optional<int> cavities, line, points;
  int jobs = 1;
};

int default_jobs() {
  if (const char* env = std::getenv("OPTOMECH_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string joined_presets() {
  std::string s;
  for (const std::string& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset_name, "figure preset: " + joined_presets());
  cmd->add_option("--out", o.out_path, "output path (default: standard output)");
  cmd->add_option("--format", o.format, "output format");
  cmd->add_option("--io-mode", o.io_mode, "paper | intracavity");
  cmd->add_option("--input-noise", o.input_noise, "independent | shared_port");
  cmd->add_option("--frequency-unit", o.frequency_unit, "rad_per_s | hz");
  cmd->add_option("--length", o.length, "cavity length, m");
  cmd->add_option("--mass", o.mass, "effective mass, kg");
  cmd->add_option("--wavelength", o.wavelength, "wavelength of the lower mode, m");
  cmd->add_option("--power", o.power, "input power, W");
  cmd->add_option("--temperature", o.temperature, "bath temperature, K");
  cmd->add_option("--kappa", o.kappa, "cavity decay rate of every optical mode");
  cmd->add_option("--gamma-m", o.gamma_m, "mechanical decay rate");
  cmd->add_option("--detuning", o.detuning, "upper-mode detuning in units of omega_m");
  cmd->add_option("--detuning-abs", o.detuning_abs, "upper-mode detuning as a rate");
  cmd->add_option("--g0", o.g0, "override the single-photon coupling (rate)");
  cmd->add_option("--threshold", o.threshold, "edge threshold on E_N");
}

void add_beam_splitter(CLI::App* cmd, Options& o) {
  cmd->add_option("--theta", o.theta, "beam-splitter angle, rad");
  cmd->add_option("--phi", o.phi, "beam-splitter phase, rad");
}

RunConfig resolve(const Options& o, std::string_view command) {
  RunConfig c;
  if (!o.preset_name.empty()) {
    const Preset p = preset(o.preset_name);
    if (const auto* s = std::get_if<SweepSpec>(&p)) {
      c.params = s->base;
      c.scheme = s->scheme;
      c.bs = s->bs;
      c.io_mode = s->io_mode;
      if (command == "sweep") c.sweep = *s;
    } else {
      const auto& chain = std::get<ChainPreset>(p);
      if (command == "sweep")
        throw ConfigError("preset '" + o.preset_name + "' is a chain; use the chain command");
      c.params = chain.params;
      c.io_mode = chain.io_mode;
      if (command == "chain") c.chain = chain.chain;
    }
  }
  if (!o.config_path.empty()) c = load_config(o.config_path, c);

  SystemParams& p = c.params;
  if (!o.frequency_unit.empty()) p.frequency_unit = parse_frequency_unit(o.frequency_unit);
  if (!o.input_noise.empty()) p.input_noise = parse_input_noise(o.input_noise);
  if (o.length) p.cavity_length = *o.length;
  if (o.mass) p.effective_mass = *o.mass;
  if (o.wavelength) p.wavelength = *o.wavelength;
  if (o.power) p.input_power = *o.power;
  if (o.temperature) p.temperature = *o.temperature;
  if (o.kappa) std::fill(p.kappa.begin(), p.kappa.end(), *o.kappa);
  if (o.gamma_m) std::fill(p.gamma_m.begin(), p.gamma_m.end(), *o.gamma_m);
  if (o.detuning && o.detuning_abs) throw ConfigError("give --detuning or --detuning-abs, not both");
  if (o.detuning) p.detuning_2 = Detuning::in_omega_m(*o.detuning);
  if (o.detuning_abs) p.detuning_2 = Detuning::absolute(*o.detuning_abs);
  if (o.g0) p.g0_override = *o.g0;
  validate(p);
  if (!o.io_mode.empty()) c.io_mode = parse_io_mode(o.io_mode);
  if (!o.scheme.empty()) c.scheme = parse_scheme(o.scheme);
  if (o.threshold) {
    if (!(*o.threshold > 0)) throw ConfigError("--threshold must be > 0");
    c.edge_threshold = *o.threshold;
  }
  if (o.theta) c.bs.theta = *o.theta;
  if (o.phi) c.bs.phi = *o.phi;
  if (!o.out_path.empty()) c.output.path = o.out_path;
  if (!o.format.empty()) c.output.format = o.format;

  if (command == "chain") {
    ChainSpec chain = c.chain.value_or(ChainSpec{});
    const int n = o.cavities.value_or(chain.n_cavities);
    const ChainScheme scheme =
        o.chain_scheme.empty() ? chain.scheme : parse_chain_scheme(o.chain_scheme);
    const int line = o.line.value_or(chain.line);
    const bool uniform_override = o.cavities || !o.chain_scheme.empty() || o.line || o.theta || o.phi;
    if (!c.chain || uniform_override) {
      const double theta = o.theta.value_or(chain.bs_list.empty() ? c.bs.theta : chain.bs_list[0].theta);
      const double phi = o.phi.value_or(chain.bs_list.empty() ? c.bs.phi : chain.bs_list[0].phi);
      chain = make_chain(n, scheme, theta, phi, line);
    }
    c.chain = chain;
    c.sweep.reset();
  } else if (command == "sweep") {
    if (!c.sweep) throw ConfigError("sweep needs --preset or a config with a 'sweep' section");
    c.chain.reset();
    if (o.points)
      for (AxisSpec& a : c.sweep->axes) a.n_points = *o.points;
  } else {
    if (c.chain || c.sweep)
      throw ConfigError("the config selects a " + std::string(c.chain ? "chain" : "sweep") +
                        "; use the matching command");
  }
  sync_sweep(c);
  return c;
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.output.path.empty())
    out << content;
  else
    write_file(c.output.path, content);
}

std::string format_or(const RunConfig& c, std::string fallback,
                      std::initializer_list<std::string_view> allowed) {
  const std::string f = c.output.format.empty() ? std::move(fallback) : c.output.format;
  for (std::string_view a : allowed)
    if (f == a) return f;
  std::string list;
  for (std::string_view a : allowed) list += (list.empty() ? "" : " | ") + std::string(a);
  throw ConfigError("unsupported format '" + f + "' (" + list + ")");
}

std::string render_report(const RunConfig& c, const SystemEvaluation& ev) {
  const Json snap = snapshot(c);
  const std::string format = format_or(c, "json", {"json", "csv", "dot"});
  if (format == "dot") return report_dot(*ev.report, snap);
  if (format == "csv") return comment_block(snap, "#") + report_csv(*ev.report);
  Json j;
  j["snapshot"] = snap;
  j["stability"] = {{"stable", ev.stability.stable},
                    {"spectral_abscissa", ev.stability.spectral_abscissa}};
  j["steady_residual"] = ev.steady_residual;
  j["lyapunov_residual"] = ev.lyapunov_residual;
  j["report"] = to_json(*ev.report);
  return j.dump(2) + "\n";
}

Json steady_json(const RunConfig& c, const SystemEvaluation& ev) {
  Json j;
  j["snapshot"] = snapshot(c);
  Json states = Json::array();
  for (const SteadyState& ss : ev.steady) states.push_back(to_json(ss));
  j["steady_states"] = states;
  j["stability"] = {{"stable", ev.stability.stable},
                    {"spectral_abscissa", ev.stability.spectral_abscissa}};
  return j;
}

void require_stable(const SystemEvaluation& ev) {
  if (!ev.stability.stable)
    throw UnstableSystem("the linearized dynamics is unstable (spectral abscissa " +
                             format_shortest(ev.stability.spectral_abscissa) + ")",
                         ev.stability.spectral_abscissa);
}

int cmd_entangle(const Options& o, std::ostream& out) {
  const RunConfig c = resolve(o, "entangle");
  const SystemEvaluation ev = evaluate(c.params, c.scheme, c.bs, c.io_mode, c.edge_threshold);
  if (!o.dump_steady_state.empty()) write_file(o.dump_steady_state, steady_json(c, ev).dump(2) + "\n");
  require_stable(ev);
  emit(c, render_report(c, ev), out);
  return kExitOk;
}

int cmd_chain(const Options& o, std::ostream& out) {
  const RunConfig c = resolve(o, "chain");
  const SystemEvaluation ev = build_chain(c.params, *c.chain, c.io_mode, c.edge_threshold);
  if (!o.dump_steady_state.empty()) write_file(o.dump_steady_state, steady_json(c, ev).dump(2) + "\n");
  emit(c, render_report(c, ev), out);
  if (!o.dot_path.empty()) write_file(o.dot_path, report_dot(*ev.report, snapshot(c)));
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const RunConfig c = resolve(o, "sweep");
  const std::string format = format_or(c, "csv", {"csv", "json"});
  const SweepResult result = run_sweep(*c.sweep, o.jobs);
  emit(c, format == "csv" ? sweep_csv(result) : sweep_json(result).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_steady_state(const Options& o, std::ostream& out) {
  const RunConfig c = resolve(o, "steady-state");
  format_or(c, "json", {"json"});
  const SystemEvaluation ev = evaluate(c.params, c.scheme, c.bs, c.io_mode, c.edge_threshold);
  emit(c, steady_json(c, ev).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_dump_matrices(const Options& o) {
  const RunConfig c = resolve(o, "dump-matrices");
  if (c.output.path.empty()) throw ConfigError("dump-matrices needs --out DIRECTORY");
  std::error_code ec;
  std::filesystem::create_directories(c.output.path, ec);
  if (ec) throw IoError("cannot create '" + c.output.path + "': " + ec.message());
  const SystemEvaluation ev = evaluate(c.params, c.scheme, c.bs, c.io_mode, c.edge_threshold);
  const std::string header = comment_block(snapshot(c), "#");
  const std::filesystem::path dir(c.output.path);
  for (std::size_t k = 0; k < ev.models.size(); ++k) {
    const std::string stem = "cavity" + std::to_string(k + 1);
    write_file((dir / (stem + "_A.csv")).string(), header + matrix_csv(ev.models[k].A));
    write_file((dir / (stem + "_D.csv")).string(), header + matrix_csv(ev.models[k].D));
  }
  require_stable(ev);
  write_file((dir / "covariance.csv").string(), header + covariance_csv(*ev.covariance));
  return kExitOk;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::NoConvergence: return kExitNoConvergence;
    case ErrorKind::Unstable: return kExitUnstable;
    case ErrorKind::Numerical: return kExitNoConvergence;
    case ErrorKind::Io: return kExitIo;
  }
  return kExitConfig;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state Gaussian entanglement of double-longitudinal-mode optomechanical cavities"};
  app.require_subcommand(1);
  Options o;
  o.jobs = default_jobs();

  auto* entangle = app.add_subcommand("entangle", "pairwise E_N report of one system");
  add_common(entangle, o);
  add_beam_splitter(entangle, o);
  entangle->add_option("--scheme", o.scheme, "single | two-cavity-bs | dual-polarization");
  entangle->add_option("--dump-steady-state", o.dump_steady_state, "write the working point as JSON");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV or JSON");
  add_common(sweep, o);
  sweep->add_option("--jobs", o.jobs, "worker threads (default: $OPTOMECH_JOBS or core count)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--points", o.points, "override the point count of every axis")
      ->check(CLI::Range(2, 100000));

  auto* chain = app.add_subcommand("chain", "N-cavity beam-splitter chain");
  add_common(chain, o);
  add_beam_splitter(chain, o);
  chain->add_option("--cavities", o.cavities, "number of cavities")->check(CLI::Range(1, 8));
  chain->add_option("--scheme", o.chain_scheme, "two-mode | four-mode");
  chain->add_option("--line", o.line, "optical mode index routed through the chain");
  chain->add_option("--dot", o.dot_path, "also write the structure graph as DOT");
  chain->add_option("--dump-steady-state", o.dump_steady_state, "write the working points as JSON");

  auto* steady = app.add_subcommand("steady-state", "classical working point as JSON");
  add_common(steady, o);
  add_beam_splitter(steady, o);
  steady->add_option("--scheme", o.scheme, "single | two-cavity-bs | dual-polarization");

  auto* dump = app.add_subcommand("dump-matrices", "drift, diffusion and covariance matrices as CSV");
  add_common(dump, o);
  add_beam_splitter(dump, o);
  dump->add_option("--scheme", o.scheme, "single | two-cavity-bs | dual-polarization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (entangle->parsed()) return cmd_entangle(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (chain->parsed()) return cmd_chain(o, out);
    if (steady->parsed()) return cmd_steady_state(o, out);
    if (dump->parsed()) return cmd_dump_matrices(o);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace optomech::cli
