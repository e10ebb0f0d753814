#include "optomech/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr std::pair<Axis, std::string_view> kAxisNames[] = {
    {Axis::DetuningRatio, "detuning_ratio"}, {Axis::Kappa, "kappa"},
    {Axis::GammaM, "gamma_m"},               {Axis::Temperature, "temperature"},
    {Axis::Theta, "theta"},                  {Axis::Phi, "phi"},
};

std::string pair_column(const std::string& a, const std::string& b) {
  if (a.size() == 1 && b.size() == 1) return "E_" + a + b;
  return "E_" + a + "_" + b;
}

// Resolved observable columns: label pairs plus the shape flag.
struct Columns {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  bool shape = false;
};

Columns resolve_columns(const SweepSpec& spec) {
  const std::vector<std::string> labels = report_labels(spec.scheme);
  auto known = [&](const std::string& l) {
    return std::find(labels.begin(), labels.end(), l) != labels.end();
  };
  Columns out;
  auto add_pair = [&](std::string a, std::string b) {
    if (a == b || !known(a) || !known(b))
      throw ConfigError("observable pair (" + a + ", " + b + ") does not name two modes of the " +
                        std::string(to_string(spec.scheme)) + " report");
    const std::string name = pair_column(a, b);
    if (std::find(out.names.begin(), out.names.end(), name) != out.names.end()) return;
    out.names.push_back(name);
    out.pairs.emplace_back(std::move(a), std::move(b));
  };
  for (const std::string& obs : spec.observables) {
    if (obs == "all_pairs") {
      for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j) add_pair(labels[i], labels[j]);
    } else if (obs == "shape_label") {
      out.shape = true;
    } else if (obs == "stability") {
      // status columns are always written
    } else if (obs.rfind("E_", 0) == 0) {
      const std::string body = obs.substr(2);
      const auto split = body.find('_');
      if (split != std::string::npos)
        add_pair(body.substr(0, split), body.substr(split + 1));
      else if (body.size() == 2)
        add_pair(body.substr(0, 1), body.substr(1, 1));
      else
        throw ConfigError("cannot parse observable '" + obs + "'");
    } else {
      throw ConfigError("unknown observable '" + obs + "'");
    }
  }
  return out;
}

std::vector<std::vector<double>> grid(const std::vector<AxisSpec>& axes) {
  std::vector<std::vector<double>> points{{}};
  for (const AxisSpec& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : points)
      for (double v : axis.values()) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    points = std::move(next);
  }
  return points;
}

SweepRow evaluate_point(const SweepSpec& spec, const Columns& columns,
                        const std::vector<double>& point) {
  SweepRow row;
  row.axis_values = point;
  row.values.assign(columns.pairs.size(), std::nullopt);
  SystemParams params = spec.base;
  BeamSplitterSetting bs = spec.bs;
  for (std::size_t k = 0; k < point.size(); ++k) apply_axis(spec.axes[k].axis, point[k], params, bs);
  try {
    const SystemEvaluation ev = evaluate(params, spec.scheme, bs, spec.io_mode, spec.edge_threshold);
    row.spectral_abscissa = ev.stability.spectral_abscissa;
    row.steady_residual = ev.steady_residual;
    if (!ev.stability.stable) {
      row.status = PointStatus::Unstable;
      return row;
    }
    row.lyapunov_residual = ev.lyapunov_residual;
    for (std::size_t c = 0; c < columns.pairs.size(); ++c)
      row.values[c] = ev.report->between(columns.pairs[c].first, columns.pairs[c].second);
    if (columns.shape) row.shape = std::string(to_string(ev.report->shape));
  } catch (const Error& e) {
    row.status = PointStatus::Error;
    row.error = e.what();
    row.values.assign(columns.pairs.size(), std::nullopt);
    row.shape.clear();
  }
  return row;
}

}  // namespace

std::string_view to_string(Axis axis) {
  for (auto [a, name] : kAxisNames)
    if (a == axis) return name;
  return "?";
}

std::string_view to_string(AxisScale scale) { return scale == AxisScale::Log ? "log" : "linear"; }

Axis parse_axis(std::string_view text) {
  for (auto [a, name] : kAxisNames)
    if (name == text) return a;
  throw ConfigError("unknown sweep axis '" + std::string(text) + "'");
}

AxisScale parse_axis_scale(std::string_view text) {
  if (text == "linear") return AxisScale::Linear;
  if (text == "log") return AxisScale::Log;
  throw ConfigError("unknown axis scale '" + std::string(text) + "' (linear | log)");
}

std::string_view to_string(PointStatus status) {
  switch (status) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Unstable: return "unstable";
    case PointStatus::Error: return "error";
  }
  return "?";
}

std::vector<double> AxisSpec::values() const {
  std::vector<double> out(static_cast<std::size_t>(n_points));
  const double last = static_cast<double>(n_points - 1);
  for (int k = 0; k < n_points; ++k) {
    const double t = k / last;
    if (scale == AxisScale::Log)
      out[static_cast<std::size_t>(k)] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    else
      out[static_cast<std::size_t>(k)] = min + k * ((max - min) / last);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

void validate(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) throw ConfigError("a sweep needs one or two axes");
  for (const AxisSpec& a : spec.axes) {
    const std::string name(to_string(a.axis));
    if (a.n_points < 2) throw ConfigError("axis " + name + ": n_points must be >= 2");
    if (!(a.min < a.max)) throw ConfigError("axis " + name + ": min must be below max");
    if (a.scale == AxisScale::Log && !(a.min > 0))
      throw ConfigError("axis " + name + ": log scale needs min > 0");
  }
  if (spec.axes.size() == 2 && spec.axes[0].axis == spec.axes[1].axis)
    throw ConfigError("the two sweep axes must differ");
  if (spec.scheme != Scheme::TwoCavityBS)
    for (const AxisSpec& a : spec.axes)
      if (a.axis == Axis::Theta || a.axis == Axis::Phi)
        throw ConfigError("beam-splitter axes need the two-cavity-bs scheme");
  if (spec.observables.empty()) throw ConfigError("a sweep needs at least one observable");
  resolve_columns(spec);
  validate(spec.base);
}

std::vector<std::string> report_labels(Scheme scheme) {
  switch (scheme) {
    case Scheme::Single: return {"0", "1", "2"};
    case Scheme::DualPolarization: return {"0", "1", "2", "3", "4"};
    case Scheme::TwoCavityBS: return {"1", "2", "3", "4"};
  }
  return {};
}

void apply_axis(Axis axis, double value, SystemParams& params, BeamSplitterSetting& bs) {
  switch (axis) {
    case Axis::DetuningRatio: params.detuning_2 = Detuning::in_omega_m(value); break;
    case Axis::Kappa: std::fill(params.kappa.begin(), params.kappa.end(), value); break;
    case Axis::GammaM: std::fill(params.gamma_m.begin(), params.gamma_m.end(), value); break;
    case Axis::Temperature: params.temperature = value; break;
    case Axis::Theta: bs.theta = value; break;
    case Axis::Phi: bs.phi = value; break;
  }
}

SweepResult run_sweep(const SweepSpec& spec, int jobs) {
  validate(spec);
  const Columns columns = resolve_columns(spec);
  const std::vector<std::vector<double>> points = grid(spec.axes);

  SweepResult result;
  result.spec = spec;
  for (const AxisSpec& a : spec.axes) result.axis_columns.emplace_back(to_string(a.axis));
  result.value_columns = columns.names;
  result.has_shape = columns.shape;
  result.rows.resize(points.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++)
      result.rows[i] = evaluate_point(spec, columns, points[i]);
  };
  const auto workers = static_cast<std::size_t>(std::clamp<long>(jobs, 1, static_cast<long>(points.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return result;
}

SystemParams fig2_params() { return SystemParams{}; }

SystemParams fig7_params() {
  SystemParams p;
  p.kappa = {1e6, 1e6};
  p.gamma_m = {1e4};
  return p;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "fig2",  "fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f", "fig4a", "fig4b",
      "fig5a", "fig5b", "fig7a", "fig7b", "fig7c", "fig9",  "fig11", "fig13"};
  return names;
}

Preset preset(std::string_view name) {
  const AxisSpec detuning{Axis::DetuningRatio, 0.9, 1.5, 201, AxisScale::Linear};
  const AxisSpec detuning_2d{Axis::DetuningRatio, 0.9, 1.5, 101, AxisScale::Linear};
  const AxisSpec kappa_2d{Axis::Kappa, 1e5, 1e8, 101, AxisScale::Log};
  const AxisSpec gamma_2d{Axis::GammaM, 1e3, 1e6, 101, AxisScale::Log};
  const std::vector<std::string> optomechanical{"E_01", "E_02", "stability"};
  const std::vector<std::string> optical{"E_12", "stability"};

  SweepSpec spec;
  spec.name = std::string(name);
  if (name == "fig2") {
    spec.axes = {detuning};
    spec.observables = {"E_01", "E_02", "E_12", "stability"};
    return spec;
  }
  if (name.size() == 5 && name.substr(0, 4) == "fig3" && name[4] >= 'a' && name[4] <= 'f') {
    spec.base.gamma_m = {1e4};
    const int panel = (name[4] - 'a') % 3;
    if (panel == 0) spec.axes = {kappa_2d, gamma_2d};
    if (panel == 1) spec.axes = {detuning_2d, kappa_2d};
    if (panel == 2) spec.axes = {detuning_2d, gamma_2d};
    spec.observables = name[4] <= 'c' ? optomechanical : optical;
    return spec;
  }
  if (name == "fig4a" || name == "fig4b") {
    spec.base.kappa = {1e7, 1e7};
    spec.base.detuning_2 = Detuning::in_omega_m(name == "fig4a" ? 1.0 : 1.005);
    spec.axes = {{Axis::GammaM, 1e3, 1e7, 201, AxisScale::Log}};
    spec.observables = optomechanical;
    return spec;
  }
  if (name == "fig5a" || name == "fig5b") {
    spec.axes = {{Axis::Temperature, 1e-2, 1e3, 201, AxisScale::Log}};
    spec.observables = name == "fig5a" ? optomechanical : optical;
    return spec;
  }
  if (name == "fig7a" || name == "fig7b" || name == "fig7c") {
    spec.base = fig7_params();
    spec.scheme = Scheme::TwoCavityBS;
    spec.bs.theta = constants::pi / 8.0 * (name == "fig7a" ? 1 : name == "fig7b" ? 2 : 3);
    spec.axes = {{Axis::Phi, 0.0, constants::pi, 201, AxisScale::Linear}};
    spec.observables = {"all_pairs", "shape_label", "stability"};
    return spec;
  }
  if (name == "fig11") {
    spec.scheme = Scheme::DualPolarization;
    spec.axes = {detuning};
    spec.observables = {"E_12", "E_34", "E_14", "E_23", "E_13", "E_24", "stability"};
    return spec;
  }
  if (name == "fig9")
    return ChainPreset{"fig9", fig7_params(),
                       make_chain(4, ChainScheme::TwoMode, constants::pi / 4, constants::pi / 2),
                       IoMode::Paper};
  if (name == "fig13")
    return ChainPreset{"fig13", fig2_params(),
                       make_chain(3, ChainScheme::FourMode, constants::pi / 4, constants::pi / 2),
                       IoMode::Paper};
  throw UnknownPreset(std::string(name));
}

}  // namespace optomech
