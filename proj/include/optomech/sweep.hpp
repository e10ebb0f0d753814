#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "optomech/network.hpp"

namespace optomech {

enum class Axis { DetuningRatio, Kappa, GammaM, Temperature, Theta, Phi };
enum class AxisScale { Linear, Log };

std::string_view to_string(Axis axis);
std::string_view to_string(AxisScale scale);
Axis parse_axis(std::string_view text);
AxisScale parse_axis_scale(std::string_view text);

struct AxisSpec {
  Axis axis = Axis::DetuningRatio;
  double min = 0.0;
  double max = 1.0;
  int n_points = 2;
  AxisScale scale = AxisScale::Linear;

  /// Grid values; linear grids are min + k (max - min) / (n - 1).
  std::vector<double> values() const;
};

/// Observables: "E_ab" for a pair of report labels (written "E_a_b" when a label
/// is longer than one character), "all_pairs", "shape_label", "stability".
struct SweepSpec {
  std::string name = "custom";
  SystemParams base;
  Scheme scheme = Scheme::Single;
  BeamSplitterSetting bs;
  IoMode io_mode = IoMode::Paper;
  double edge_threshold = kDefaultEdgeThreshold;
  std::vector<AxisSpec> axes;
  std::vector<std::string> observables;
};

/// Throws ConfigError unless 1-2 axes with n >= 2, min < max, log min > 0, and
/// known observables.
void validate(const SweepSpec& spec);

/// Report labels of a scheme's evaluation, in order.
std::vector<std::string> report_labels(Scheme scheme);

enum class PointStatus { Ok, Unstable, Error };
std::string_view to_string(PointStatus status);

struct SweepRow {
  std::vector<double> axis_values;
  std::vector<std::optional<double>> values;  // empty when unstable or failed
  std::string shape;                          // empty unless requested and evaluated
  PointStatus status = PointStatus::Ok;
  double spectral_abscissa = 0.0;
  double steady_residual = 0.0;
  double lyapunov_residual = 0.0;
  std::string error;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<std::string> axis_columns;
  std::vector<std::string> value_columns;
  bool has_shape = false;
  std::vector<SweepRow> rows;  // row-major over the axes, last axis fastest
};

/// Evaluates every grid point through the full pipeline on up to `jobs`
/// threads. Point failures are recorded in their row. Output order does not
/// depend on `jobs`.
SweepResult run_sweep(const SweepSpec& spec, int jobs = 1);

/// Applies one axis value to a parameter set / beam-splitter setting.
void apply_axis(Axis axis, double value, SystemParams& params, BeamSplitterSetting& bs);

struct ChainPreset {
  std::string name;
  SystemParams params;
  ChainSpec chain;
  IoMode io_mode = IoMode::Paper;
};

using Preset = std::variant<SweepSpec, ChainPreset>;

/// Figure presets: fig2, fig3a..fig3f, fig4a, fig4b, fig5a, fig5b, fig7a..fig7c,
/// fig9, fig11, fig13. Throws UnknownPreset.
Preset preset(std::string_view name);
const std::vector<std::string>& preset_names();

/// Named parameter sets and sweep grids.
SystemParams fig2_params();
SystemParams fig7_params();

}  // namespace optomech
