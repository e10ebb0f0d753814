#pragma once

#include <optional>
#include <string>

#include "optomech/io.hpp"
#include "optomech/network.hpp"
#include "optomech/sweep.hpp"

namespace optomech {

struct OutputSpec {
  std::string path;    // empty: standard output
  std::string format;  // empty: command default
};

/// Resolved run description. At most one of `chain` and `sweep` is set; neither
/// means a single evaluation.
struct RunConfig {
  SystemParams params;
  Scheme scheme = Scheme::Single;
  BeamSplitterSetting bs;
  IoMode io_mode = IoMode::Paper;
  double edge_threshold = kDefaultEdgeThreshold;
  std::optional<ChainSpec> chain;
  std::optional<SweepSpec> sweep;  // base, scheme, bs, io_mode mirror the fields above
  OutputSpec output;
};

/// JSON layout:
///   { "params": {<SystemParams keys>}, "scheme": "single", "io_mode": "paper",
///     "edge_threshold": 1e-5, "beam_splitter": {"theta": .., "phi": ..},
///     "chain": {"n_cavities": 3, "scheme": "two-mode", "line": 0, "theta": ..,
///               "phi": .., "per_bs": [[theta, phi], ...]},
///     "sweep": {"name": .., "axes": [{"axis": "detuning_ratio", "min": .., "max": ..,
///               "n_points": .., "scale": "linear"}], "observables": [..]},
///     "output": {"path": .., "format": ..} }
/// Every level rejects unknown keys. Fields absent from `j` keep their value in `base`.
RunConfig parse_config(const Json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Copies the top-level evaluation settings into the sweep spec, if any.
void sync_sweep(RunConfig& config);

/// Snapshot embedded in every output file.
Json snapshot(const RunConfig& config);

}  // namespace optomech
