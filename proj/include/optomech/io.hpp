#pragma once

#include <Eigen/Core>
#include <json.hpp>
#include <string>

#include "optomech/entanglement.hpp"
#include "optomech/lyapunov.hpp"
#include "optomech/model.hpp"
#include "optomech/steady_state.hpp"
#include "optomech/sweep.hpp"

namespace optomech {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCodeVersion = "0.1.0";

/// Shortest decimal string that reads back to the same double.
std::string format_shortest(double value);
/// Seventeen significant digits.
std::string format_17(double value);

Json to_json(const SystemParams& params);
/// Overlays the keys of `j` onto `base`. Unknown keys are rejected.
SystemParams params_from_json(const Json& j, SystemParams base = {});

Json to_json(const SteadyState& ss);
Json to_json(const EntanglementReport& report);
Json to_json(const ChainSpec& chain);

/// Row-major CSV, one matrix row per line, 17 significant digits.
std::string matrix_csv(const Eigen::MatrixXd& M);
/// Covariance matrix CSV with a header row naming each quadrature.
std::string covariance_csv(const CovarianceMatrix& cm);
/// Pairwise E_N matrix CSV, labels in the header row and first column.
std::string report_csv(const EntanglementReport& report);
/// Undirected DOT graph, one edge per entangled pair weighted by E_N.
std::string report_dot(const EntanglementReport& report, const Json& snapshot);

std::string sweep_csv(const SweepResult& result);
Json sweep_json(const SweepResult& result);
/// Metadata block shared by the sweep exports: preset, parameters, unit, version.
Json sweep_metadata(const SweepSpec& spec);

/// Prefixes every line of the compact dump of `snapshot` with `marker`.
std::string comment_block(const Json& snapshot, std::string_view marker);

/// Throws IoError on failure.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace optomech
