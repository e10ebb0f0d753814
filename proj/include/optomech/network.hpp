#pragma once

#include <Eigen/Core>
#include <optional>
#include <string_view>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/entanglement.hpp"
#include "optomech/lyapunov.hpp"
#include "optomech/model.hpp"

namespace optomech {

/// Two-mode mixer on global modes a and b. On quadratures it acts as
/// [cos(theta) R(phi), -sin(theta) R(phi); sin(theta) I, cos(theta) I],
/// the real form of the unitary [cos e^{i phi}, sin e^{i(phi + pi)}; sin, cos].
struct BeamSplitterSpec {
  double theta = 0.0;
  double phi = 0.0;
  int mode_a = 0;
  int mode_b = 1;
};

enum class ChainScheme { TwoMode, FourMode };

/// Whether the beam splitters act on the output-mode model (-kappa + sqrt(2 kappa)
/// diagonals) or directly on the intracavity covariance matrices.
enum class IoMode { Paper, Intracavity };

std::string_view to_string(ChainScheme scheme);
std::string_view to_string(IoMode mode);
ChainScheme parse_chain_scheme(std::string_view text);
IoMode parse_io_mode(std::string_view text);

struct ChainSpec {
  int n_cavities = 1;
  ChainScheme scheme = ChainScheme::TwoMode;
  int line = 0;  // optical mode of each cavity routed through the cascade
  std::vector<BeamSplitterSpec> bs_list;
};

/// Modes per cavity block in the composed covariance matrix (mirror + optics).
int modes_per_cavity(ChainScheme scheme);

/// N - 1 beam splitters, BS k mixing the carried line (left in cavity k-1's
/// slot by the previous stage) with the fresh line of cavity k. All share
/// (theta, phi) unless `per_bs` supplies individual (theta, phi) pairs.
ChainSpec make_chain(int n_cavities, ChainScheme scheme, double theta, double phi, int line = 0,
                     const std::vector<std::pair<double, double>>& per_bs = {});

/// Throws BadIndices unless the wiring addresses valid, distinct modes.
void validate_chain(const ChainSpec& chain);

Eigen::MatrixXd bs_symplectic(const BeamSplitterSpec& spec, int n_modes_total);

/// S_{N-1} ... S_1 diag(V_1 .. V_N) S_1^T ... S_{N-1}^T.
CovarianceMatrix compose(const std::vector<CovarianceMatrix>& blocks,
                         const std::vector<BeamSplitterSpec>& bs_list);

/// Full pipeline result: steady state, per-cavity models, stability, and (when
/// stable) the composed covariance matrix with its pairwise report.
struct SystemEvaluation {
  std::vector<CavityConstants> cavities;
  std::vector<SteadyState> steady;  // one per cavity
  std::vector<LinearModel> models;  // one per cavity
  StabilityVerdict stability;       // worst cavity
  std::optional<CovarianceMatrix> covariance;
  std::optional<EntanglementReport> report;
  double steady_residual = 0.0;     // max over cavities, relative to max |eta|
  double lyapunov_residual = 0.0;   // max over cavities, relative to max(||D||, 1)
};

struct BeamSplitterSetting {
  double theta = constants::pi / 4.0;
  double phi = constants::pi / 2.0;
};

/// Evaluates one configuration without throwing on instability (the result
/// carries the verdict instead). Single and DualPolarization report every mode;
/// TwoCavityBS reports the four optical outputs after one beam splitter.
SystemEvaluation evaluate(const SystemParams& params, Scheme scheme,
                          const BeamSplitterSetting& bs = {}, IoMode io_mode = IoMode::Paper,
                          double edge_threshold = kDefaultEdgeThreshold);

/// Chain of N identical cavities and N - 1 beam splitters. The report covers
/// the optical modes only. Throws UnstableSystem if any cavity is unstable.
SystemEvaluation build_chain(const SystemParams& params, const ChainSpec& chain,
                             IoMode io_mode = IoMode::Paper,
                             double edge_threshold = kDefaultEdgeThreshold);

}  // namespace optomech
