#include "optomech/network.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "optomech/errors.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {

std::string_view to_string(ChainScheme scheme) {
  return scheme == ChainScheme::TwoMode ? "two-mode" : "four-mode";
}

std::string_view to_string(IoMode mode) { return mode == IoMode::Paper ? "paper" : "intracavity"; }

ChainScheme parse_chain_scheme(std::string_view text) {
  if (text == "two-mode") return ChainScheme::TwoMode;
  if (text == "four-mode") return ChainScheme::FourMode;
  throw ConfigError("unknown chain scheme '" + std::string(text) + "' (two-mode | four-mode)");
}

IoMode parse_io_mode(std::string_view text) {
  if (text == "paper") return IoMode::Paper;
  if (text == "intracavity") return IoMode::Intracavity;
  throw ConfigError("unknown io_mode '" + std::string(text) + "' (paper | intracavity)");
}

int modes_per_cavity(ChainScheme scheme) { return scheme == ChainScheme::TwoMode ? 3 : 5; }

ChainSpec make_chain(int n_cavities, ChainScheme scheme, double theta, double phi, int line,
                     const std::vector<std::pair<double, double>>& per_bs) {
  if (n_cavities < 1) throw BadIndices("a chain needs at least one cavity");
  if (!per_bs.empty() && per_bs.size() != static_cast<std::size_t>(n_cavities - 1))
    throw BadIndices("per-beam-splitter settings must list N - 1 entries");
  ChainSpec chain{n_cavities, scheme, line, {}};
  const int block = modes_per_cavity(scheme);
  for (int k = 1; k < n_cavities; ++k) {
    BeamSplitterSpec bs{theta, phi, (k - 1) * block + 1 + line, k * block + 1 + line};
    if (!per_bs.empty()) std::tie(bs.theta, bs.phi) = per_bs[static_cast<std::size_t>(k - 1)];
    chain.bs_list.push_back(bs);
  }
  validate_chain(chain);
  return chain;
}

void validate_chain(const ChainSpec& chain) {
  if (chain.n_cavities < 1) throw BadIndices("a chain needs at least one cavity");
  const int block = modes_per_cavity(chain.scheme);
  if (chain.line < 0 || chain.line >= block - 1)
    throw BadIndices("chain line must name an optical mode of the cavity");
  if (chain.bs_list.size() != static_cast<std::size_t>(chain.n_cavities - 1))
    throw BadIndices("a chain of N cavities uses exactly N - 1 beam splitters");
  const int total = chain.n_cavities * block;
  for (const BeamSplitterSpec& bs : chain.bs_list) {
    if (bs.mode_a == bs.mode_b || bs.mode_a < 0 || bs.mode_b < 0 || bs.mode_a >= total ||
        bs.mode_b >= total)
      throw BadIndices("beam splitter addresses invalid modes");
    if (bs.mode_a % block == 0 || bs.mode_b % block == 0)
      throw BadIndices("beam splitter cannot act on a mechanical mode");
  }
}

Eigen::MatrixXd bs_symplectic(const BeamSplitterSpec& spec, int n_modes_total) {
  if (spec.mode_a == spec.mode_b || spec.mode_a < 0 || spec.mode_b < 0 ||
      spec.mode_a >= n_modes_total || spec.mode_b >= n_modes_total)
    throw BadIndices("beam splitter modes must be distinct and in range");
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(2 * n_modes_total, 2 * n_modes_total);
  const double c = std::cos(spec.theta);
  const double s = std::sin(spec.theta);
  Eigen::Matrix2d rotation;
  rotation << std::cos(spec.phi), -std::sin(spec.phi), std::sin(spec.phi), std::cos(spec.phi);
  const Eigen::Index a = 2 * spec.mode_a;
  const Eigen::Index b = 2 * spec.mode_b;
  S.block<2, 2>(a, a) = c * rotation;
  S.block<2, 2>(a, b) = -s * rotation;
  S.block<2, 2>(b, a) = s * Eigen::Matrix2d::Identity();
  S.block<2, 2>(b, b) = c * Eigen::Matrix2d::Identity();
  return S;
}

CovarianceMatrix compose(const std::vector<CovarianceMatrix>& blocks,
                         const std::vector<BeamSplitterSpec>& bs_list) {
  Eigen::Index dim = 0;
  for (const CovarianceMatrix& b : blocks) {
    if (b.V.rows() != b.V.cols() || b.V.rows() % 2 != 0 ||
        static_cast<Eigen::Index>(b.modes.size()) * 2 != b.V.rows())
      throw DimensionMismatch("covariance block is not square with one label per mode");
    dim += b.V.rows();
  }
  CovarianceMatrix out;
  out.V = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index offset = 0;
  for (const CovarianceMatrix& b : blocks) {
    out.V.block(offset, offset, b.V.rows(), b.V.cols()) = b.V;
    out.modes.insert(out.modes.end(), b.modes.begin(), b.modes.end());
    offset += b.V.rows();
  }
  const auto n_modes = static_cast<int>(dim / 2);
  for (const BeamSplitterSpec& bs : bs_list) {
    const Eigen::MatrixXd S = bs_symplectic(bs, n_modes);
    out.V = S * out.V * S.transpose();
    out.V = (0.5 * (out.V + out.V.transpose())).eval();
  }
  return out;
}

namespace {

enum class ModelKind { Intracavity, OutputFolded, Dual };

double max_drive(const DerivedConstants& dc) {
  double m = 0.0;
  for (double e : dc.eta) m = std::max(m, std::abs(e));
  return m;
}

SystemEvaluation run_pipeline(const SystemParams& params, Scheme scheme, int n_cavities,
                              ModelKind kind, bool standalone,
                              const std::vector<BeamSplitterSpec>& bs_list, bool optical_only,
                              double edge_threshold) {
  SystemEvaluation ev;
  ev.cavities = scheme_params(params, scheme, n_cavities);
  ev.stability = {true, -std::numeric_limits<double>::infinity()};

  for (int k = 0; k < n_cavities; ++k) {
    const DerivedConstants& dc = ev.cavities[static_cast<std::size_t>(k)].constants;
    const int label = standalone ? -1 : k;
    auto build = [&](const SteadyState& ss) {
      switch (kind) {
        case ModelKind::Intracavity: return build_single(dc, ss, NoiseSign::Plus, label);
        case ModelKind::OutputFolded: return build_output_folded(dc, ss, k);
        case ModelKind::Dual: return build_dual_polarization(dc, ss, NoiseSign::Plus, label);
      }
      throw ConfigError("unknown model kind");
    };

    SteadyState ss =
        kind == ModelKind::Dual
            ? solve_self_consistent(std::span<const DerivedConstants>(&dc, 1),
                                    Scheme::DualPolarization)
            : solve_single_cavity(dc, [&](const SteadyState& s) {
                return check_stability(build(s)).stable;
              });
    LinearModel model = build(ss);
    const StabilityVerdict verdict = check_stability(model);
    ev.stability.stable = ev.stability.stable && verdict.stable;
    ev.stability.spectral_abscissa =
        std::max(ev.stability.spectral_abscissa, verdict.spectral_abscissa);
    const double drive = max_drive(dc);
    ev.steady_residual = std::max(ev.steady_residual, drive > 0 ? ss.residual / drive : ss.residual);
    ev.steady.push_back(std::move(ss));
    ev.models.push_back(std::move(model));
  }
  if (!ev.stability.stable) return ev;

  std::vector<CovarianceMatrix> blocks;
  for (const LinearModel& model : ev.models) {
    blocks.push_back(solve_lyapunov(model));
    ev.lyapunov_residual =
        std::max(ev.lyapunov_residual, lyapunov_residual(model, blocks.back().V) /
                                           std::max(model.D.norm(), 1.0));
  }
  ev.covariance = compose(blocks, bs_list);

  std::vector<int> modes;
  for (std::size_t m = 0; m < ev.covariance->modes.size(); ++m)
    if (!optical_only || !ev.covariance->modes[m].mechanical) modes.push_back(static_cast<int>(m));
  ev.report = pairwise_matrix(*ev.covariance, modes, edge_threshold);
  return ev;
}

}  // namespace

SystemEvaluation evaluate(const SystemParams& params, Scheme scheme, const BeamSplitterSetting& bs,
                          IoMode io_mode, double edge_threshold) {
  switch (scheme) {
    case Scheme::Single:
      return run_pipeline(params, scheme, 1, ModelKind::Intracavity, true, {}, false,
                          edge_threshold);
    case Scheme::DualPolarization:
      return run_pipeline(params, scheme, 1, ModelKind::Dual, true, {}, false, edge_threshold);
    case Scheme::TwoCavityBS: {
      const ChainSpec chain = make_chain(2, ChainScheme::TwoMode, bs.theta, bs.phi);
      const ModelKind kind =
          io_mode == IoMode::Paper ? ModelKind::OutputFolded : ModelKind::Intracavity;
      return run_pipeline(params, scheme, 2, kind, false, chain.bs_list, true, edge_threshold);
    }
  }
  throw ConfigError("unknown scheme");
}

SystemEvaluation build_chain(const SystemParams& params, const ChainSpec& chain, IoMode io_mode,
                             double edge_threshold) {
  validate_chain(chain);
  const bool four = chain.scheme == ChainScheme::FourMode;
  const Scheme scheme = four ? Scheme::DualPolarization
                             : (chain.n_cavities == 1 ? Scheme::Single : Scheme::TwoCavityBS);
  const ModelKind kind = four ? ModelKind::Dual
                              : (io_mode == IoMode::Paper ? ModelKind::OutputFolded
                                                          : ModelKind::Intracavity);
  SystemEvaluation ev = run_pipeline(params, scheme, chain.n_cavities, kind, false, chain.bs_list,
                                     true, edge_threshold);
  if (!ev.stability.stable)
    throw UnstableSystem("chain contains an unstable cavity", ev.stability.spectral_abscissa);
  return ev;
}

}  // namespace optomech
