#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {

enum class ConfigTag { SingleIntracavity, OutputFolded, DualPolarization };

std::string_view to_string(ConfigTag tag);

/// One bosonic mode of the quadrature vector. Row pair 2k, 2k+1 of every
/// matrix belongs to modes[k]: (q, p) for the mirror, (X, Y) for light.
struct ModeLabel {
  std::string name;
  bool mechanical = false;
  int cavity = 0;  // 0-based cavity the mode belongs to
  bool operator==(const ModeLabel&) const = default;
};

struct LinearModel {
  Eigen::MatrixXd A;  // drift
  Eigen::MatrixXd D;  // diffusion
  std::vector<ModeLabel> modes;
  ConfigTag tag = ConfigTag::SingleIntracavity;

  Eigen::Index dimension() const { return A.rows(); }
};

/// Linearized couplings of one cavity, one (G, g) per coupled optical pair.
struct LinearizedCouplings {
  std::vector<double> G;            // sqrt(2) g0 Re[alpha_a + alpha_b]
  std::vector<double> g;            // sqrt(2) g0 Im[alpha_a + alpha_b]
  std::vector<double> delta_prime;  // Delta_j - g0 q_s
  double g0qs = 0.0;
};

LinearizedCouplings linearize(const DerivedConstants& dc, const SteadyState& ss);

/// Sign of the sqrt(2 kappa) input-noise term. It only enters D quadratically.
enum class NoiseSign { Plus, Minus };

/// `cavity` < 0 labels the modes "0" (mirror), "1", "2", ... as a standalone
/// system; a cavity index k >= 0 yields "m<k+1>" and globally numbered optics.
LinearModel build_single(const DerivedConstants& dc, const SteadyState& ss,
                         NoiseSign sign = NoiseSign::Plus, int cavity = -1);

LinearModel build_dual_polarization(const DerivedConstants& dc, const SteadyState& ss,
                                    NoiseSign sign = NoiseSign::Plus, int cavity = -1);

/// Output-mode model of cavity `cavity` (0-based) with the -kappa + sqrt(2 kappa)
/// diagonals, as used before the beam splitter.
LinearModel build_output_folded(const DerivedConstants& dc, const SteadyState& ss, int cavity,
                                NoiseSign sign = NoiseSign::Plus);

std::array<LinearModel, 2> build_output_folded(const std::array<DerivedConstants, 2>& dc_pair,
                                               const std::array<SteadyState, 2>& ss_pair);

struct StabilityVerdict {
  bool stable = false;
  double spectral_abscissa = 0.0;  // max Re(eig A)
};

StabilityVerdict check_stability(const Eigen::MatrixXd& A);
inline StabilityVerdict check_stability(const LinearModel& model) { return check_stability(model.A); }

}  // namespace optomech
