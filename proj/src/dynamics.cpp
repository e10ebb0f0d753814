#include "optomech/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

std::vector<ModeLabel> cavity_labels(std::size_t optical, int cavity) {
  std::vector<ModeLabel> modes;
  const int index = cavity < 0 ? 0 : cavity;
  modes.push_back({cavity < 0 ? "0" : "m" + std::to_string(cavity + 1), true, index});
  for (std::size_t j = 0; j < optical; ++j) {
    const std::size_t global = static_cast<std::size_t>(index) * optical + j + 1;
    modes.push_back({std::to_string(global), false, index});
  }
  return modes;
}

// Fills the drift of one cavity (mirror first, then its optical modes) with
// the structure of the linearized QLEs. `folded` swaps the optical damping
// -kappa for the output-mode diagonal -kappa + sqrt(2 kappa).
Eigen::MatrixXd cavity_drift(const DerivedConstants& dc, const LinearizedCouplings& lin,
                             bool folded) {
  const auto n_opt = static_cast<Eigen::Index>(dc.optical_modes());
  const Eigen::Index n = 2 * (n_opt + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  const double s = lin.g0qs;

  A(0, 1) = dc.omega_m;
  A(1, 0) = -dc.omega_m;
  A(1, 1) = -dc.gamma_m;

  for (Eigen::Index j = 0; j < n_opt; ++j) {
    const auto pair = static_cast<std::size_t>(j / 2);
    const Eigen::Index partner = (j % 2 == 0) ? j + 1 : j - 1;
    const Eigen::Index x = 2 + 2 * j;
    const Eigen::Index y = x + 1;
    const Eigen::Index xp = 2 + 2 * partner;
    const Eigen::Index yp = xp + 1;
    const double kappa = dc.kappa[static_cast<std::size_t>(j)];
    const double damping = folded ? -kappa + std::sqrt(2.0 * kappa) : -kappa;
    const double dprime = lin.delta_prime[static_cast<std::size_t>(j)];

    A(1, x) = lin.G[pair];
    A(1, y) = lin.g[pair];

    A(x, 0) = -lin.g[pair];
    A(x, x) = damping;
    A(x, y) = dprime;
    A(x, yp) = -s;

    A(y, 0) = lin.G[pair];
    A(y, x) = -dprime;
    A(y, y) = damping;
    A(y, xp) = s;
  }
  return A;
}

// D = B N B^T: thermal force on p plus vacuum inputs (variance 1/2 per
// quadrature) entering the optical quadratures with sign * sqrt(2 kappa),
// either through one shared port or one port per mode.
Eigen::MatrixXd cavity_diffusion(const DerivedConstants& dc, NoiseSign sign) {
  const auto n_opt = static_cast<Eigen::Index>(dc.optical_modes());
  const Eigen::Index n = 2 * (n_opt + 1);
  const double sigma = sign == NoiseSign::Plus ? 1.0 : -1.0;
  const Eigen::Index ports = dc.input_noise == InputNoise::SharedPort ? 1 : n_opt;

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1 + 2 * ports);
  Eigen::VectorXd N = Eigen::VectorXd::Constant(1 + 2 * ports, 0.5);
  B(1, 0) = 1.0;
  N(0) = dc.gamma_m * (2.0 * dc.nbar + 1.0);
  for (Eigen::Index j = 0; j < n_opt; ++j) {
    const double amp = sigma * std::sqrt(2.0 * dc.kappa[static_cast<std::size_t>(j)]);
    const Eigen::Index port = ports == 1 ? 0 : j;
    B(2 + 2 * j, 1 + 2 * port) = amp;
    B(3 + 2 * j, 2 + 2 * port) = amp;
  }
  return B * N.asDiagonal() * B.transpose();
}

void require_one_cavity(const DerivedConstants& dc, const SteadyState& ss, std::size_t optical) {
  if (dc.optical_modes() != optical)
    throw DimensionMismatch("expected " + std::to_string(optical) + " optical modes, got " +
                            std::to_string(dc.optical_modes()));
  if (ss.q_s.size() != 1 || ss.alpha.size() != optical)
    throw DimensionMismatch("steady state does not match a single cavity");
}

}  // namespace

std::string_view to_string(ConfigTag tag) {
  switch (tag) {
    case ConfigTag::SingleIntracavity: return "single-intracavity";
    case ConfigTag::OutputFolded: return "output-folded";
    case ConfigTag::DualPolarization: return "dual-polarization";
  }
  return "?";
}

LinearizedCouplings linearize(const DerivedConstants& dc, const SteadyState& ss) {
  if (ss.q_s.size() != 1 || ss.alpha.size() != dc.optical_modes() || ss.alpha.size() % 2 != 0)
    throw DimensionMismatch("steady state does not match the cavity layout");
  LinearizedCouplings lin;
  lin.g0qs = dc.g0 * ss.q_s.front();
  for (std::size_t a = 0; a < ss.alpha.size(); a += 2) {
    const Complex sum = ss.alpha[a] + ss.alpha[a + 1];
    lin.G.push_back(std::sqrt(2.0) * dc.g0 * sum.real());
    lin.g.push_back(std::sqrt(2.0) * dc.g0 * sum.imag());
  }
  for (double d : dc.delta) lin.delta_prime.push_back(d - lin.g0qs);
  return lin;
}

LinearModel build_single(const DerivedConstants& dc, const SteadyState& ss, NoiseSign sign,
                         int cavity) {
  require_one_cavity(dc, ss, 2);
  const LinearizedCouplings lin = linearize(dc, ss);
  return {cavity_drift(dc, lin, false), cavity_diffusion(dc, sign), cavity_labels(2, cavity),
          ConfigTag::SingleIntracavity};
}

LinearModel build_dual_polarization(const DerivedConstants& dc, const SteadyState& ss,
                                    NoiseSign sign, int cavity) {
  require_one_cavity(dc, ss, 4);
  const LinearizedCouplings lin = linearize(dc, ss);
  return {cavity_drift(dc, lin, false), cavity_diffusion(dc, sign), cavity_labels(4, cavity),
          ConfigTag::DualPolarization};
}

LinearModel build_output_folded(const DerivedConstants& dc, const SteadyState& ss, int cavity,
                                NoiseSign sign) {
  require_one_cavity(dc, ss, 2);
  if (cavity < 0) throw BadIndices("output-folded cavity index must be >= 0");
  const LinearizedCouplings lin = linearize(dc, ss);
  return {cavity_drift(dc, lin, true), cavity_diffusion(dc, sign), cavity_labels(2, cavity),
          ConfigTag::OutputFolded};
}

std::array<LinearModel, 2> build_output_folded(const std::array<DerivedConstants, 2>& dc_pair,
                                               const std::array<SteadyState, 2>& ss_pair) {
  return {build_output_folded(dc_pair[0], ss_pair[0], 0),
          build_output_folded(dc_pair[1], ss_pair[1], 1)};
}

StabilityVerdict check_stability(const Eigen::MatrixXd& A) {
  if (!A.allFinite()) return {false, std::numeric_limits<double>::quiet_NaN()};
  const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues();
  const double abscissa = eig.real().maxCoeff();
  return {abscissa < 0.0, abscissa};
}

}  // namespace optomech
