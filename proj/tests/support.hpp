#pragma once

// Independent reference computations shared by the test binaries. Nothing here
// calls into the solver paths it is used to check.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "optomech/model.hpp"

namespace testing_support {

/// Dense solve of (I (x) A + A (x) I) vec(V) = -vec(D).
inline Eigen::MatrixXd kronecker_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) += I(i, j) * A;
      K.block(i * n, j * n, n, n) += A(i, j) * I;
    }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(D.data(), n * n);
  const Eigen::VectorXd v = K.fullPivLu().solve(rhs);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

/// Random matrix shifted so its spectral abscissa is -margin.
inline Eigen::MatrixXd random_stable(Eigen::Index n, std::mt19937_64& rng, double margin = 0.5) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = normal(rng);
  const double abscissa = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().real().maxCoeff();
  return A - (abscissa + margin) * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXd random_psd(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd B(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) B(i, j) = normal(rng);
  return B * B.transpose();
}

/// Two-mode squeezed vacuum, vacuum variance 1/2.
inline Eigen::Matrix4d tmsv(double r) {
  const double c = std::cosh(2 * r) / 2;
  const double s = std::sinh(2 * r) / 2;
  Eigen::Matrix4d V;
  V << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return V;
}

inline Eigen::Matrix2d rotation(double phi) {
  Eigen::Matrix2d R;
  R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return R;
}

inline Eigen::MatrixXd omega(Eigen::Index modes) {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    W(2 * k, 2 * k + 1) = 1;
    W(2 * k + 1, 2 * k) = -1;
  }
  return W;
}

/// Symplectic spectrum from the Hermitian matrix i Omega V, sorted.
inline std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& V) {
  const Eigen::MatrixXcd H = std::complex<double>(0, 1) * (omega(V.rows() / 2) * V).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H);
  std::vector<double> nu;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k).real() > 0) nu.push_back(es.eigenvalues()(k).real());
  std::sort(nu.begin(), nu.end());
  return nu;
}

/// Smallest eigenvalue of V + i Omega / 2.
inline double uncertainty_margin(const Eigen::MatrixXd& V) {
  const Eigen::MatrixXcd H = V.cast<std::complex<double>>() +
                             std::complex<double>(0, 0.5) * omega(V.rows() / 2).cast<std::complex<double>>();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H).eigenvalues().minCoeff();
}

/// Stationary right-hand side of one two-mode cavity, written out from the
/// equations of motion: 0 = -(kappa_j + i Delta_j) a_j + i g0 q (a_1 + a_2) + eta_j
/// and 0 = -omega_m q + g0 |a_1 + a_2|^2.
inline double stationary_oracle(const optomech::DerivedConstants& dc, double q,
                                const std::vector<std::complex<double>>& alpha) {
  const std::complex<double> i(0, 1);
  double worst = 0;
  for (std::size_t base = 0; base < alpha.size(); base += 2) {
    const auto sum = alpha[base] + alpha[base + 1];
    for (std::size_t j = base; j < base + 2; ++j) {
      const auto rhs = -(dc.kappa[j] + i * dc.delta[j]) * alpha[j] + i * dc.g0 * q * sum + dc.eta[j];
      worst = std::max(worst, std::abs(rhs));
    }
  }
  double power = 0;
  for (std::size_t base = 0; base < alpha.size(); base += 2) power += std::norm(alpha[base] + alpha[base + 1]);
  return std::max(worst, std::abs(-dc.omega_m * q + dc.g0 * power));
}

/// A long, light cavity where the linearized coupling is comparable to kappa:
/// stable at Delta_2 = omega_m with E_01 of order 1e-2.
inline optomech::SystemParams strong_params() {
  optomech::SystemParams p;
  p.cavity_length = 100;
  p.effective_mass = 1e-12;
  p.input_power = 30;
  p.temperature = 1e-4;
  p.kappa = {1e6, 1e6};
  p.gamma_m = {1e3};
  return p;
}

/// Same cavity driven harder with a weaker mechanical bath: unstable at Delta_2 = omega_m.
inline optomech::SystemParams unstable_params() {
  optomech::SystemParams p = strong_params();
  p.input_power = 100;
  p.gamma_m = {1e2};
  p.temperature = 0.01;
  return p;
}

/// kappa = 100 gamma_m = 1e6.
inline optomech::SystemParams fig7_like() {
  optomech::SystemParams p;
  p.gamma_m = {1e4};
  return p;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace testing_support
