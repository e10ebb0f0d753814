#pragma once

#include <Eigen/Core>
#include <vector>

#include "optomech/dynamics.hpp"

namespace optomech {

/// Steady-state covariance matrix V_ij = <{u_i, u_j}>/2, vacuum variance 1/2.
struct CovarianceMatrix {
  Eigen::MatrixXd V;
  std::vector<ModeLabel> modes;

  Eigen::Index mode_count() const { return V.rows() / 2; }
};

inline constexpr double kLyapunovTolerance = 1e-9;

/// Solves A V + V A^T = -D for a stable A by Bartels-Stewart on the complex
/// Schur form, followed by up to three refinement sweeps. The result is
/// symmetrized. Throws UnstableSystem or IllConditioned.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D);

CovarianceMatrix solve_lyapunov(const LinearModel& model);

/// Frobenius norm of A V + V A^T + D.
double lyapunov_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D,
                         const Eigen::MatrixXd& V);
double lyapunov_residual(const LinearModel& model, const Eigen::MatrixXd& V);

/// Block-diagonal symplectic form, one [[0, 1], [-1, 0]] block per mode.
Eigen::MatrixXd symplectic_form(Eigen::Index modes);

/// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega. Nonnegative
/// for a physical covariance matrix.
double physicality_margin(const Eigen::MatrixXd& V);

}  // namespace optomech
