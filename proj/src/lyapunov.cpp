#include "optomech/lyapunov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

// T Y + Y T^H = C with T upper triangular. Column j of Y T^H only involves
// columns k >= j of Y, so columns are solved from the last one backwards.
MatrixXcd solve_triangular_lyapunov(const MatrixXcd& T, const MatrixXcd& C) {
  const Index n = T.rows();
  MatrixXcd Y = MatrixXcd::Zero(n, n);
  for (Index j = n - 1; j >= 0; --j) {
    VectorXcd rhs = C.col(j);
    for (Index k = j + 1; k < n; ++k) rhs -= std::conj(T(j, k)) * Y.col(k);
    const std::complex<double> shift = std::conj(T(j, j));
    for (Index i = n - 1; i >= 0; --i) {
      std::complex<double> acc = rhs(i);
      for (Index k = i + 1; k < n; ++k) acc -= T(i, k) * Y(k, j);
      Y(i, j) = acc / (T(i, i) + shift);
    }
  }
  return Y;
}

MatrixXd solve_with_schur(const Eigen::ComplexSchur<MatrixXcd>& schur, const MatrixXd& rhs) {
  const MatrixXcd& U = schur.matrixU();
  const MatrixXcd C = U.adjoint() * rhs.cast<std::complex<double>>() * U;
  const MatrixXcd Y = solve_triangular_lyapunov(schur.matrixT(), C);
  return (U * Y * U.adjoint()).real();
}

}  // namespace

double lyapunov_residual(const MatrixXd& A, const MatrixXd& D, const MatrixXd& V) {
  if (A.rows() != V.rows() || A.cols() != V.cols() || D.rows() != V.rows() ||
      D.cols() != V.cols())
    throw DimensionMismatch("Lyapunov residual: dimensions differ");
  return (A * V + V * A.transpose() + D).norm();
}

double lyapunov_residual(const LinearModel& model, const MatrixXd& V) {
  return lyapunov_residual(model.A, model.D, V);
}

MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& D) {
  if (A.rows() != A.cols() || D.rows() != A.rows() || D.cols() != A.cols())
    throw DimensionMismatch("Lyapunov solve: A and D must be square and of equal size");
  const StabilityVerdict verdict = check_stability(A);
  if (!verdict.stable)
    throw UnstableSystem("drift matrix is not Hurwitz (spectral abscissa " +
                             std::to_string(verdict.spectral_abscissa) + ")",
                         verdict.spectral_abscissa);

  const Eigen::ComplexSchur<MatrixXcd> schur(A.cast<std::complex<double>>());
  MatrixXd V = solve_with_schur(schur, -D);
  V = (0.5 * (V + V.transpose())).eval();

  const double target = kLyapunovTolerance * std::max(D.norm(), 1.0);
  double residual = lyapunov_residual(A, D, V);
  for (int sweep = 0; sweep < 3 && residual > target; ++sweep) {
    const MatrixXd R = A * V + V * A.transpose() + D;
    V += solve_with_schur(schur, -R);
    V = (0.5 * (V + V.transpose())).eval();
    residual = lyapunov_residual(A, D, V);
  }
  if (!(residual <= target))
    throw IllConditioned("Lyapunov residual " + std::to_string(residual) + " above target " +
                             std::to_string(target),
                         residual);
  return V;
}

CovarianceMatrix solve_lyapunov(const LinearModel& model) {
  return {solve_lyapunov(model.A, model.D), model.modes};
}

MatrixXd symplectic_form(Index modes) {
  MatrixXd omega = MatrixXd::Zero(2 * modes, 2 * modes);
  for (Index k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double physicality_margin(const MatrixXd& V) {
  if (V.rows() != V.cols() || V.rows() % 2 != 0)
    throw DimensionMismatch("covariance matrix must be square with even dimension");
  MatrixXcd H = V.cast<std::complex<double>>();
  H += std::complex<double>(0.0, 0.5) * symplectic_form(V.rows() / 2).cast<std::complex<double>>();
  return Eigen::SelfAdjointEigenSolver<MatrixXcd>(H, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace optomech
