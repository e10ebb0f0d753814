#include <doctest.h>

#include <random>

#include "optomech/errors.hpp"
#include "optomech/lyapunov.hpp"
#include "optomech/steady_state.hpp"
#include "support.hpp"

using namespace optomech;
using testing_support::kronecker_lyapunov;

TEST_SUITE("lyapunov") {

TEST_CASE("diagonal drift has the closed-form solution") {
  Eigen::MatrixXd A = Eigen::Vector3d(-1, -2, -5).asDiagonal();
  Eigen::MatrixXd D(3, 3);
  D << 2, 1, 0, 1, 4, 3, 0, 3, 10;
  const Eigen::MatrixXd V = solve_lyapunov(A, D);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(V(i, j) == doctest::Approx(D(i, j) / -(A(i, i) + A(j, j))).epsilon(1e-14));
}

TEST_CASE("scalar equation") {
  const Eigen::MatrixXd V = solve_lyapunov(Eigen::MatrixXd::Constant(1, 1, -0.25), Eigen::MatrixXd::Constant(1, 1, 3.0));
  CHECK(V(0, 0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("random stable systems match the Kronecker solve") {
  std::mt19937_64 rng(20261018);
  for (Eigen::Index n : {2, 4, 6, 10, 16}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd A = testing_support::random_stable(n, rng, 0.3);
      const Eigen::MatrixXd D = testing_support::random_psd(n, rng);
      const Eigen::MatrixXd V = solve_lyapunov(A, D);
      const Eigen::MatrixXd ref = kronecker_lyapunov(A, D);
      CHECK((V - ref).norm() <= 1e-9 * ref.norm());
      CHECK(lyapunov_residual(A, D, V) <= kLyapunovTolerance * D.norm());
      CHECK(V == V.transpose());
    }
  }
}

TEST_CASE("solution is linear in the diffusion") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd A = testing_support::random_stable(6, rng);
  const Eigen::MatrixXd D1 = testing_support::random_psd(6, rng);
  const Eigen::MatrixXd D2 = testing_support::random_psd(6, rng);
  const Eigen::MatrixXd sum = solve_lyapunov(A, 2.0 * D1 + 3.0 * D2);
  const Eigen::MatrixXd parts = 2.0 * solve_lyapunov(A, D1) + 3.0 * solve_lyapunov(A, D2);
  CHECK((sum - parts).norm() <= 1e-10 * sum.norm());
}

TEST_CASE("unstable drift is refused") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
  A(0, 0) = -1;
  CHECK_THROWS_AS(solve_lyapunov(A, Eigen::MatrixXd::Identity(2, 2)), UnstableSystem);
  CHECK_THROWS_AS(solve_lyapunov(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2)),
                  UnstableSystem);
}

TEST_CASE("physical model residual and agreement with the Kronecker solve") {
  for (const SystemParams& p : {SystemParams{}, testing_support::strong_params()}) {
    const DerivedConstants dc = derive_constants(p);
    const LinearModel m = build_single(dc, solve_single_cavity(dc));
    const CovarianceMatrix cm = solve_lyapunov(m);
    CHECK(cm.mode_count() == 3);
    CHECK(cm.modes == m.modes);
    CHECK(lyapunov_residual(m, cm.V) <= kLyapunovTolerance * m.D.norm());
    const Eigen::MatrixXd ref = kronecker_lyapunov(m.A, m.D);
    CHECK((cm.V - ref).norm() <= 1e-7 * ref.norm());
    CHECK(physicality_margin(cm.V) > -1e-9 * cm.V.norm());
  }
}

TEST_CASE("symplectic form and physicality margin") {
  const Eigen::MatrixXd W = symplectic_form(3);
  CHECK(W == testing_support::omega(3));
  CHECK(std::abs(physicality_margin(0.5 * Eigen::MatrixXd::Identity(4, 4))) < 1e-15);
  CHECK(physicality_margin(0.4 * Eigen::MatrixXd::Identity(2, 2)) < 0);
  CHECK(physicality_margin(testing_support::tmsv(0.7)) > -1e-12);
}

}
