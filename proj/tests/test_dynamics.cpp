#include <doctest.h>

#include <cmath>

#include "optomech/dynamics.hpp"
#include "optomech/lyapunov.hpp"
#include "optomech/steady_state.hpp"
#include "support.hpp"

using namespace optomech;

namespace {

struct Built {
  DerivedConstants dc;
  SteadyState ss;
};

Built single(const SystemParams& p) {
  Built b{derive_constants(p), {}};
  b.ss = solve_single_cavity(b.dc);
  return b;
}

Built dual(const SystemParams& p) {
  Built b{scheme_params(p, Scheme::DualPolarization, 1)[0].constants, {}};
  b.ss = solve_self_consistent(std::span(&b.dc, 1), Scheme::DualPolarization);
  return b;
}

// Expected drift written slot by slot from the linearized equations.
Eigen::MatrixXd expected_drift(const Built& b, bool folded) {
  const DerivedConstants& dc = b.dc;
  const auto n_opt = static_cast<int>(dc.optical_modes());
  const double s = dc.g0 * b.ss.q_s[0];
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 + 2 * n_opt, 2 + 2 * n_opt);
  A(0, 1) = dc.omega_m;
  A(1, 0) = -dc.omega_m;
  A(1, 1) = -dc.gamma_m;
  for (int j = 0; j < n_opt; ++j) {
    const int first = j - j % 2;
    const auto sum = b.ss.alpha[first] + b.ss.alpha[first + 1];
    const double G = std::sqrt(2.0) * dc.g0 * sum.real();
    const double g = std::sqrt(2.0) * dc.g0 * sum.imag();
    const double dp = dc.delta[j] - s;
    const double k = dc.kappa[j];
    const int x = 2 + 2 * j;
    const int partner = j % 2 == 0 ? j + 1 : j - 1;
    A(1, x) = G;
    A(1, x + 1) = g;
    A(x, 0) = -g;
    A(x + 1, 0) = G;
    A(x, x) = A(x + 1, x + 1) = folded ? -k + std::sqrt(2 * k) : -k;
    A(x, x + 1) = dp;
    A(x + 1, x) = -dp;
    A(x, 2 + 2 * partner + 1) = -s;
    A(x + 1, 2 + 2 * partner) = s;
  }
  return A;
}

bool psd(const Eigen::MatrixXd& D) {
  const double min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(D).eigenvalues().minCoeff();
  return min >= -1e-12 * D.norm();
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("decoupled mirror gives a block-diagonal drift") {
  SystemParams p;
  p.g0_override = 0.0;
  const Built b = single(p);
  const LinearModel m = build_single(b.dc, b.ss);
  CHECK(m.A.block(0, 2, 2, 4).isZero(0));
  CHECK(m.A.block(2, 0, 4, 2).isZero(0));
}

TEST_CASE("drift trace and first mechanical row") {
  for (const SystemParams& p : {SystemParams{}, testing_support::strong_params()}) {
    const Built b = single(p);
    const LinearModel m = build_single(b.dc, b.ss);
    CHECK(m.A.trace() == -b.dc.gamma_m - 2 * b.dc.kappa[0] - 2 * b.dc.kappa[1]);
    CHECK(m.A(0, 0) == 0.0);
    CHECK(m.A(0, 1) == b.dc.omega_m);
    CHECK(m.A.row(0).tail(4).isZero(0));
    CHECK(m.dimension() == 6);
    CHECK(m.tag == ConfigTag::SingleIntracavity);
  }
}

TEST_CASE("structural audit of every drift entry") {
  for (const SystemParams& p : {SystemParams{}, testing_support::strong_params()}) {
    const Built s = single(p);
    CHECK((build_single(s.dc, s.ss).A - expected_drift(s, false)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((build_output_folded(s.dc, s.ss, 0).A - expected_drift(s, true)).cwiseAbs().maxCoeff() == 0.0);
    const Built d = dual(p);
    const LinearModel m = build_dual_polarization(d.dc, d.ss);
    CHECK(m.dimension() == 10);
    CHECK((m.A - expected_drift(d, false)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("linearized couplings follow the working point") {
  const Built b = single(testing_support::strong_params());
  const LinearizedCouplings lin = linearize(b.dc, b.ss);
  const auto sum = b.ss.alpha[0] + b.ss.alpha[1];
  CHECK(lin.G[0] == doctest::Approx(std::sqrt(2.0) * b.dc.g0 * sum.real()).epsilon(1e-15));
  CHECK(lin.g[0] == doctest::Approx(std::sqrt(2.0) * b.dc.g0 * sum.imag()).epsilon(1e-15));
  CHECK(lin.g0qs == b.dc.g0 * b.ss.q_s[0]);
  CHECK(lin.delta_prime[1] == b.dc.delta[1] - lin.g0qs);
}

TEST_CASE("diffusion is symmetric positive semidefinite") {
  for (const SystemParams& base : {SystemParams{}, testing_support::strong_params()}) {
    for (InputNoise noise : {InputNoise::Independent, InputNoise::SharedPort}) {
      SystemParams p = base;
      p.input_noise = noise;
      const Built s = single(p);
      const Built d = dual(p);
      for (const LinearModel& m :
           {build_single(s.dc, s.ss), build_output_folded(s.dc, s.ss, 0), build_dual_polarization(d.dc, d.ss)}) {
        CHECK(m.D.isApprox(m.D.transpose(), 0));
        CHECK(psd(m.D));
        CHECK(m.D(1, 1) == doctest::Approx(s.dc.gamma_m * (2 * s.dc.nbar + 1)).epsilon(1e-15));
        for (Eigen::Index k = 2; k < m.D.rows(); ++k)
          CHECK(m.D(k, k) == doctest::Approx(s.dc.kappa[0]).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("shared input port adds sqrt(kappa_i kappa_j) cross terms") {
  SystemParams p;
  p.kappa = {1e6, 4e6};
  p.input_noise = InputNoise::SharedPort;
  const Built b = single(p);
  const LinearModel m = build_single(b.dc, b.ss);
  CHECK(m.D(2, 4) == doctest::Approx(2e6).epsilon(1e-15));
  CHECK(m.D(3, 5) == doctest::Approx(2e6).epsilon(1e-15));
  CHECK(m.D(2, 5) == 0.0);
  p.input_noise = InputNoise::Independent;
  const Built c = single(p);
  CHECK(build_single(c.dc, c.ss).D(2, 4) == 0.0);
}

TEST_CASE("shared input port without cross damping breaks the uncertainty relation") {
  // With the drift of the linearized equations, correlated input noise on two
  // modes detuned by 2 omega_m yields a covariance matrix that is not physical
  // at order kappa / omega_m. Independent ports stay physical.
  SystemParams p;
  p.input_noise = InputNoise::SharedPort;
  const Built b = single(p);
  const Eigen::MatrixXd shared = solve_lyapunov(build_single(b.dc, b.ss)).V;
  CHECK(testing_support::uncertainty_margin(shared) < -1e-6);
  p.input_noise = InputNoise::Independent;
  const Built c = single(p);
  const Eigen::MatrixXd independent = solve_lyapunov(build_single(c.dc, c.ss)).V;
  CHECK(testing_support::uncertainty_margin(independent) > -1e-12);
}

TEST_CASE("noise sign does not change the covariance matrix") {
  for (InputNoise noise : {InputNoise::Independent, InputNoise::SharedPort}) {
    SystemParams p = testing_support::strong_params();
    p.input_noise = noise;
    const Built b = single(p);
    const LinearModel plus = build_single(b.dc, b.ss, NoiseSign::Plus);
    const LinearModel minus = build_single(b.dc, b.ss, NoiseSign::Minus);
    CHECK(plus.D == minus.D);
    const Eigen::MatrixXd Vp = solve_lyapunov(plus).V;
    const Eigen::MatrixXd Vm = solve_lyapunov(minus).V;
    CHECK((Vp - Vm).norm() <= 1e-12 * Vp.norm());
  }
}

TEST_CASE("dual polarization drift is invariant under swapping the polarizations") {
  const Built d = dual(testing_support::strong_params());
  const LinearModel m = build_dual_polarization(d.dc, d.ss);
  Eigen::VectorXi perm(10);
  perm << 0, 1, 6, 7, 8, 9, 2, 3, 4, 5;
  Eigen::PermutationMatrix<Eigen::Dynamic> P(perm);
  CHECK((P * m.A * P.transpose() - m.A).cwiseAbs().maxCoeff() <= 1e-9 * m.A.cwiseAbs().maxCoeff());
  CHECK((P * m.D * P.transpose() - m.D).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("decoupled dual polarization splits into independent blocks") {
  SystemParams p;
  p.g0_override = 0.0;
  const Built d = dual(p);
  const LinearModel m = build_dual_polarization(d.dc, d.ss);
  CHECK(m.A.block(0, 2, 2, 8).isZero(0));
  CHECK(m.A.block(2, 6, 4, 4).isZero(0));
  CHECK(m.A.block(6, 2, 4, 4).isZero(0));
}

TEST_CASE("single model is the one-polarization restriction of the dual model") {
  const SystemParams p = testing_support::strong_params();
  const Built s = single(p);
  Built d = dual(p);
  d.dc.eta[2] = d.dc.eta[3] = 0.0;
  d.ss.alpha = {s.ss.alpha[0], s.ss.alpha[1], 0.0, 0.0};
  d.ss.q_s = s.ss.q_s;
  const LinearModel full = build_dual_polarization(d.dc, d.ss);
  const LinearModel one = build_single(s.dc, s.ss);
  CHECK(full.A.topLeftCorner(6, 6) == one.A);
  CHECK(full.D.topLeftCorner(6, 6) == one.D);
}

TEST_CASE("identical cavities fold to identical output models") {
  const SystemParams p = testing_support::fig7_like();
  const auto cavities = scheme_params(p, Scheme::TwoCavityBS, 2);
  const std::array<DerivedConstants, 2> dcs{cavities[0].constants, cavities[1].constants};
  const std::array<SteadyState, 2> sss{solve_single_cavity(dcs[0]), solve_single_cavity(dcs[1])};
  const auto models = build_output_folded(dcs, sss);
  CHECK(models[0].A == models[1].A);
  CHECK(models[0].D == models[1].D);
  CHECK(models[0].tag == ConfigTag::OutputFolded);
  CHECK(models[0].modes[1].name == "1");
  CHECK(models[1].modes[1].name == "3");
  CHECK(models[1].modes[0].cavity == 1);
  CHECK(check_stability(models[0]).stable);
  CHECK(check_stability(models[1]).stable);
  CHECK(models[0].A(2, 2) == -dcs[0].kappa[0] + std::sqrt(2 * dcs[0].kappa[0]));
}

TEST_CASE("stability verdicts") {
  const StabilityVerdict v = check_stability(Eigen::MatrixXd(-Eigen::MatrixXd::Identity(4, 4)));
  CHECK(v.stable);
  CHECK(v.spectral_abscissa == doctest::Approx(-1.0));
  CHECK_FALSE(check_stability(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2))).stable);

  const Built fig2 = single(SystemParams{});
  CHECK(check_stability(build_single(fig2.dc, fig2.ss)).stable);
  const Built strong = single(testing_support::strong_params());
  CHECK(check_stability(build_single(strong.dc, strong.ss)).stable);
  const Built hot = single(testing_support::unstable_params());
  const StabilityVerdict u = check_stability(build_single(hot.dc, hot.ss));
  CHECK_FALSE(u.stable);
  CHECK(u.spectral_abscissa > 0);

  SystemParams p;
  p.kappa = {1e6, 1e6, 1e6, 1e6};
  const Built d = dual(p);
  CHECK(check_stability(build_dual_polarization(d.dc, d.ss)).stable);
}

TEST_CASE("mode labels") {
  const Built b = single(SystemParams{});
  const LinearModel standalone = build_single(b.dc, b.ss);
  CHECK(standalone.modes[0].name == "0");
  CHECK(standalone.modes[0].mechanical);
  CHECK(standalone.modes[2].name == "2");
  const LinearModel third = build_single(b.dc, b.ss, NoiseSign::Plus, 2);
  CHECK(third.modes[0].name == "m3");
  CHECK(third.modes[1].name == "5");
  CHECK(third.modes[2].cavity == 2);
}

}
