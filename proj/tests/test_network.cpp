#include <doctest.h>

#include <cmath>

#include "optomech/errors.hpp"
#include "optomech/network.hpp"
#include "support.hpp"

using namespace optomech;
using testing_support::tmsv;
constexpr double pi = constants::pi;

namespace {

CovarianceMatrix pair_block(double r, int cavity) {
  CovarianceMatrix cm;
  cm.V = tmsv(r);
  cm.modes = {{std::to_string(2 * cavity + 1), false, cavity}, {std::to_string(2 * cavity + 2), false, cavity}};
  return cm;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("beam splitter is symplectic") {
  for (double theta : {0.0, 0.3, pi / 4, 1.2})
    for (double phi : {0.0, pi / 2, 2.1}) {
      const Eigen::MatrixXd S = bs_symplectic({theta, phi, 1, 3}, 4);
      const Eigen::MatrixXd W = testing_support::omega(4);
      CHECK((S * W * S.transpose() - W).norm() < 1e-14);
      CHECK((S.transpose() * S - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-14);
    }
}

TEST_CASE("zero mixing angle with zero phase is the identity") {
  CHECK(bs_symplectic({0.0, 0.0, 0, 2}, 3) == Eigen::MatrixXd::Identity(6, 6));
  CHECK_THROWS_AS(bs_symplectic({0.1, 0.0, 1, 1}, 3), BadIndices);
  CHECK_THROWS_AS(bs_symplectic({0.1, 0.0, 0, 3}, 3), BadIndices);
}

TEST_CASE("beam splitter quadrature map") {
  const Eigen::MatrixXd S = bs_symplectic({pi / 6, pi / 3, 0, 1}, 2);
  const double c = std::cos(pi / 6), s = std::sin(pi / 6);
  const Eigen::Matrix2d R = testing_support::rotation(pi / 3);
  CHECK((S.topLeftCorner(2, 2) - c * Eigen::MatrixXd(R)).norm() < 1e-15);
  CHECK((S.topRightCorner(2, 2) + s * Eigen::MatrixXd(R)).norm() < 1e-15);
  CHECK((S.bottomLeftCorner(2, 2) - s * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
  CHECK((S.bottomRightCorner(2, 2) - c * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("mixing identical thermal states leaves them unchanged") {
  CovarianceMatrix a;
  a.V = 1.7 * Eigen::MatrixXd::Identity(2, 2);
  a.modes = {{"1", false, 0}};
  CovarianceMatrix b = a;
  b.modes = {{"2", false, 1}};
  const CovarianceMatrix out = compose({a, b}, {{pi / 4, 0.7, 0, 1}});
  CHECK((out.V - 1.7 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("compose of a single block is the block") {
  const CovarianceMatrix one = pair_block(0.4, 0);
  const CovarianceMatrix out = compose({one}, {});
  CHECK(out.V == one.V);
  CHECK(out.modes == one.modes);
  CovarianceMatrix bad = one;
  bad.modes.pop_back();
  CHECK_THROWS_AS(compose({bad}, {}), DimensionMismatch);
}

TEST_CASE("beam splitters preserve the symplectic spectrum") {
  CovarianceMatrix a = pair_block(0.4, 0);
  a.V += 0.2 * Eigen::MatrixXd::Identity(4, 4);
  const CovarianceMatrix b = pair_block(0.9, 1);
  const CovarianceMatrix out = compose({a, b}, {{0.6, 1.3, 0, 2}, {0.2, 0.1, 1, 3}});
  auto before = testing_support::symplectic_spectrum(compose({a, b}, {}).V);
  auto after = testing_support::symplectic_spectrum(out.V);
  REQUIRE(before.size() == after.size());
  for (std::size_t k = 0; k < before.size(); ++k) CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-12));
  CHECK(out.V == out.V.transpose());
}

TEST_CASE("balanced mixing of two squeezed pairs gives a square") {
  const CovarianceMatrix out = compose({pair_block(0.5, 0), pair_block(0.5, 1)}, {{pi / 4, pi / 2, 0, 2}});
  const EntanglementReport r = pairwise_matrix(out);
  CHECK(r.shape == Shape::Square);
  CHECK(r.between("1", "3") == 0.0);
  CHECK(r.between("2", "4") == 0.0);
  CHECK(r.between("1", "2") > 0.1);
  CHECK(r.between("3", "4") > 0.1);
}

TEST_CASE("zero mixing angle leaves the report unchanged") {
  const std::vector<CovarianceMatrix> blocks{pair_block(0.3, 0), pair_block(0.6, 1)};
  const EntanglementReport plain = pairwise_matrix(compose(blocks, {}));
  const EntanglementReport mixed = pairwise_matrix(compose(blocks, {{0.0, 1.1, 0, 2}}));
  CHECK((plain.log_negativity - mixed.log_negativity).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(mixed.shape == plain.shape);
}

TEST_CASE("chain wiring") {
  const ChainSpec two = make_chain(3, ChainScheme::TwoMode, pi / 4, pi / 2);
  REQUIRE(two.bs_list.size() == 2);
  CHECK(two.bs_list[0].mode_a == 1);
  CHECK(two.bs_list[0].mode_b == 4);
  CHECK(two.bs_list[1].mode_a == 4);
  CHECK(two.bs_list[1].mode_b == 7);
  const ChainSpec upper = make_chain(2, ChainScheme::TwoMode, pi / 4, pi / 2, 1);
  CHECK(upper.bs_list[0].mode_a == 2);
  CHECK(upper.bs_list[0].mode_b == 5);
  const ChainSpec four = make_chain(2, ChainScheme::FourMode, pi / 4, pi / 2);
  CHECK(four.bs_list[0].mode_a == 1);
  CHECK(four.bs_list[0].mode_b == 6);
  const ChainSpec per = make_chain(3, ChainScheme::TwoMode, 0, 0, 0, {{0.1, 0.2}, {0.3, 0.4}});
  CHECK(per.bs_list[1].theta == 0.3);
  CHECK(per.bs_list[1].phi == 0.4);
  CHECK(make_chain(1, ChainScheme::TwoMode, 0, 0).bs_list.empty());
}

TEST_CASE("invalid chains are rejected") {
  CHECK_THROWS_AS(make_chain(0, ChainScheme::TwoMode, 0, 0), BadIndices);
  CHECK_THROWS_AS(make_chain(3, ChainScheme::TwoMode, 0, 0, 2), BadIndices);
  CHECK_THROWS_AS(make_chain(3, ChainScheme::TwoMode, 0, 0, 0, {{0.1, 0.2}}), BadIndices);
  ChainSpec chain = make_chain(2, ChainScheme::TwoMode, 0, 0);
  chain.bs_list[0].mode_b = 3;
  CHECK_THROWS_AS(validate_chain(chain), BadIndices);
  chain.bs_list[0].mode_b = 6;
  CHECK_THROWS_AS(validate_chain(chain), BadIndices);
  chain.bs_list.clear();
  CHECK_THROWS_AS(validate_chain(chain), BadIndices);
}

TEST_CASE("one-cavity intracavity chain matches the single-cavity optics") {
  const SystemParams p = testing_support::strong_params();
  const SystemEvaluation chain = build_chain(p, make_chain(1, ChainScheme::TwoMode, 0, 0), IoMode::Intracavity);
  const SystemEvaluation single = evaluate(p, Scheme::Single);
  REQUIRE(chain.report);
  REQUIRE(single.report);
  CHECK(chain.report->labels.size() == 2);
  CHECK(chain.report->between("1", "2") == doctest::Approx(single.report->between("1", "2")).epsilon(1e-9));
}

TEST_CASE("chain covers the optical modes and stays physical") {
  const SystemParams p = testing_support::strong_params();
  const SystemEvaluation ev = build_chain(p, make_chain(3, ChainScheme::TwoMode, pi / 4, pi / 2));
  REQUIRE(ev.report);
  CHECK(ev.report->labels.size() == 6);
  CHECK(ev.report->labels.front().name == "1");
  CHECK(ev.report->labels.back().name == "6");
  CHECK(ev.covariance->mode_count() == 9);
  CHECK(physicality_margin(ev.covariance->V) > -1e-9 * ev.covariance->V.norm());
  CHECK(ev.steady_residual <= kSteadyStateTolerance);
  CHECK(ev.lyapunov_residual <= kLyapunovTolerance);

  const SystemEvaluation four = build_chain(p, make_chain(2, ChainScheme::FourMode, pi / 4, pi / 2));
  REQUIRE(four.report);
  CHECK(four.report->labels.size() == 8);
}

TEST_CASE("instability is reported by evaluate and thrown by build_chain") {
  const SystemParams p = testing_support::unstable_params();
  SystemEvaluation ev;
  CHECK_NOTHROW(ev = evaluate(p, Scheme::TwoCavityBS));
  CHECK_FALSE(ev.stability.stable);
  CHECK_FALSE(ev.report);
  CHECK_THROWS_AS(build_chain(p, make_chain(2, ChainScheme::TwoMode, pi / 4, pi / 2)), UnstableSystem);
}

TEST_CASE("two cavity report labels and io modes") {
  const SystemParams p = testing_support::strong_params();
  for (IoMode io : {IoMode::Paper, IoMode::Intracavity}) {
    const SystemEvaluation ev = evaluate(p, Scheme::TwoCavityBS, {pi / 4, pi / 2}, io);
    REQUIRE(ev.report);
    CHECK(ev.report->labels.size() == 4);
    CHECK(ev.report->labels[2].name == "3");
    CHECK(ev.report->labels[2].cavity == 1);
    CHECK(ev.models.size() == 2);
    CHECK(ev.models[0].tag == (io == IoMode::Paper ? ConfigTag::OutputFolded : ConfigTag::SingleIntracavity));
  }
}

TEST_CASE("enum names") {
  CHECK(parse_chain_scheme("four-mode") == ChainScheme::FourMode);
  CHECK(to_string(ChainScheme::TwoMode) == "two-mode");
  CHECK(parse_io_mode("intracavity") == IoMode::Intracavity);
  CHECK(to_string(IoMode::Paper) == "paper");
  CHECK_THROWS_AS(parse_io_mode("outside"), ConfigError);
  CHECK(modes_per_cavity(ChainScheme::FourMode) == 5);
}

}
