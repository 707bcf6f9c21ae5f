#include "factorcp/locate.hpp"
#include "factorcp/moments.hpp"
#include "factorcp/objective_kernels.hpp"
#include "factorcp/spectral.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace fcp;

namespace {

struct ExactModel {
  Eigen::MatrixXd a1;
  Eigen::MatrixXd a2;
  SubspaceBasis b1;
  SubspaceBasis b2;
};

// Loadings with orthogonal column spans and their true complements.
ExactModel orthogonal_model(Eigen::Index p, std::uint64_t seed) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(test::gaussian_matrix(p, 6, seed));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, 6);
  const Eigen::MatrixXd mix = test::gaussian_matrix(3, 3, seed + 1) + 3.0 * Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd a1 = q.leftCols(3) * mix;
  Eigen::MatrixXd a2 = q.rightCols(3) * mix.transpose();
  return {a1, a2, orthogonal_complement(SubspaceBasis::span_of(a1)),
          orthogonal_complement(SubspaceBasis::span_of(a2))};
}

}  // namespace

TEST_CASE("objective vanishes at the true split of an exact model") {
  const Eigen::Index n = 200, r0 = 100;
  const auto model = orthogonal_model(8, 3);
  const auto panel = test::exact_two_regime(n, r0, model.a1, model.a2, 5);
  const auto split = SplitSpec::at_index(r0, n);
  const double scale = dense_spectral_norm(pooled_moment(panel, split, Regime::First, 1).m_hat) +
                       dense_spectral_norm(pooled_moment(panel, split, Regime::Second, 1).m_hat);
  CHECK(objective(panel, 0.5, model.b1, model.b2, 1) <= 1e-10 * scale);
  for (double gamma : {0.2, 0.4, 0.45, 0.55, 0.8}) CHECK(objective(panel, gamma, model.b1, model.b2, 1) > 1e-6 * scale);
}

TEST_CASE("objective on a hand-built two-dimensional panel") {
  // y = (1,0), (0,1), (1,1), (2,0); split after y_2.
  // Sigma1 = y1 y2'/4 = [[0,1],[0,0]]/4, Sigma2 = y3 y4'/4 = [[2,0],[2,0]]/4.
  // B1 = e1: ||e1' Sigma1||^2 = 1/16.  B2 = I: sigma_max(Sigma2)^2 = (2 sqrt2 / 4)^2 = 1/2.
  const auto panel = test::panel_from({{1, 0}, {0, 1}, {1, 1}, {2, 0}});
  Eigen::MatrixXd e1(2, 1);
  e1 << 1, 0;
  const SubspaceBasis b1(e1);
  const SubspaceBasis b2(Eigen::MatrixXd::Identity(2, 2));
  CHECK(objective(panel, 0.5, b1, b2, 1) == doctest::Approx(1.0 / 16.0 + 1.0 / 2.0).epsilon(1e-14));
}

TEST_CASE("fast objective kernel matches the reference") {
  for (Eigen::Index p : {6, 20, 80}) {
    const Eigen::Index n = p == 80 ? 160 : 300;
    const auto panel = test::gaussian_panel(n, p, static_cast<std::uint64_t>(p));
    const auto b1 = SubspaceBasis::span_of(test::gaussian_matrix(p, p - 3, 1));
    const auto b2 = SubspaceBasis::span_of(test::gaussian_matrix(p, p - 2, 2));
    const auto splits = FractionGrid(0.1, 0.9).candidates(n);
    for (int h0 : {1, 2}) {
      const auto ref = objective_trace_reference(panel, splits, b1, b2, h0);
      const auto fast = objective_trace_parallel(panel, splits, b1, b2, h0, 1);
      REQUIRE(ref.total.size() == fast.total.size());
      for (std::size_t i = 0; i < ref.total.size(); ++i) {
        CHECK(fast.regime1[i] == doctest::Approx(ref.regime1[i]).epsilon(1e-10));
        CHECK(fast.regime2[i] == doctest::Approx(ref.regime2[i]).epsilon(1e-10));
        CHECK(fast.total[i] == fast.regime1[i] + fast.regime2[i]);
      }
    }
  }
}

TEST_CASE("fast objective kernel is bit-identical across thread counts") {
  const auto panel = test::gaussian_panel(500, 12, 8);
  const auto b1 = SubspaceBasis::span_of(test::gaussian_matrix(12, 9, 3));
  const auto b2 = SubspaceBasis::span_of(test::gaussian_matrix(12, 9, 4));
  const auto splits = FractionGrid(0.1, 0.9).candidates(500);
  const auto one = objective_trace_parallel(panel, splits, b1, b2, 2, 1);
  for (int threads : {2, 3, 5}) {
    const auto many = objective_trace_parallel(panel, splits, b1, b2, 2, threads);
    CHECK(one.total == many.total);
  }
}
