#include "factorcp/dgp.hpp"
#include "factorcp/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace fcp;

TEST_CASE("same seed gives a bit-identical panel") {
  DgpSpec spec;
  spec.seed = 77;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK((a.panel.values().array() == b.panel.values().array()).all());
  spec.seed = 78;
  CHECK_FALSE((generate(spec).panel.values().array() == a.panel.values().array()).all());
}

TEST_CASE("panel is assembled regime by regime") {
  DgpSpec spec;
  spec.n = 50;
  spec.p = 6;
  spec.gamma0 = 0.3;
  const auto sim = generate(spec);
  REQUIRE(sim.truth.r0 == 15);
  for (Eigen::Index t = 0; t < spec.n; ++t) {
    const Eigen::VectorXd signal = t < sim.truth.r0 ? Eigen::VectorXd(sim.truth.a1 * sim.truth.factors1.row(t).transpose())
                                                    : Eigen::VectorXd(sim.truth.a2 * sim.truth.factors2.row(t).transpose());
    const Eigen::VectorXd expected = signal + sim.truth.noise.row(t).transpose();
    CHECK((sim.panel.values().row(t).transpose() - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK(sim.truth.a1.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("without a change both regimes share the loadings") {
  DgpSpec spec;
  spec.gamma0.reset();
  const auto sim = generate(spec);
  CHECK(sim.truth.r0 == spec.n);
  CHECK((sim.truth.a1.array() == sim.truth.a2.array()).all());
}

TEST_CASE("coordinate variances match the stationary AR(1) formula") {
  DgpSpec spec;
  spec.n = 40000;
  spec.p = 4;
  spec.gamma0.reset();
  const auto sim = generate(spec);
  // var(x_j) = sd^2 / (1 - phi_j^2); the noise adds 1.
  Eigen::VectorXd factor_var(3);
  for (int j = 0; j < 3; ++j) factor_var(j) = 4.0 / (1.0 - spec.ar_coeff(j) * spec.ar_coeff(j));
  const auto& y = sim.panel.values();
  for (Eigen::Index i = 0; i < spec.p; ++i) {
    const double expected = (sim.truth.a1.row(i).array().square() * factor_var.transpose().array()).sum() + 1.0;
    const auto col = y.col(i);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    CHECK(var == doctest::Approx(expected).epsilon(0.08));
  }
}

TEST_CASE("independent noise is uncorrelated") {
  const auto e = simulate_equicorrelated_noise(1000, 5, 0.0, 3);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = i + 1; j < 5; ++j) {
      const auto a = e.col(i).array() - e.col(i).mean();
      const auto b = e.col(j).array() - e.col(j).mean();
      const double rho = (a * b).sum() / std::sqrt(a.square().sum() * b.square().sum());
      CHECK(std::abs(rho) < 0.1);
    }
  const auto c = simulate_equicorrelated_noise(20000, 2, 0.5, 4);
  const auto a = c.col(0).array() - c.col(0).mean();
  const auto b = c.col(1).array() - c.col(1).mean();
  CHECK((a * b).sum() / std::sqrt(a.square().sum() * b.square().sum()) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("strong loadings grow linearly in p") {
  double per_p[3];
  int idx = 0;
  for (Eigen::Index p : {20, 40, 100}) {
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto a = simulate_loadings(p, 3, 0.0, s, 1);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
      sum += svd.singularValues()(0) * svd.singularValues()(0);
    }
    per_p[idx++] = sum / 20.0 / static_cast<double>(p);
  }
  for (double r : {per_p[1] / per_p[0], per_p[2] / per_p[0]}) {
    CHECK(r >= 0.5);
    CHECK(r <= 2.0);
  }
  const auto weak = simulate_loadings(100, 3, 0.25, 1, 1);
  CHECK(weak.cwiseAbs().maxCoeff() <= std::pow(100.0, -0.125));
}

TEST_CASE("DGP parameter validation") {
  DgpSpec spec;
  spec.gamma0 = 1.2;
  CHECK_THROWS_AS(generate(spec), Error);
  spec = DgpSpec{};
  spec.rho_e = 1.0;
  CHECK_THROWS_AS(generate(spec), Error);
  spec = DgpSpec{};
  spec.k1 = 0;
  CHECK_THROWS_AS(generate(spec), Error);
  spec = DgpSpec{};
  spec.delta1 = 1.5;
  CHECK_THROWS_AS(generate(spec), Error);
}
