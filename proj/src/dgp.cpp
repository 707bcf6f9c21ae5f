#include "factorcp/dgp.hpp"

#include "factorcp/error.hpp"
#include "factorcp/rng.hpp"

#include <cmath>
#include <random>
#include <string>

namespace fcp {

void DgpSpec::validate() const {
  auto fail = [](const std::string& message) { throw Error(ErrorKind::InvalidSpec, message); };
  if (n < 2) fail("n must be at least 2");
  if (p < 1) fail("p must be at least 1");
  if (k1 < 1 || k1 > p || k2 < 1 || k2 > p) fail("factor counts must lie in 1..p");
  if (!(delta1 >= 0.0 && delta1 <= 1.0 && delta2 >= 0.0 && delta2 <= 1.0)) fail("factor strengths must lie in [0, 1]");
  if (!(rho_e >= 0.0 && rho_e < 1.0)) fail("rho_e must lie in [0, 1)");
  if (gamma0 && !(*gamma0 > 0.0 && *gamma0 < 1.0)) fail("gamma0 must lie in (0, 1)");
  if (ar_coeffs.empty()) fail("at least one AR coefficient is required");
  for (double phi : ar_coeffs) {
    if (!(std::abs(phi) < 1.0)) fail("AR coefficients must satisfy |phi| < 1");
  }
  if (!(factor_noise_sd > 0.0)) fail("factor innovation sd must be positive");
  if (burn_in < 0) fail("burn-in must be non-negative");
}

Eigen::MatrixXd simulate_loadings(Eigen::Index p, int k, double delta, std::uint64_t seed,
                                  std::uint32_t stream_index) {
  PhiloxStream stream(seed, stream_id(StreamPurpose::Loadings, stream_index));
  const double half_width = std::pow(static_cast<double>(p), -delta / 2.0);
  Eigen::MatrixXd a(p, k);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (int j = 0; j < k; ++j) a(i, j) = half_width * (2.0 * stream.uniform() - 1.0);
  }
  return a;
}

Eigen::MatrixXd simulate_ar1_factors(Eigen::Index n, const std::vector<double>& coeffs, double innovation_sd,
                                     int burn_in, std::uint64_t seed, std::uint32_t stream_index) {
  PhiloxStream stream(seed, stream_id(StreamPurpose::Factors, stream_index));
  std::normal_distribution<double> normal(0.0, innovation_sd);
  const auto k = static_cast<Eigen::Index>(coeffs.size());
  Eigen::VectorXd state = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd x(n, k);
  for (Eigen::Index step = -burn_in; step < n; ++step) {
    for (Eigen::Index j = 0; j < k; ++j) state(j) = coeffs[static_cast<std::size_t>(j)] * state(j) + normal(stream);
    if (step >= 0) x.row(step) = state.transpose();
  }
  return x;
}

Eigen::MatrixXd simulate_equicorrelated_noise(Eigen::Index n, Eigen::Index p, double rho_e, std::uint64_t seed) {
  PhiloxStream stream(seed, stream_id(StreamPurpose::Noise));
  std::normal_distribution<double> normal;
  const double own = std::sqrt(1.0 - rho_e);
  const double common = std::sqrt(rho_e);
  Eigen::MatrixXd e(n, p);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < p; ++j) e(t, j) = own * normal(stream);
    const double g = common * normal(stream);
    e.row(t).array() += g;
  }
  return e;
}

Simulation generate(const DgpSpec& spec) {
  spec.validate();
  auto coeffs_for = [&spec](int k) {
    std::vector<double> out;
    for (int j = 0; j < k; ++j) out.push_back(spec.ar_coeff(j));
    return out;
  };

  DgpTruth truth;
  truth.gamma0 = spec.gamma0;
  truth.a1 = simulate_loadings(spec.p, spec.k1, spec.delta1, spec.seed, 1);
  truth.factors1 = simulate_ar1_factors(spec.n, coeffs_for(spec.k1), spec.factor_noise_sd, spec.burn_in, spec.seed, 1);
  if (spec.gamma0) {
    truth.a2 = simulate_loadings(spec.p, spec.k2, spec.delta2, spec.seed, 2);
    truth.factors2 =
        simulate_ar1_factors(spec.n, coeffs_for(spec.k2), spec.factor_noise_sd, spec.burn_in, spec.seed, 2);
    truth.r0 = FractionGrid::boundary_index(*spec.gamma0, spec.n);
  } else {
    truth.a2 = truth.a1;
    truth.factors2 = truth.factors1;
    truth.r0 = spec.n;
  }
  truth.noise = simulate_equicorrelated_noise(spec.n, spec.p, spec.rho_e, spec.seed);

  PanelMatrix y(spec.n, spec.p);
  for (Eigen::Index t = 0; t < spec.n; ++t) {
    if (t < truth.r0) {
      y.row(t) = (truth.a1 * truth.factors1.row(t).transpose()).transpose() + truth.noise.row(t);
    } else {
      y.row(t) = (truth.a2 * truth.factors2.row(t).transpose()).transpose() + truth.noise.row(t);
    }
  }
  return Simulation{TimeSeriesPanel(std::move(y)), std::move(truth)};
}

}  // namespace fcp
