#pragma once

#include "factorcp/panel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace fcp {

/// Two-regime factor model
///   y_t = A1 x_{t,1} + e_t  (t <= r0),   y_t = A2 x_{t,2} + e_t  (t > r0)
/// with uniform loadings on [-p^{-delta/2}, p^{-delta/2}], independent AR(1)
/// factors and equicorrelated Gaussian noise.
struct DgpSpec {
  Eigen::Index n = 400;
  Eigen::Index p = 20;
  int k1 = 3;
  int k2 = 3;
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::optional<double> gamma0 = 0.5;  // nullopt: no change
  double rho_e = 0.5;
  std::vector<double> ar_coeffs{0.9, -0.7, 0.8};
  double factor_noise_sd = 2.0;
  int burn_in = 200;
  std::uint64_t seed = 1;

  void validate() const;
  /// AR coefficient of factor j (cycled when k exceeds the list).
  double ar_coeff(int j) const { return ar_coeffs[static_cast<std::size_t>(j) % ar_coeffs.size()]; }
};

struct DgpTruth {
  Eigen::MatrixXd a1;         // p x k1
  Eigen::MatrixXd a2;         // p x k2 (equal to a1 without a change)
  std::optional<double> gamma0;
  Eigen::Index r0 = 0;        // y_1..y_{r0} use a1; equals n without a change
  Eigen::MatrixXd factors1;   // n x k1
  Eigen::MatrixXd factors2;   // n x k2
  Eigen::MatrixXd noise;      // n x p
};

struct Simulation {
  TimeSeriesPanel panel;
  DgpTruth truth;
};

Simulation generate(const DgpSpec& spec);

/// Independent AR(1) chains, one column per coefficient, after burn-in.
Eigen::MatrixXd simulate_ar1_factors(Eigen::Index n, const std::vector<double>& coeffs, double innovation_sd,
                                     int burn_in, std::uint64_t seed, std::uint32_t stream_index);

/// Gaussian rows with unit variances and common correlation rho_e.
Eigen::MatrixXd simulate_equicorrelated_noise(Eigen::Index n, Eigen::Index p, double rho_e, std::uint64_t seed);

/// p x k matrix of iid uniform draws on [-p^{-delta/2}, p^{-delta/2}].
Eigen::MatrixXd simulate_loadings(Eigen::Index p, int k, double delta, std::uint64_t seed,
                                  std::uint32_t stream_index);

}  // namespace fcp
