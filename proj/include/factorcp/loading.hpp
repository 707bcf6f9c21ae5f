#pragma once

#include "factorcp/moments.hpp"
#include "factorcp/subspace.hpp"

#include <Eigen/Dense>

#include <optional>

namespace fcp {

/// A factor count, or std::nullopt for the eigenvalue-ratio estimate.
using FactorCount = std::optional<int>;
inline constexpr FactorCount kAutoCount = std::nullopt;

struct EigenSummary {
  Eigen::VectorXd eigenvalues;   // descending, clamped at 0
  Eigen::MatrixXd eigenvectors;  // columns match eigenvalues, sign-normalized
};

struct LoadingEstimate {
  SubspaceBasis q_hat;  // leading k eigenvectors
  SubspaceBasis b_hat;  // remaining p - k
  int k = 0;
  EigenSummary eigen;
};

EigenSummary eigen_decompose(const LaggedMomentSet& mset);
EigenSummary eigen_decompose(const Eigen::MatrixXd& symmetric);

/// argmin_{1 <= k <= p/2} lambda_{k+1} / lambda_k.
///
/// Eigenvalues are floored at eps * p * lambda_max and any k whose
/// denominator sits on the floor is skipped, so an exactly low-rank M_hat
/// does not produce 0/0 ratios. Ties go to the smaller k.
int estimate_factor_count(const EigenSummary& eigen);

/// Splits an eigen-decomposition into leading-k and complement bases.
LoadingEstimate split_loading(EigenSummary eigen, int k);

LoadingEstimate estimate_loading(const TimeSeriesPanel& panel, const SplitSpec& split, Regime regime, int h0,
                                 FactorCount k);

}  // namespace fcp
