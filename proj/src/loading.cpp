#include "factorcp/loading.hpp"

#include "factorcp/error.hpp"

#include <limits>
#include <string>

namespace fcp {

EigenSummary eigen_decompose(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "eigen_decompose needs a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  const auto p = symmetric.rows();
  EigenSummary out;
  out.eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  if (orthonormality_defect(out.eigenvectors) > 1e-10) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(out.eigenvectors);
    out.eigenvectors = qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
  }
  apply_sign_convention(out.eigenvectors);
  return out;
}

EigenSummary eigen_decompose(const LaggedMomentSet& mset) { return eigen_decompose(mset.m_hat); }

int estimate_factor_count(const EigenSummary& eigen) {
  const auto& lambda = eigen.eigenvalues;
  const auto p = lambda.size();
  if (p < 2) throw Error(ErrorKind::InvalidParams, "factor count needs p >= 2");
  const double lambda_max = lambda(0);
  if (!(lambda_max > std::numeric_limits<double>::min())) {
    throw Error(ErrorKind::DegenerateSpectrum, "all eigenvalues are zero");
  }
  const double floor = std::numeric_limits<double>::epsilon() * static_cast<double>(p) * lambda_max;
  const auto k_max = std::max<Eigen::Index>(1, p / 2);
  int best_k = 0;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 1; k <= k_max; ++k) {
    const double denominator = lambda(k - 1);
    if (denominator <= floor) continue;
    const double ratio = std::max(lambda(k), floor) / denominator;
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_k = static_cast<int>(k);
    }
  }
  if (best_k == 0) throw Error(ErrorKind::DegenerateSpectrum, "no eigenvalue above the relative floor");
  return best_k;
}

LoadingEstimate split_loading(EigenSummary eigen, int k) {
  const auto p = eigen.eigenvectors.rows();
  if (k < 1 || k >= p) {
    throw Error(ErrorKind::InvalidK, "factor count " + std::to_string(k) + " outside 1.." + std::to_string(p - 1));
  }
  SubspaceBasis q_hat(eigen.eigenvectors.leftCols(k));
  SubspaceBasis b_hat(eigen.eigenvectors.rightCols(p - k));
  return LoadingEstimate{std::move(q_hat), std::move(b_hat), k, std::move(eigen)};
}

LoadingEstimate estimate_loading(const TimeSeriesPanel& panel, const SplitSpec& split, Regime regime, int h0,
                                 FactorCount k) {
  if (k && (*k < 1 || *k >= panel.p())) {
    throw Error(ErrorKind::InvalidK,
                "factor count " + std::to_string(*k) + " outside 1.." + std::to_string(panel.p() - 1));
  }
  auto eigen = eigen_decompose(pooled_moment(panel, split, regime, h0));
  const int count = k ? *k : estimate_factor_count(eigen);
  return split_loading(std::move(eigen), count);
}

}  // namespace fcp
