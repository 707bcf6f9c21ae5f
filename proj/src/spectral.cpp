#include "factorcp/spectral.hpp"

#include "factorcp/error.hpp"

#include <algorithm>
#include <cmath>

namespace fcp {
namespace {

constexpr double kSpectralTol = 1e-10;
constexpr Eigen::Index kMaxLanczosSteps = 200;

}  // namespace

double dense_spectral_norm(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double psd_spectral_norm(const Eigen::MatrixXd& gram, Eigen::VectorXd* start) {
  const auto m = gram.rows();
  if (m <= kDenseSpectralLimit) return dense_spectral_norm(gram);

  const auto steps = std::min(m, kMaxLanczosSteps);
  Eigen::MatrixXd basis(m, steps);
  Eigen::VectorXd alpha(steps), beta(steps);
  if (start && start->size() == m && start->norm() > 0.0) {
    basis.col(0) = start->normalized();
  } else {
    basis.col(0) = Eigen::VectorXd::Ones(m) / std::sqrt(static_cast<double>(m));
  }

  Eigen::VectorXd w(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz;
  for (Eigen::Index j = 0; j < steps; ++j) {
    w.noalias() = gram.selfadjointView<Eigen::Lower>() * basis.col(j);
    alpha(j) = basis.col(j).dot(w);
    // full reorthogonalization, applied twice
    for (int pass = 0; pass < 2; ++pass) {
      w.noalias() -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    }
    beta(j) = w.norm();

    ritz.computeFromTridiagonal(alpha.head(j + 1), beta.head(j), Eigen::ComputeEigenvectors);
    if (ritz.info() != Eigen::Success) break;
    const double theta = ritz.eigenvalues()(j);
    const double residual = beta(j) * std::abs(ritz.eigenvectors()(j, j));
    const bool invariant = beta(j) <= kSpectralTol * std::max(theta, 0.0);
    if (theta <= 0.0 && invariant) return 0.0;
    if (invariant || residual <= kSpectralTol * theta) {
      if (start) *start = basis.leftCols(j + 1) * ritz.eigenvectors().col(j);
      return theta;
    }
    if (j + 1 < steps) basis.col(j + 1) = w / beta(j);
  }
  return dense_spectral_norm(gram);
}

}  // namespace fcp
