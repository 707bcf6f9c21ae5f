#pragma once

#include <Eigen/Dense>

namespace fcp {

/// Largest eigenvalue of a symmetric positive semi-definite matrix, reading
/// only the lower triangle.
///
/// Up to kDenseSpectralLimit rows the full symmetric eigensolver is used.
/// Beyond that a Lanczos iteration with full reorthogonalization runs from
/// `start` until the Ritz residual drops below 1e-10 relative; `start` is
/// overwritten with the converged Ritz vector so callers can warm-start the
/// next call. Without convergence the dense solver takes over.
double psd_spectral_norm(const Eigen::MatrixXd& gram, Eigen::VectorXd* start = nullptr);

/// Dense reference: max |eigenvalue|.
double dense_spectral_norm(const Eigen::MatrixXd& symmetric);

inline constexpr Eigen::Index kDenseSpectralLimit = 64;

}  // namespace fcp
