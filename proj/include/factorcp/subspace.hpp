#pragma once

#include <Eigen/Dense>

namespace fcp {

/// p x q matrix with orthonormal, sign-normalized columns.
class SubspaceBasis {
 public:
  /// Validates orthonormality (1e-10) and applies the sign convention.
  explicit SubspaceBasis(Eigen::MatrixXd basis);

  /// Orthonormal basis of the column span of an arbitrary full-rank matrix.
  static SubspaceBasis span_of(const Eigen::MatrixXd& columns);

  Eigen::Index p() const noexcept { return basis_.rows(); }
  Eigen::Index q() const noexcept { return basis_.cols(); }
  const Eigen::MatrixXd& matrix() const noexcept { return basis_; }

  /// basis * basis'
  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

 private:
  Eigen::MatrixXd basis_;
};

/// max |O'O - I| entry.
double orthonormality_defect(const Eigen::MatrixXd& basis);

/// sqrt(1 - ||O1'O2||_F^2 / min(q1, q2)), in [0, 1].
double subspace_distance(const SubspaceBasis& s1, const SubspaceBasis& s2);

/// Flips each column so its entries sum to a positive value. A column whose
/// sum vanishes (up to roundoff) is flipped so its first entry of largest
/// magnitude is positive.
SubspaceBasis normalize_signs(Eigen::MatrixXd basis);

/// In-place version of the sign convention; no orthonormality check.
void apply_sign_convention(Eigen::Ref<Eigen::MatrixXd> basis);
void apply_column_sign(Eigen::Ref<Eigen::VectorXd> column);

/// Basis of the (p - q)-dimensional orthogonal complement.
SubspaceBasis orthogonal_complement(const SubspaceBasis& basis);

}  // namespace fcp
