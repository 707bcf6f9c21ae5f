#include "factorcp/subspace.hpp"

#include "factorcp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fcp {
namespace {

constexpr double kOrthoTol = 1e-10;

}  // namespace

double orthonormality_defect(const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return 0.0;
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

void apply_column_sign(Eigen::Ref<Eigen::VectorXd> column) {
  const double sum = column.sum();
  const double scale = column.cwiseAbs().sum();
  // A sum this close to zero is a tie: decided by the largest entry instead.
  if (std::abs(sum) > 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    if (sum < 0.0) column = -column;
    return;
  }
  Eigen::Index largest = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    // strict > keeps the first of equal magnitudes
    if (std::abs(column(i)) > best) {
      best = std::abs(column(i));
      largest = i;
    }
  }
  if (column.size() > 0 && column(largest) < 0.0) column = -column;
}

void apply_sign_convention(Eigen::Ref<Eigen::MatrixXd> basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::VectorXd column = basis.col(j);
    apply_column_sign(column);
    basis.col(j) = column;
  }
}

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
    throw Error(ErrorKind::InvalidParams, "subspace dimension must satisfy 1 <= q <= p");
  }
  const double defect = orthonormality_defect(basis_);
  if (!(defect <= kOrthoTol)) {
    throw Error(ErrorKind::NotOrthonormal, "orthonormality defect " + std::to_string(defect));
  }
  apply_sign_convention(basis_);
}

SubspaceBasis SubspaceBasis::span_of(const Eigen::MatrixXd& columns) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(columns);
  const auto rank = qr.rank();
  if (rank < columns.cols()) {
    throw Error(ErrorKind::InvalidParams, "matrix is rank deficient (rank " + std::to_string(rank) + ")");
  }
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(columns.rows(), rank);
  return SubspaceBasis(std::move(q));
}

double subspace_distance(const SubspaceBasis& s1, const SubspaceBasis& s2) {
  if (s1.p() != s2.p()) {
    throw Error(ErrorKind::DimensionMismatch,
                "ambient dimensions differ: " + std::to_string(s1.p()) + " vs " + std::to_string(s2.p()));
  }
  // 1 - tr(P1 P2)/q_small equals ||(I - P_big) O_small||_F^2 / q_small; the
  // residual form keeps nearly equal subspaces from cancelling to roundoff.
  const bool first_small = s1.q() <= s2.q();
  const auto& small = first_small ? s1.matrix() : s2.matrix();
  const auto& big = first_small ? s2.matrix() : s1.matrix();
  const Eigen::MatrixXd residual = small - big * (big.transpose() * small);
  const double radicand = std::clamp(residual.squaredNorm() / static_cast<double>(small.cols()), 0.0, 1.0);
  return std::sqrt(radicand);
}

SubspaceBasis normalize_signs(Eigen::MatrixXd basis) { return SubspaceBasis(std::move(basis)); }

SubspaceBasis orthogonal_complement(const SubspaceBasis& basis) {
  const auto p = basis.p();
  const auto q = basis.q();
  if (q >= p) throw Error(ErrorKind::FullSpace, "basis already spans the whole space");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis.matrix());
  const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd complement = full.rightCols(p - q);
  if (orthonormality_defect(complement) > kOrthoTol) {
    complement = Eigen::HouseholderQR<Eigen::MatrixXd>(complement).householderQ() *
                 Eigen::MatrixXd::Identity(p, p - q);
  }
  return SubspaceBasis(std::move(complement));
}

}  // namespace fcp
