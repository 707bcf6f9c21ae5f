#include "factorcp/sntest.hpp"

#include "factorcp/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fcp {
namespace {

// Relative level below which a normalizer or numerator counts as zero.
constexpr double kDegenerateTol = 1e-28;

}  // namespace

ProjectedSeries ProjectedSeries::project(const TimeSeriesPanel& panel, const Eigen::VectorXd& b) {
  if (b.size() != panel.p()) throw Error(ErrorKind::DimensionMismatch, "projection vector has the wrong length");
  const double norm = b.norm();
  if (!(std::abs(norm - 1.0) <= 1e-10)) throw Error(ErrorKind::InvalidParams, "projection vector must have unit norm");
  return ProjectedSeries{panel.values() * b, b};
}

double window_variance(const ProjectedSeries& z, Eigen::Index begin, Eigen::Index end) {
  if (begin < 0 || end > z.z.size() || begin > end) {
    throw Error(ErrorKind::InvalidParams, "window outside the series");
  }
  const auto length = end - begin;
  if (length < 2) throw Error(ErrorKind::WindowTooShort, "variance window needs at least 2 points");
  const auto window = z.z.segment(begin, length);
  const double m1 = window.mean();
  const double m2 = window.squaredNorm() / static_cast<double>(length);
  return std::max(0.0, m2 - m1 * m1);
}

WindowMoments::WindowMoments(const Eigen::VectorXd& z) {
  const auto n = z.size();
  const double mean = n > 0 ? z.mean() : 0.0;
  s1_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  s2_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (Eigen::Index t = 0; t < n; ++t) {
    const double c = z(t) - mean;
    s1_[static_cast<std::size_t>(t) + 1] = s1_[static_cast<std::size_t>(t)] + c;
    s2_[static_cast<std::size_t>(t) + 1] = s2_[static_cast<std::size_t>(t)] + c * c;
  }
  mean_square_ = n > 0 ? s2_.back() / static_cast<double>(n) : 0.0;
}

double WindowMoments::variance(Eigen::Index begin, Eigen::Index end) const noexcept {
  const auto length = end - begin;
  if (length < 2) return 0.0;
  const auto b = static_cast<std::size_t>(begin);
  const auto e = static_cast<std::size_t>(end);
  const double inv = 1.0 / static_cast<double>(length);
  const double m1 = (s1_[e] - s1_[b]) * inv;
  const double m2 = (s2_[e] - s2_[b]) * inv;
  return std::max(0.0, m2 - m1 * m1);
}

double sn_normalizer(const WindowMoments& moments, Eigen::Index r) {
  const auto n = moments.size();
  if (r < 1 || r >= n) throw Error(ErrorKind::InvalidParams, "split outside 1..n-1");
  const double rd = static_cast<double>(r);
  const double tail = static_cast<double>(n - r);
  double sum = 0.0;
  // i = 1..r: nu_{1,i} vs nu_{i+1,r}; windows [0, i) and [i, r).
  for (Eigen::Index i = 2; i + 2 <= r; ++i) {
    const double id = static_cast<double>(i);
    const double term = id * (rd - id) * (moments.variance(0, i) - moments.variance(i, r)) / rd;
    sum += term * term;
  }
  // i = r+1..n: nu_{r+1,i-1} vs nu_{i,n}; windows [r, i-1) and [i-1, n).
  for (Eigen::Index i = r + 3; i + 1 <= n; ++i) {
    const double id = static_cast<double>(i);
    const double term = (id - rd - 1.0) * (static_cast<double>(n) - id + 1.0) *
                        (moments.variance(r, i - 1) - moments.variance(i - 1, n)) / tail;
    sum += term * term;
  }
  return sum / static_cast<double>(n);
}

SnStatistic sn_statistic(const ProjectedSeries& z, double eta1, double eta2) {
  const FractionGrid grid(eta1, eta2);
  const auto n = z.z.size();
  const auto splits = grid.candidates(n);
  if (splits.empty()) throw Error(ErrorKind::GridEmpty, "no split with n*eta1 < r < n*eta2");
  const WindowMoments moments(z.z);
  const double nd = static_cast<double>(n);
  const double ms = moments.mean_square();
  if (!(ms > 0.0)) throw Error(ErrorKind::DegenerateNormalizer, "projected series is constant");

  SnStatistic best{-1.0, splits.front()};
  for (auto r : splits) {
    const double rd = static_cast<double>(r);
    const double diff = rd * (nd - rd) * (moments.variance(0, r) - moments.variance(r, n));
    const double numerator = diff * diff;
    const double v = sn_normalizer(moments, r);
    double ratio = 0.0;
    const bool v_zero = v <= kDegenerateTol * nd * nd * ms * ms;
    const bool num_zero = numerator <= kDegenerateTol * nd * nd * nd * nd * ms * ms;
    if (v_zero) {
      if (!num_zero) {
        throw Error(ErrorKind::DegenerateNormalizer, "V_r vanishes at r = " + std::to_string(r));
      }
    } else {
      ratio = numerator / (nd * nd * v);
    }
    if (ratio > best.t_n) best = SnStatistic{ratio, r};
  }
  return best;
}

Eigen::VectorXd farthest_direction(const SubspaceBasis& from, const SubspaceBasis& other) {
  if (from.p() != other.p()) throw Error(ErrorKind::DimensionMismatch, "bases live in different spaces");
  const Eigen::MatrixXd cross = other.matrix().transpose() * from.matrix();
  // Right singular vectors of `cross` are eigenvectors of cross' cross.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cross.transpose() * cross);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "eigensolver failed while choosing the projection");
  }
  Eigen::VectorXd b = from.matrix() * solver.eigenvectors().col(0);
  b.normalize();
  apply_column_sign(b);
  return b;
}

Projection choose_projection(const TimeSeriesPanel& panel, double eta1, double eta2, int h0, FactorCount k1,
                             FactorCount k2) {
  auto boundaries = estimate_boundaries(panel, FractionGrid(eta1, eta2), h0, k1, k2);
  const double norm1 = boundaries.first.eigen.eigenvalues(0);
  const double norm2 = boundaries.second.eigen.eigenvalues(0);
  if (norm2 > norm1) {
    auto b = farthest_direction(boundaries.second.b_hat, boundaries.first.b_hat);
    return Projection{std::move(b), 2, std::move(boundaries)};
  }
  auto b = farthest_direction(boundaries.first.b_hat, boundaries.second.b_hat);
  return Projection{std::move(b), 1, std::move(boundaries)};
}

SnTestResult test_change_point(const TimeSeriesPanel& panel, double eta1, double eta2,
                               const CriticalValueTable& cv_table, const TestOptions& options) {
  auto projection = choose_projection(panel, eta1, eta2, options.h0, options.k1, options.k2);
  const auto z = ProjectedSeries::project(panel, projection.b);
  const auto stat = sn_statistic(z, eta1, eta2);

  SnTestResult out;
  out.t_n = stat.t_n;
  out.argmax_r = stat.argmax_r;
  out.n = panel.n();
  out.b_source = projection.b_source;
  out.k1 = projection.boundaries.first.k;
  out.k2 = projection.boundaries.second.k;
  out.b = std::move(projection.b);
  out.p_value = cv_table.p_value(stat.t_n);
  for (double alpha : options.alphas) {
    const double cv = cv_table.critical_value(alpha);
    out.critical_values[alpha] = cv;
    out.reject[alpha] = stat.t_n > cv;
  }
  return out;
}

}  // namespace fcp
