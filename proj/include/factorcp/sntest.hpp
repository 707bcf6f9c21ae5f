#pragma once

#include "factorcp/critvals.hpp"
#include "factorcp/loading.hpp"
#include "factorcp/locate.hpp"
#include "factorcp/panel.hpp"

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace fcp {

/// z_t = b' y_t for a unit vector b.
struct ProjectedSeries {
  Eigen::VectorXd z;
  Eigen::VectorXd b;

  static ProjectedSeries project(const TimeSeriesPanel& panel, const Eigen::VectorXd& b);
};

/// Sample variance of z over the 0-based half-open window [begin, end):
/// mean of squares minus squared mean, clamped at zero. Needs two points.
double window_variance(const ProjectedSeries& z, Eigen::Index begin, Eigen::Index end);

/// Prefix sums of (z - zbar) and (z - zbar)^2 for O(1) window variances.
class WindowMoments {
 public:
  explicit WindowMoments(const Eigen::VectorXd& z);

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(s1_.size()) - 1; }

  /// Variance over [begin, end); zero for windows shorter than two points.
  double variance(Eigen::Index begin, Eigen::Index end) const noexcept;

  double mean_square() const noexcept { return mean_square_; }

 private:
  std::vector<double> s1_;
  std::vector<double> s2_;
  double mean_square_ = 0.0;
};

struct SnStatistic {
  double t_n = 0.0;
  Eigen::Index argmax_r = 0;  // regime 1 is y_1..y_r
};

/// Self-normalized statistic
///   T_n = max_{n eta1 < r < n eta2} {r(n-r)(nu_{1,r} - nu_{r+1,n})}^2 / (n^2 V_r).
SnStatistic sn_statistic(const ProjectedSeries& z, double eta1, double eta2);

/// V_r for a single split r, exposed for testing.
double sn_normalizer(const WindowMoments& moments, Eigen::Index r);

struct Projection {
  Eigen::VectorXd b;
  int b_source = 1;
  BoundaryEstimates boundaries;
};

/// Unit b inside the complement of the stronger boundary regime that is
/// farthest from the other regime's complement.
Projection choose_projection(const TimeSeriesPanel& panel, double eta1, double eta2, int h0, FactorCount k1,
                             FactorCount k2);

/// b = B_from u, u the right singular vector of B_other' B_from for the
/// smallest singular value.
Eigen::VectorXd farthest_direction(const SubspaceBasis& from, const SubspaceBasis& other);

struct SnTestResult {
  double t_n = 0.0;
  Eigen::Index argmax_r = 0;
  Eigen::Index n = 0;
  int b_source = 1;
  int k1 = 0;
  int k2 = 0;
  Eigen::VectorXd b;
  std::map<double, double, std::greater<>> critical_values;
  std::map<double, bool, std::greater<>> reject;
  double p_value = 1.0;
};

struct TestOptions {
  int h0 = 1;
  FactorCount k1 = kAutoCount;
  FactorCount k2 = kAutoCount;
  std::vector<double> alphas{0.05};
};

SnTestResult test_change_point(const TimeSeriesPanel& panel, double eta1, double eta2,
                               const CriticalValueTable& cv_table, const TestOptions& options = {});

struct SegmentOptions {
  int h0 = 1;
  double alpha = 0.05;
  int num_intervals = 100;
  Eigen::Index min_len = 60;
  std::uint64_t seed = 1;
  FactorCount k1 = kAutoCount;
  FactorCount k2 = kAutoCount;
};

struct SegmentResult {
  std::vector<double> fractions;       // change fractions in (0, 1), ascending
  std::vector<Eigen::Index> indices;   // r: last index of the earlier segment, 1-based count
};

/// Wild binary segmentation driven by the self-normalized test.
SegmentResult segment_multiple(const TimeSeriesPanel& panel, double eta1, double eta2,
                               const CriticalValueTable& cv_table, const SegmentOptions& options = {});

}  // namespace fcp
