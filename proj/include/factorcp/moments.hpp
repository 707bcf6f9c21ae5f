#pragma once

#include "factorcp/panel.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fcp {

enum class Regime { First = 1, Second = 2 };

/// Hypothesized split: regime 1 is y_1..y_r, regime 2 is y_{r+1}..y_n.
struct SplitSpec {
  Eigen::Index n = 0;
  Eigen::Index r = 0;

  static SplitSpec at_fraction(double gamma, Eigen::Index n);
  static SplitSpec at_index(Eigen::Index r, Eigen::Index n);

  double gamma() const noexcept { return static_cast<double>(r) / static_cast<double>(n); }

  /// 0-based half-open time range [begin, end) of a regime.
  Eigen::Index begin(Regime regime) const noexcept { return regime == Regime::First ? 0 : r; }
  Eigen::Index end(Regime regime) const noexcept { return regime == Regime::First ? r : n; }
  Eigen::Index length(Regime regime) const noexcept { return end(regime) - begin(regime); }
};

/// Lagged cross moments Sigma_hat(h), h = 1..h0, for one regime and their
/// pooled Gram sum M_hat = sum_h Sigma_hat(h) Sigma_hat(h)'.
struct LaggedMomentSet {
  int h0 = 1;
  Regime regime = Regime::First;
  std::vector<Eigen::MatrixXd> sigma_y;  // sigma_y[h - 1]
  Eigen::MatrixXd m_hat;
};

inline constexpr int kMaxLag = 10;

/// (1/n) sum_t y_t y_{t+h}' over t with both t and t+h inside the regime.
/// The divisor is the full sample size n, not the regime length.
Eigen::MatrixXd lagged_cross_moment(const TimeSeriesPanel& panel, const SplitSpec& split, Regime regime,
                                    int h);

LaggedMomentSet pooled_moment(const TimeSeriesPanel& panel, const SplitSpec& split, Regime regime, int h0);

/// True when the regime has at least h0 + 1 time points.
bool regime_supports_lag(const SplitSpec& split, Regime regime, int h0) noexcept;

}  // namespace fcp
