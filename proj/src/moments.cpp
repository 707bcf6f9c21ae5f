#include "factorcp/moments.hpp"

#include "factorcp/error.hpp"

#include <cmath>
#include <string>

namespace fcp {

SplitSpec SplitSpec::at_fraction(double gamma, Eigen::Index n) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorKind::InvalidParams, "gamma must lie in [0, 1]");
  return at_index(FractionGrid::boundary_index(gamma, n), n);
}

SplitSpec SplitSpec::at_index(Eigen::Index r, Eigen::Index n) {
  if (n < 2 || r < 0 || r > n) {
    throw Error(ErrorKind::InvalidParams, "split index " + std::to_string(r) + " outside [0, " + std::to_string(n) + "]");
  }
  return SplitSpec{n, r};
}

bool regime_supports_lag(const SplitSpec& split, Regime regime, int h0) noexcept {
  return split.length(regime) >= h0 + 1;
}

Eigen::MatrixXd lagged_cross_moment(const TimeSeriesPanel& panel, const SplitSpec& split, Regime regime, int h) {
  if (h < 1 || h > kMaxLag) throw Error(ErrorKind::InvalidParams, "lag must lie in 1.." + std::to_string(kMaxLag));
  if (split.n != panel.n()) throw Error(ErrorKind::DimensionMismatch, "split built for a different sample size");
  const auto begin = split.begin(regime);
  const auto end = split.end(regime);
  if (end - begin < h + 1) {
    throw Error(ErrorKind::EmptySum, "regime " + std::to_string(static_cast<int>(regime)) + " has " +
                                         std::to_string(end - begin) + " points, lag " + std::to_string(h) +
                                         " needs " + std::to_string(h + 1));
  }
  const auto p = panel.p();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index t = begin; t + h < end; ++t) {
    sum.noalias() += panel.y(t).transpose() * panel.y(t + h);
  }
  return sum / static_cast<double>(panel.n());
}

LaggedMomentSet pooled_moment(const TimeSeriesPanel& panel, const SplitSpec& split, Regime regime, int h0) {
  if (h0 < 1 || h0 > kMaxLag) throw Error(ErrorKind::InvalidParams, "h0 must lie in 1.." + std::to_string(kMaxLag));
  LaggedMomentSet out;
  out.h0 = h0;
  out.regime = regime;
  out.m_hat = Eigen::MatrixXd::Zero(panel.p(), panel.p());
  out.sigma_y.reserve(static_cast<std::size_t>(h0));
  for (int h = 1; h <= h0; ++h) {
    out.sigma_y.push_back(lagged_cross_moment(panel, split, regime, h));
    const auto& s = out.sigma_y.back();
    out.m_hat.noalias() += s * s.transpose();
  }
  // Exact symmetry; the products above agree only to rounding.
  out.m_hat = 0.5 * (out.m_hat + out.m_hat.transpose()).eval();
  return out;
}

}  // namespace fcp
