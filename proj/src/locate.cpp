#include "factorcp/locate.hpp"

#include "factorcp/error.hpp"
#include "factorcp/objective_kernels.hpp"
#include "factorcp/spectral.hpp"

#include <algorithm>

namespace fcp {

BoundaryEstimates estimate_boundaries(const TimeSeriesPanel& panel, const FractionGrid& grid, int h0,
                                      FactorCount k1, FactorCount k2) {
  const auto n = panel.n();
  const auto split1 = SplitSpec::at_index(FractionGrid::boundary_index(grid.eta1(), n), n);
  const auto split2 = SplitSpec::at_index(FractionGrid::boundary_index(grid.eta2(), n), n);
  return BoundaryEstimates{estimate_loading(panel, split1, Regime::First, h0, k1),
                           estimate_loading(panel, split2, Regime::Second, h0, k2)};
}

double objective(const TimeSeriesPanel& panel, double gamma, const SubspaceBasis& b1, const SubspaceBasis& b2,
                 int h0) {
  if (b1.p() != panel.p() || b2.p() != panel.p()) {
    throw Error(ErrorKind::DimensionMismatch, "complement bases do not match the panel dimension");
  }
  const auto split = SplitSpec::at_fraction(gamma, panel.n());
  const auto m1 = pooled_moment(panel, split, Regime::First, h0);
  const auto m2 = pooled_moment(panel, split, Regime::Second, h0);
  return dense_spectral_norm(b1.matrix().transpose() * m1.m_hat * b1.matrix()) +
         dense_spectral_norm(b2.matrix().transpose() * m2.m_hat * b2.matrix());
}

ResidualResult residuals(const TimeSeriesPanel& panel, Eigen::Index r_hat, const SubspaceBasis& q1,
                         const SubspaceBasis& q2) {
  if (q1.p() != panel.p() || q2.p() != panel.p()) {
    throw Error(ErrorKind::DimensionMismatch, "loading bases do not match the panel dimension");
  }
  const auto& y = panel.values();
  PanelMatrix eps = y;
  const auto n = panel.n();
  const auto r = std::clamp<Eigen::Index>(r_hat, 0, n);
  if (r > 0) {
    eps.topRows(r) -= (y.topRows(r) * q1.matrix()) * q1.matrix().transpose();
  }
  if (r < n) {
    eps.bottomRows(n - r) -= (y.bottomRows(n - r) * q2.matrix()) * q2.matrix().transpose();
  }
  const double rss = eps.squaredNorm();
  return ResidualResult{TimeSeriesPanel(std::move(eps)), rss};
}

ChangePointFit locate_change_point(const TimeSeriesPanel& panel, const FractionGrid& grid,
                                   const LocateOptions& options) {
  const auto n = panel.n();
  auto boundaries = estimate_boundaries(panel, grid, options.h0, options.k1, options.k2);

  std::vector<Eigen::Index> splits;
  for (auto r : grid.candidates(n)) {
    if (r >= options.h0 + 1 && n - r >= options.h0 + 1) splits.push_back(r);
  }
  if (splits.empty()) throw Error(ErrorKind::GridEmpty, "no admissible split in (eta1, eta2)");

  const auto& b1 = boundaries.first.b_hat;
  const auto& b2 = boundaries.second.b_hat;
  const auto values = options.kernel == KernelChoice::Reference
                          ? objective_trace_reference(panel, splits, b1, b2, options.h0)
                          : objective_trace_parallel(panel, splits, b1, b2, options.h0, options.threads);

  ObjectiveTrace trace;
  trace.splits = splits;
  trace.values = values.total;
  trace.gammas.reserve(splits.size());
  for (auto r : splits) trace.gammas.push_back(static_cast<double>(r) / static_cast<double>(n));
  trace.argmin = static_cast<std::size_t>(std::min_element(trace.values.begin(), trace.values.end()) -
                                          trace.values.begin());

  const auto r_hat = splits[trace.argmin];
  const auto split = SplitSpec::at_index(r_hat, n);
  const int k1 = boundaries.first.k;
  const int k2 = boundaries.second.k;
  auto loading1 = estimate_loading(panel, split, Regime::First, options.h0, k1);
  auto loading2 = estimate_loading(panel, split, Regime::Second, options.h0, k2);
  auto resid = residuals(panel, r_hat, loading1.q_hat, loading2.q_hat);

  return ChangePointFit{split.gamma(),       r_hat, k1, k2, std::move(loading1), std::move(loading2),
                        std::move(trace),    std::move(resid.residuals), resid.rss};
}

}  // namespace fcp
