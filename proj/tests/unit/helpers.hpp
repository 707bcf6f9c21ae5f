#pragma once

#include "factorcp/critvals.hpp"
#include "factorcp/dgp.hpp"
#include "factorcp/panel.hpp"
#include "factorcp/rng.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace fcp::test {

inline TimeSeriesPanel panel_from(std::initializer_list<std::initializer_list<double>> rows) {
  PanelMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return TimeSeriesPanel(std::move(m));
}

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  PhiloxStream stream(seed, 99);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(stream);
  return m;
}

inline TimeSeriesPanel gaussian_panel(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  PanelMatrix m = gaussian_matrix(n, p, seed);
  return TimeSeriesPanel(std::move(m));
}

/// The default table from the shared cache (simulated once per build tree).
inline const CriticalValueTable& default_table() {
  static const CriticalValueTable table = cached_critical_values(0.1, 0.9);
  return table;
}

/// Noiseless panel: y_t = A1 x_t for t < r0, A2 x_t afterwards.
inline TimeSeriesPanel exact_two_regime(Eigen::Index n, Eigen::Index r0, const Eigen::MatrixXd& a1,
                                        const Eigen::MatrixXd& a2, std::uint64_t seed) {
  const auto x = simulate_ar1_factors(n, {0.9, -0.7, 0.8}, 2.0, 200, seed, 0);
  PanelMatrix y(n, a1.rows());
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto& a = t < r0 ? a1 : a2;
    y.row(t) = (a * x.row(t).head(a.cols()).transpose()).transpose();
  }
  return TimeSeriesPanel(std::move(y));
}

}  // namespace fcp::test
