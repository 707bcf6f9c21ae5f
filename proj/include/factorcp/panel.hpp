#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace fcp {

/// Row t holds y_t; rows are contiguous so a time point is one cache-friendly span.
using PanelMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Observed p-dimensional series y_1..y_n. Immutable once built.
///
/// Time is 0-based in code: row 0 is y_1. Construction rejects panels with
/// fewer than two time points, zero columns, or any non-finite entry.
class TimeSeriesPanel {
 public:
  explicit TimeSeriesPanel(PanelMatrix values);

  Eigen::Index n() const noexcept { return values_.rows(); }
  Eigen::Index p() const noexcept { return values_.cols(); }
  const PanelMatrix& values() const noexcept { return values_; }

  /// y_t for 0-based t.
  auto y(Eigen::Index t) const { return values_.row(t); }

  /// Rows [begin, end) as a new panel.
  TimeSeriesPanel slice(Eigen::Index begin, Eigen::Index end) const;

 private:
  PanelMatrix values_;
};

TimeSeriesPanel load_panel(const std::filesystem::path& path, bool has_header);
TimeSeriesPanel parse_panel(std::istream& in, bool has_header);

/// Writes one row per time point with full round-trip precision.
void write_panel(std::ostream& out, const TimeSeriesPanel& panel);
void save_panel(const std::filesystem::path& path, const TimeSeriesPanel& panel);

/// Subtracts each column's sample mean.
TimeSeriesPanel center_panel(const TimeSeriesPanel& panel);

/// Candidate split points for a change fraction in (eta1, eta2).
///
/// A candidate is stored as its split index r = gamma*n, meaning regime 1 is
/// y_1..y_r and regime 2 is y_{r+1}..y_n. Only r with n*eta1 < r < n*eta2
/// are kept.
class FractionGrid {
 public:
  FractionGrid(double eta1, double eta2);

  double eta1() const noexcept { return eta1_; }
  double eta2() const noexcept { return eta2_; }

  /// Split indices r with n*eta1 < r < n*eta2, ascending.
  std::vector<Eigen::Index> candidates(Eigen::Index n) const;

  /// floor(eta * n), robust to representation error in eta * n.
  static Eigen::Index boundary_index(double eta, Eigen::Index n);

 private:
  double eta1_;
  double eta2_;
};

}  // namespace fcp
