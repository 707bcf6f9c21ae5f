#include "factorcp/objective_kernels.hpp"

#include "factorcp/error.hpp"
#include "factorcp/moments.hpp"
#include "factorcp/spectral.hpp"

#include <omp.h>

#include <algorithm>
#include <string>

namespace fcp {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_inputs(const TimeSeriesPanel& panel, const std::vector<Eigen::Index>& splits, const SubspaceBasis& b1,
                  const SubspaceBasis& b2, int h0) {
  if (b1.p() != panel.p() || b2.p() != panel.p()) {
    throw Error(ErrorKind::DimensionMismatch, "complement bases do not match the panel dimension");
  }
  if (h0 < 1 || h0 > kMaxLag) throw Error(ErrorKind::InvalidParams, "h0 must lie in 1.." + std::to_string(kMaxLag));
  for (auto r : splits) {
    if (r < h0 + 1 || panel.n() - r < h0 + 1) {
      throw Error(ErrorKind::EmptySum, "split " + std::to_string(r) + " leaves a regime shorter than h0 + 1");
    }
  }
}

/// Spectral norm of sum_h P_h P_h' (only the lower triangle is formed).
double projected_norm(const std::vector<Eigen::MatrixXd>& sums, Eigen::MatrixXd& gram, Eigen::VectorXd& warm) {
  gram.setZero();
  for (const auto& s : sums) gram.selfadjointView<Eigen::Lower>().rankUpdate(s);
  return psd_spectral_norm(gram, &warm);
}

/// Regime 1 over candidates [lo, hi): P_h(r) = sum_{t=0}^{r-1-h} z_t y_{t+h}', ascending t.
void regime1_chunk(const PanelMatrix& y, const RowMatrix& z, const std::vector<Eigen::Index>& splits, std::size_t lo,
                   std::size_t hi, int h0, std::vector<double>& out) {
  const auto m = z.cols();
  std::vector<Eigen::MatrixXd> sums(static_cast<std::size_t>(h0), Eigen::MatrixXd::Zero(m, y.cols()));
  std::vector<Eigen::Index> next(static_cast<std::size_t>(h0), 0);  // next t to add, per lag
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd warm = Eigen::VectorXd::Ones(m);
  for (std::size_t c = lo; c < hi; ++c) {
    const auto r = splits[c];
    for (int h = 1; h <= h0; ++h) {
      auto& s = sums[static_cast<std::size_t>(h - 1)];
      auto& t = next[static_cast<std::size_t>(h - 1)];
      for (; t + h < r; ++t) s.noalias() += z.row(t).transpose() * y.row(t + h);
    }
    out[c] = projected_norm(sums, gram, warm);
  }
}

/// Regime 2 over candidates [lo, hi): P_h(r) = sum_{t=r}^{n-1-h} z_t y_{t+h}', descending t.
void regime2_chunk(const PanelMatrix& y, const RowMatrix& z, const std::vector<Eigen::Index>& splits, std::size_t lo,
                   std::size_t hi, int h0, std::vector<double>& out) {
  const auto m = z.cols();
  const auto n = y.rows();
  std::vector<Eigen::MatrixXd> sums(static_cast<std::size_t>(h0), Eigen::MatrixXd::Zero(m, y.cols()));
  std::vector<Eigen::Index> next(static_cast<std::size_t>(h0));
  for (int h = 1; h <= h0; ++h) next[static_cast<std::size_t>(h - 1)] = n - 1 - h;
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd warm = Eigen::VectorXd::Ones(m);
  for (std::size_t c = hi; c-- > lo;) {
    const auto r = splits[c];
    for (int h = 1; h <= h0; ++h) {
      auto& s = sums[static_cast<std::size_t>(h - 1)];
      auto& t = next[static_cast<std::size_t>(h - 1)];
      for (; t >= r; --t) s.noalias() += z.row(t).transpose() * y.row(t + h);
    }
    out[c] = projected_norm(sums, gram, warm);
  }
}

}  // namespace

ObjectiveValues objective_trace_reference(const TimeSeriesPanel& panel, const std::vector<Eigen::Index>& splits,
                                          const SubspaceBasis& b1, const SubspaceBasis& b2, int h0) {
  check_inputs(panel, splits, b1, b2, h0);
  ObjectiveValues out;
  out.regime1.reserve(splits.size());
  out.regime2.reserve(splits.size());
  out.total.reserve(splits.size());
  for (auto r : splits) {
    const auto split = SplitSpec::at_index(r, panel.n());
    const auto m1 = pooled_moment(panel, split, Regime::First, h0);
    const auto m2 = pooled_moment(panel, split, Regime::Second, h0);
    const double g1 = dense_spectral_norm(b1.matrix().transpose() * m1.m_hat * b1.matrix());
    const double g2 = dense_spectral_norm(b2.matrix().transpose() * m2.m_hat * b2.matrix());
    out.regime1.push_back(g1);
    out.regime2.push_back(g2);
    out.total.push_back(g1 + g2);
  }
  return out;
}

ObjectiveValues objective_trace_parallel(const TimeSeriesPanel& panel, const std::vector<Eigen::Index>& splits,
                                         const SubspaceBasis& b1, const SubspaceBasis& b2, int h0, int threads) {
  check_inputs(panel, splits, b1, b2, h0);
  if (!std::is_sorted(splits.begin(), splits.end())) {
    throw Error(ErrorKind::InvalidParams, "candidate splits must be ascending");
  }
  const auto& y = panel.values();
  const RowMatrix z1 = y * b1.matrix();
  const RowMatrix z2 = y * b2.matrix();
  const auto count = splits.size();
  ObjectiveValues out;
  out.regime1.assign(count, 0.0);
  out.regime2.assign(count, 0.0);
  out.total.assign(count, 0.0);

  const auto chunks = static_cast<long>((count + kObjectiveChunk - 1) / kObjectiveChunk);
  const int team = threads > 0 ? threads : omp_get_max_threads();
  // Task 2c is regime 1 of chunk c, task 2c+1 regime 2 of chunk c.
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (long task = 0; task < 2 * chunks; ++task) {
    const auto chunk = static_cast<std::size_t>(task / 2);
    const auto lo = chunk * kObjectiveChunk;
    const auto hi = std::min(count, lo + kObjectiveChunk);
    try {
      if (task % 2 == 0) {
        regime1_chunk(y, z1, splits, lo, hi, h0, out.regime1);
      } else {
        regime2_chunk(y, z2, splits, lo, hi, h0, out.regime2);
      }
    } catch (const std::exception& e) {
#pragma omp critical(fcp_objective_failure)
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw Error(ErrorKind::ConvergenceFailure, failure);

  const double scale = 1.0 / (static_cast<double>(panel.n()) * static_cast<double>(panel.n()));
  for (std::size_t c = 0; c < count; ++c) {
    out.regime1[c] *= scale;
    out.regime2[c] *= scale;
    out.total[c] = out.regime1[c] + out.regime2[c];
  }
  return out;
}

}  // namespace fcp
