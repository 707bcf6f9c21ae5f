#pragma once

#include "factorcp/panel.hpp"
#include "factorcp/subspace.hpp"

#include <vector>

namespace fcp {

/// Per-candidate regime contributions to G_hat.
struct ObjectiveValues {
  std::vector<double> regime1;  // ||B1' M1(r) B1||_2
  std::vector<double> regime2;  // ||B2' M2(r) B2||_2
  std::vector<double> total;
};

/// Serial reference: rebuilds M1(r), M2(r) from scratch for every candidate
/// and takes a dense eigensolve of each projected matrix. O(n^2 p^2); kept
/// as the oracle for the fast kernel.
ObjectiveValues objective_trace_reference(const TimeSeriesPanel& panel, const std::vector<Eigen::Index>& splits,
                                          const SubspaceBasis& b1, const SubspaceBasis& b2, int h0);

/// Fast kernel. Projects the panel onto each complement once, then walks the
/// candidates with rank-1 updates of B' Sigma_hat(h). Candidates are cut into
/// fixed-size chunks that are processed independently (OpenMP); each chunk
/// rebuilds its starting sums in the canonical order, so the result is
/// bit-identical for every thread count. `threads <= 0` uses the OpenMP default.
ObjectiveValues objective_trace_parallel(const TimeSeriesPanel& panel, const std::vector<Eigen::Index>& splits,
                                         const SubspaceBasis& b1, const SubspaceBasis& b2, int h0,
                                         int threads = 0);

inline constexpr std::size_t kObjectiveChunk = 96;

}  // namespace fcp
