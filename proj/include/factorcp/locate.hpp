#pragma once

#include "factorcp/loading.hpp"
#include "factorcp/panel.hpp"

#include <vector>

namespace fcp {

struct ObjectiveTrace {
  std::vector<double> gammas;
  std::vector<Eigen::Index> splits;
  std::vector<double> values;
  std::size_t argmin = 0;  // first occurrence of the minimum
};

struct ChangePointFit {
  double gamma_hat = 0.0;
  Eigen::Index r_hat = 0;
  int k1 = 0;
  int k2 = 0;
  LoadingEstimate loading1;  // at gamma_hat
  LoadingEstimate loading2;
  ObjectiveTrace trace;
  TimeSeriesPanel residuals;
  double rss = 0.0;
};

enum class KernelChoice { Parallel, Reference };

struct LocateOptions {
  int h0 = 1;
  FactorCount k1 = kAutoCount;
  FactorCount k2 = kAutoCount;
  int threads = 0;
  KernelChoice kernel = KernelChoice::Parallel;
};

/// Complement bases estimated once from the boundary splits at eta1 and eta2.
struct BoundaryEstimates {
  LoadingEstimate first;   // regime 1 of the split at eta1
  LoadingEstimate second;  // regime 2 of the split at eta2
};

BoundaryEstimates estimate_boundaries(const TimeSeriesPanel& panel, const FractionGrid& grid, int h0,
                                      FactorCount k1, FactorCount k2);

/// G_hat(gamma) = ||B1' M1(gamma) B1||_2 + ||B2' M2(gamma) B2||_2.
double objective(const TimeSeriesPanel& panel, double gamma, const SubspaceBasis& b1, const SubspaceBasis& b2,
                 int h0);

ChangePointFit locate_change_point(const TimeSeriesPanel& panel, const FractionGrid& grid,
                                   const LocateOptions& options = {});

struct ResidualResult {
  TimeSeriesPanel residuals;
  double rss = 0.0;
};

/// (I - Q_i Q_i') y_t with regime 1 for t <= r_hat.
ResidualResult residuals(const TimeSeriesPanel& panel, Eigen::Index r_hat, const SubspaceBasis& q1,
                         const SubspaceBasis& q2);

}  // namespace fcp
