#pragma once

#include "factorcp/critvals.hpp"
#include "factorcp/dgp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fcp {

enum class Setting { SS, SW, WS, WW, NullStrong, NullWeak };

std::string to_string(Setting setting);
Setting parse_setting(const std::string& text);
bool is_null_setting(Setting setting) noexcept;

inline constexpr double kWeakDelta = 0.25;

struct ExperimentCell {
  Eigen::Index n = 400;
  Eigen::Index p = 20;
  Setting setting = Setting::SS;
  int replications = 1000;
  std::vector<double> alphas{0.10, 0.05, 0.01};
  std::uint64_t seed = 1;
};

struct ExperimentPlan {
  std::vector<ExperimentCell> cells;
  std::filesystem::path output;
  double eta1 = 0.1;
  double eta2 = 0.9;
  int h0 = 1;
  bool known_k = true;  // false: eigenvalue-ratio estimates at the boundaries
  double rho_e = 0.5;
  double gamma0 = 0.5;
  int threads = 0;

  void validate() const;
};

/// DGP for replication `rep` of a cell; the seed is derived from (cell seed, rep).
DgpSpec cell_spec(const ExperimentPlan& plan, const ExperimentCell& cell, int rep);

/// Rejection rate with its Monte Carlo standard error sqrt(r(1-r)/R).
/// The error is undefined (nullopt) for a single replication.
struct Rate {
  double value = 0.0;
  std::optional<double> mc_se;
};

Rate make_rate(long hits, long replications);

struct SizeRow {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  double delta = 0.0;
  double alpha = 0.0;
  Rate rate;
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  long under = 0;  // bins below gamma0
  long over = 0;   // bins above gamma0
};

struct PowerLocationRow {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Setting setting = Setting::SS;
  std::vector<std::pair<double, Rate>> power;  // alpha -> rejection rate
  double mean_abs_error = 0.0;                 // |gamma_hat - gamma0|
  double mean_distance1 = 0.0;                 // D(Q1_hat, Q1)
  double mean_distance2 = 0.0;
  long over = 0;
  long under = 0;
  long exact = 0;
  std::vector<HistogramBin> histogram;  // width 0.01
  std::vector<double> gamma_hats;
};

struct ExperimentReport {
  std::vector<SizeRow> size;
  std::vector<PowerLocationRow> power_location;
};

/// One replication's outcome, independent of every other replication.
struct ReplicationOutcome {
  double t_n = 0.0;
  std::vector<bool> reject;  // per alpha
  double gamma_hat = 0.0;
  double distance1 = 0.0;
  double distance2 = 0.0;
};

ReplicationOutcome run_replication(const ExperimentPlan& plan, const ExperimentCell& cell, int rep,
                                   const CriticalValueTable& cv_table, bool locate);

std::vector<SizeRow> run_size_experiment(const ExperimentPlan& plan, const CriticalValueTable& cv_table);
std::vector<PowerLocationRow> run_power_location_experiment(const ExperimentPlan& plan,
                                                            const CriticalValueTable& cv_table);

ExperimentPlan load_plan(const std::filesystem::path& path);

/// Writes table1.csv .. table4.csv, histogram_gamma.csv and report.json.
void write_report(const ExperimentReport& report, const std::filesystem::path& directory);

}  // namespace fcp
