#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcp {

inline constexpr int kDefaultGridSize = 2000;
inline constexpr int kDefaultCvReplications = 50000;
inline constexpr std::uint64_t kDefaultCvSeed = 20200917;

/// Monte Carlo distribution of
///   sup_{s in (eta1, eta2)} {B(s) - s B(1)}^2 / W(B, s)
/// for standard Brownian motion B, with all sorted draws retained for p-values.
struct CriticalValueTable {
  double eta1 = 0.1;
  double eta2 = 0.9;
  int grid_size = kDefaultGridSize;
  int replications = kDefaultCvReplications;
  std::uint64_t seed = kDefaultCvSeed;
  std::map<double, double, std::greater<>> quantiles;  // alpha -> upper quantile
  std::vector<double> draws;                           // ascending

  /// Upper alpha quantile of the draws, any alpha in (0, 1).
  double critical_value(double alpha) const;

  /// (1 + #{draws >= t}) / (replications + 1).
  double p_value(double t) const;

  std::string draws_digest() const;
};

inline const std::vector<double> kStandardAlphas{0.10, 0.05, 0.01};

/// Limit functional for one discretized path. `path` holds B(j/N), j = 0..N,
/// with path[0] = 0. Integrals use the rectangle rule on the same grid.
double limit_functional(std::span<const double> path, double eta1, double eta2);

/// Serial reference of the same functional, O(N^2), for testing.
double limit_functional_reference(std::span<const double> path, double eta1, double eta2);

/// Replication i draws from Philox stream (seed, CriticalValues/i), so the
/// table is identical for every thread count. `threads <= 0` uses the
/// OpenMP default; `threads == 1` runs the plain serial loop.
CriticalValueTable simulate_critical_values(double eta1, double eta2, int grid_size, int replications,
                                            std::uint64_t seed, int threads = 0);

/// JSON metadata at `path`, sorted draws as little-endian float64 in the
/// sidecar `<path>.draws.bin`.
void save_critical_values(const CriticalValueTable& table, const std::filesystem::path& path);
CriticalValueTable load_critical_values(const std::filesystem::path& path);
std::filesystem::path draws_sidecar(const std::filesystem::path& json_path);

/// Cache directory: $FACTORCP_CACHE_DIR, else $XDG_CACHE_HOME/factorcp,
/// else $HOME/.cache/factorcp.
std::filesystem::path cache_directory();
std::filesystem::path cache_file_name(double eta1, double eta2, int grid_size, int replications,
                                      std::uint64_t seed);

/// Loads the cached table for these parameters or simulates and stores it.
CriticalValueTable cached_critical_values(double eta1, double eta2, int grid_size = kDefaultGridSize,
                                          int replications = kDefaultCvReplications,
                                          std::uint64_t seed = kDefaultCvSeed, int threads = 0);

/// Shortest round-trip decimal form, used as JSON keys for alpha levels.
std::string alpha_key(double alpha);

}  // namespace fcp
