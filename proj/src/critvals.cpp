#include "factorcp/critvals.hpp"

#include "factorcp/error.hpp"
#include "factorcp/panel.hpp"
#include "factorcp/report_io.hpp"
#include "factorcp/rng.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>

namespace fcp {
namespace {

void check_params(double eta1, double eta2, int grid_size, int replications) {
  if (!(eta1 > 0.0 && eta1 < eta2 && eta2 < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "need 0 < eta1 < eta2 < 1");
  }
  if (grid_size < 200) throw Error(ErrorKind::InvalidParams, "grid_size must be at least 200");
  if (replications < 10000) throw Error(ErrorKind::InvalidParams, "replications must be at least 10000");
}

std::uint64_t fnv1a(const std::vector<double>& values) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (bits >> (8 * byte)) & 0xffu;
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

void fill_path(PhiloxStream& stream, std::vector<double>& path) {
  std::normal_distribution<double> normal;
  const auto steps = path.size() - 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(steps));
  path[0] = 0.0;
  for (std::size_t j = 1; j <= steps; ++j) path[j] = path[j - 1] + scale * normal(stream);
}

}  // namespace

std::string alpha_key(double alpha) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), alpha);
  return std::string(buf, ptr);
}

double CriticalValueTable::critical_value(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidParams, "alpha must lie in (0, 1)");
  if (draws.empty()) throw Error(ErrorKind::InvalidParams, "critical-value table holds no draws");
  const double rank = std::ceil((1.0 - alpha) * static_cast<double>(draws.size()) - 1e-9);
  const auto index = std::clamp<long>(static_cast<long>(rank) - 1, 0, static_cast<long>(draws.size()) - 1);
  return draws[static_cast<std::size_t>(index)];
}

double CriticalValueTable::p_value(double t) const {
  const auto at_least = draws.end() - std::lower_bound(draws.begin(), draws.end(), t);
  return (1.0 + static_cast<double>(at_least)) / (static_cast<double>(draws.size()) + 1.0);
}

std::string CriticalValueTable::draws_digest() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(draws)));
  return buf;
}

double limit_functional(std::span<const double> path, double eta1, double eta2) {
  const auto steps = static_cast<Eigen::Index>(path.size()) - 1;
  const auto splits = FractionGrid(eta1, eta2).candidates(steps);
  if (splits.empty()) throw Error(ErrorKind::GridEmpty, "grid too coarse for (eta1, eta2)");
  const auto N = static_cast<std::size_t>(steps);
  const double nd = static_cast<double>(N);
  const double b1 = path[N];

  // Prefix sums over j = 1..m of B_j^2, j B_j, j^2.
  std::vector<double> sbb(N + 1, 0.0), sjb(N + 1, 0.0), sjj(N + 1, 0.0);
  // Suffix sums over j = m+1..N of C_j^2, w_j C_j, w_j^2 with C_j = B(1) - B_j, w_j = N - j.
  std::vector<double> tcc(N + 1, 0.0), twc(N + 1, 0.0), tww(N + 1, 0.0);
  for (std::size_t j = 1; j <= N; ++j) {
    const double jd = static_cast<double>(j);
    sbb[j] = sbb[j - 1] + path[j] * path[j];
    sjb[j] = sjb[j - 1] + jd * path[j];
    sjj[j] = sjj[j - 1] + jd * jd;
  }
  for (std::size_t j = N; j >= 1; --j) {
    const double c = b1 - path[j];
    const double w = static_cast<double>(N - j);
    tcc[j - 1] = tcc[j] + c * c;
    twc[j - 1] = twc[j] + w * c;
    tww[j - 1] = tww[j] + w * w;
  }

  double best = 0.0;
  for (auto r : splits) {
    const auto m = static_cast<std::size_t>(r);
    const double md = static_cast<double>(m);
    const double bm = path[m];
    const double slope = bm / md;
    const double first = sbb[m] - 2.0 * slope * sjb[m] + slope * slope * sjj[m];
    const double d = b1 - bm;
    const double tail = nd - md;
    const double second = tcc[m] - 2.0 * (d / tail) * twc[m] + (d / tail) * (d / tail) * tww[m];
    const double w = std::max(first + second, 0.0) / nd;
    const double bridge = bm - (md / nd) * b1;
    if (w > 0.0) best = std::max(best, bridge * bridge / w);
  }
  return best;
}

double limit_functional_reference(std::span<const double> path, double eta1, double eta2) {
  const auto steps = static_cast<Eigen::Index>(path.size()) - 1;
  const auto N = static_cast<std::size_t>(steps);
  const double nd = static_cast<double>(N);
  const double b1 = path[N];
  double best = 0.0;
  for (auto r : FractionGrid(eta1, eta2).candidates(steps)) {
    const auto m = static_cast<std::size_t>(r);
    const double s = static_cast<double>(m) / nd;
    const double bs = path[m];
    double w = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      const double u = static_cast<double>(j) / nd;
      const double f = path[j] - (u / s) * bs;
      w += f * f;
    }
    for (std::size_t j = m + 1; j <= N; ++j) {
      const double u = static_cast<double>(j) / nd;
      const double f = b1 - path[j] - ((1.0 - u) / (1.0 - s)) * (b1 - bs);
      w += f * f;
    }
    w /= nd;
    const double bridge = bs - s * b1;
    if (w > 0.0) best = std::max(best, bridge * bridge / w);
  }
  return best;
}

CriticalValueTable simulate_critical_values(double eta1, double eta2, int grid_size, int replications,
                                            std::uint64_t seed, int threads) {
  check_params(eta1, eta2, grid_size, replications);
  CriticalValueTable table;
  table.eta1 = eta1;
  table.eta2 = eta2;
  table.grid_size = grid_size;
  table.replications = replications;
  table.seed = seed;
  table.draws.assign(static_cast<std::size_t>(replications), 0.0);

  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(team) if (team > 1)
  {
    std::vector<double> path(static_cast<std::size_t>(grid_size) + 1);
#pragma omp for schedule(static)
    for (int rep = 0; rep < replications; ++rep) {
      PhiloxStream stream(seed, stream_id(StreamPurpose::CriticalValues, static_cast<std::uint32_t>(rep)));
      fill_path(stream, path);
      table.draws[static_cast<std::size_t>(rep)] = limit_functional(path, eta1, eta2);
    }
  }
  std::sort(table.draws.begin(), table.draws.end());
  for (double alpha : kStandardAlphas) table.quantiles[alpha] = table.critical_value(alpha);
  return table;
}

std::filesystem::path draws_sidecar(const std::filesystem::path& json_path) {
  auto out = json_path;
  out.replace_extension(".draws.bin");
  return out;
}

void save_critical_values(const CriticalValueTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << to_json(table).dump(2) << '\n';
  }
  std::ofstream bin(draws_sidecar(path), std::ios::binary);
  if (!bin) throw Error(ErrorKind::IoError, "cannot write " + draws_sidecar(path).string());
  for (double v : table.draws) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    bin.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
  }
  if (!bin) throw Error(ErrorKind::IoError, "failed writing " + draws_sidecar(path).string());
}

CriticalValueTable load_critical_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  CriticalValueTable table;
  try {
    table.eta1 = doc.at("eta1").get<double>();
    table.eta2 = doc.at("eta2").get<double>();
    table.grid_size = doc.at("grid_size").get<int>();
    table.replications = doc.at("replications").get<int>();
    table.seed = doc.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }

  const auto sidecar = draws_sidecar(path);
  std::ifstream bin(sidecar, std::ios::binary);
  if (!bin) throw Error(ErrorKind::IoError, "cannot open " + sidecar.string());
  table.draws.resize(static_cast<std::size_t>(table.replications));
  for (auto& v : table.draws) {
    std::uint64_t bits = 0;
    bin.read(reinterpret_cast<char*>(&bits), sizeof(bits));
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v = std::bit_cast<double>(bits);
  }
  if (!bin) throw Error(ErrorKind::IoError, sidecar.string() + " is shorter than the recorded replications");
  if (doc.contains("draws_digest") && doc["draws_digest"].get<std::string>() != table.draws_digest()) {
    throw Error(ErrorKind::IoError, sidecar.string() + " does not match the recorded digest");
  }
  for (double alpha : kStandardAlphas) table.quantiles[alpha] = table.critical_value(alpha);
  return table;
}

std::filesystem::path cache_directory() {
  if (const char* dir = std::getenv("FACTORCP_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "factorcp";
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "factorcp";
  }
  return std::filesystem::temp_directory_path() / "factorcp";
}

std::filesystem::path cache_file_name(double eta1, double eta2, int grid_size, int replications,
                                      std::uint64_t seed) {
  return "cv_e1-" + alpha_key(eta1) + "_e2-" + alpha_key(eta2) + "_g" + std::to_string(grid_size) + "_r" +
         std::to_string(replications) + "_s" + std::to_string(seed) + ".json";
}

CriticalValueTable cached_critical_values(double eta1, double eta2, int grid_size, int replications,
                                          std::uint64_t seed, int threads) {
  const auto path = cache_directory() / cache_file_name(eta1, eta2, grid_size, replications, seed);
  if (std::filesystem::exists(path) && std::filesystem::exists(draws_sidecar(path))) {
    try {
      auto table = load_critical_values(path);
      if (table.eta1 == eta1 && table.eta2 == eta2 && table.grid_size == grid_size &&
          table.replications == replications && table.seed == seed) {
        return table;
      }
    } catch (const Error&) {
      // stale or truncated cache entry: resimulate below
    }
  }
  auto table = simulate_critical_values(eta1, eta2, grid_size, replications, seed, threads);
  try {
    save_critical_values(table, path);
  } catch (const std::exception&) {
    // write failures leave the cache untouched
  }
  return table;
}

}  // namespace fcp
