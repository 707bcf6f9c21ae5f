#include "factorcp/bench.hpp"

#include "factorcp/error.hpp"
#include "factorcp/locate.hpp"
#include "factorcp/rng.hpp"
#include "factorcp/sntest.hpp"

#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

namespace fcp {
namespace {

struct Deltas {
  double first;
  double second;
};

Deltas deltas_of(Setting setting) {
  switch (setting) {
    case Setting::SS: return {0.0, 0.0};
    case Setting::SW: return {0.0, kWeakDelta};
    case Setting::WS: return {kWeakDelta, 0.0};
    case Setting::WW: return {kWeakDelta, kWeakDelta};
    case Setting::NullStrong: return {0.0, 0.0};
    case Setting::NullWeak: return {kWeakDelta, kWeakDelta};
  }
  return {0.0, 0.0};
}

/// Runs every replication of a cell (in parallel) and returns outcomes in replication order.
std::vector<ReplicationOutcome> run_cell(const ExperimentPlan& plan, const ExperimentCell& cell,
                                         const CriticalValueTable& cv_table, bool locate) {
  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(cell.replications));
  const int team = plan.threads > 0 ? plan.threads : omp_get_max_threads();
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(team) if (team > 1)
  for (int rep = 0; rep < cell.replications; ++rep) {
    try {
      outcomes[static_cast<std::size_t>(rep)] = run_replication(plan, cell, rep, cv_table, locate);
    } catch (const std::exception& e) {
#pragma omp critical(fcp_bench_failure)
      {
        failed = true;
        failure = "replication " + std::to_string(rep) + ": " + e.what();
      }
    }
  }
  if (failed) throw Error(ErrorKind::ConvergenceFailure, failure);
  return outcomes;
}

std::string csv_number(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

std::string csv_se(const std::optional<double>& se) { return se ? csv_number(*se) : "NA"; }

nlohmann::json json_se(const std::optional<double>& se) { return se ? nlohmann::json(*se) : nlohmann::json(nullptr); }

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

}  // namespace

std::string to_string(Setting setting) {
  switch (setting) {
    case Setting::SS: return "SS";
    case Setting::SW: return "SW";
    case Setting::WS: return "WS";
    case Setting::WW: return "WW";
    case Setting::NullStrong: return "null-strong";
    case Setting::NullWeak: return "null-weak";
  }
  return "?";
}

Setting parse_setting(const std::string& text) {
  for (auto s : {Setting::SS, Setting::SW, Setting::WS, Setting::WW, Setting::NullStrong, Setting::NullWeak}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorKind::InvalidParams, "unknown setting '" + text + "'");
}

bool is_null_setting(Setting setting) noexcept {
  return setting == Setting::NullStrong || setting == Setting::NullWeak;
}

void ExperimentPlan::validate() const {
  const FractionGrid grid(eta1, eta2);
  (void)grid;
  for (const auto& cell : cells) {
    if (cell.replications < 1) throw Error(ErrorKind::InvalidParams, "replications must be at least 1");
    if (cell.alphas.empty()) throw Error(ErrorKind::InvalidParams, "each cell needs at least one alpha");
    for (double alpha : cell.alphas) {
      bool standard = false;
      for (double s : kStandardAlphas) standard = standard || std::abs(alpha - s) < 1e-12;
      if (!standard) throw Error(ErrorKind::InvalidParams, "alphas must be drawn from {0.10, 0.05, 0.01}");
    }
  }
}

DgpSpec cell_spec(const ExperimentPlan& plan, const ExperimentCell& cell, int rep) {
  const auto deltas = deltas_of(cell.setting);
  DgpSpec spec;
  spec.n = cell.n;
  spec.p = cell.p;
  spec.k1 = 3;
  spec.k2 = 3;
  spec.delta1 = deltas.first;
  spec.delta2 = deltas.second;
  spec.gamma0 = is_null_setting(cell.setting) ? std::nullopt : std::optional<double>(plan.gamma0);
  spec.rho_e = plan.rho_e;
  spec.seed = derive_seed(cell.seed, static_cast<std::uint64_t>(rep), 0xbe7c);
  return spec;
}

Rate make_rate(long hits, long replications) {
  Rate rate;
  rate.value = static_cast<double>(hits) / static_cast<double>(replications);
  if (replications >= 2) rate.mc_se = std::sqrt(rate.value * (1.0 - rate.value) / static_cast<double>(replications));
  return rate;
}

ReplicationOutcome run_replication(const ExperimentPlan& plan, const ExperimentCell& cell, int rep,
                                   const CriticalValueTable& cv_table, bool locate) {
  const auto spec = cell_spec(plan, cell, rep);
  const auto sim = generate(spec);
  const FactorCount k1 = plan.known_k ? FactorCount(spec.k1) : kAutoCount;
  const FactorCount k2 = plan.known_k ? FactorCount(spec.gamma0 ? spec.k2 : spec.k1) : kAutoCount;

  ReplicationOutcome out;
  TestOptions test;
  test.h0 = plan.h0;
  test.k1 = k1;
  test.k2 = k2;
  test.alphas = cell.alphas;
  const auto result = test_change_point(sim.panel, plan.eta1, plan.eta2, cv_table, test);
  out.t_n = result.t_n;
  for (double alpha : cell.alphas) out.reject.push_back(result.reject.at(alpha));

  if (locate) {
    LocateOptions options;
    options.h0 = plan.h0;
    options.k1 = k1;
    options.k2 = k2;
    options.threads = 1;
    const auto fit = locate_change_point(sim.panel, FractionGrid(plan.eta1, plan.eta2), options);
    out.gamma_hat = fit.gamma_hat;
    out.distance1 = subspace_distance(fit.loading1.q_hat, SubspaceBasis::span_of(sim.truth.a1));
    out.distance2 = subspace_distance(fit.loading2.q_hat, SubspaceBasis::span_of(sim.truth.a2));
  }
  return out;
}

std::vector<SizeRow> run_size_experiment(const ExperimentPlan& plan, const CriticalValueTable& cv_table) {
  plan.validate();
  std::vector<SizeRow> rows;
  for (const auto& cell : plan.cells) {
    if (!is_null_setting(cell.setting)) continue;
    const auto outcomes = run_cell(plan, cell, cv_table, false);
    for (std::size_t a = 0; a < cell.alphas.size(); ++a) {
      long hits = 0;
      for (const auto& o : outcomes) hits += o.reject[a] ? 1 : 0;
      rows.push_back(SizeRow{cell.n, cell.p, deltas_of(cell.setting).first, cell.alphas[a],
                             make_rate(hits, cell.replications)});
    }
  }
  return rows;
}

std::vector<PowerLocationRow> run_power_location_experiment(const ExperimentPlan& plan,
                                                            const CriticalValueTable& cv_table) {
  plan.validate();
  std::vector<PowerLocationRow> rows;
  for (const auto& cell : plan.cells) {
    if (is_null_setting(cell.setting)) continue;
    const auto outcomes = run_cell(plan, cell, cv_table, true);
    PowerLocationRow row;
    row.n = cell.n;
    row.p = cell.p;
    row.setting = cell.setting;
    for (std::size_t a = 0; a < cell.alphas.size(); ++a) {
      long hits = 0;
      for (const auto& o : outcomes) hits += o.reject[a] ? 1 : 0;
      row.power.emplace_back(cell.alphas[a], make_rate(hits, cell.replications));
    }
    std::map<long, HistogramBin> bins;
    double err = 0.0, d1 = 0.0, d2 = 0.0;
    for (const auto& o : outcomes) {
      err += std::abs(o.gamma_hat - plan.gamma0);
      d1 += o.distance1;
      d2 += o.distance2;
      row.gamma_hats.push_back(o.gamma_hat);
      const auto bin = static_cast<long>(std::floor(o.gamma_hat * 100.0 + 1e-9));
      auto& slot = bins[bin];
      slot.lo = static_cast<double>(bin) / 100.0;
      slot.hi = static_cast<double>(bin + 1) / 100.0;
      if (o.gamma_hat > plan.gamma0 + 1e-12) {
        ++row.over;
        ++slot.over;
      } else if (o.gamma_hat < plan.gamma0 - 1e-12) {
        ++row.under;
        ++slot.under;
      } else {
        ++row.exact;
      }
    }
    const auto reps = static_cast<double>(cell.replications);
    row.mean_abs_error = err / reps;
    row.mean_distance1 = d1 / reps;
    row.mean_distance2 = d2 / reps;
    for (auto& [bin, slot] : bins) row.histogram.push_back(slot);
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  ExperimentPlan plan;
  try {
    const auto doc = nlohmann::json::parse(in);
    plan.output = doc.value("output", std::string("bench_out"));
    plan.eta1 = doc.value("eta1", plan.eta1);
    plan.eta2 = doc.value("eta2", plan.eta2);
    plan.h0 = doc.value("h0", plan.h0);
    plan.known_k = doc.value("known_k", plan.known_k);
    plan.rho_e = doc.value("rho_e", plan.rho_e);
    plan.gamma0 = doc.value("gamma0", plan.gamma0);
    plan.threads = doc.value("threads", plan.threads);
    const std::uint64_t seed = doc.value("seed", std::uint64_t{1});
    std::uint64_t index = 0;
    for (const auto& c : doc.at("cells")) {
      ExperimentCell cell;
      cell.n = c.at("n").get<Eigen::Index>();
      cell.p = c.at("p").get<Eigen::Index>();
      cell.setting = parse_setting(c.at("setting").get<std::string>());
      cell.replications = c.value("replications", cell.replications);
      if (c.contains("alphas")) cell.alphas = c.at("alphas").get<std::vector<double>>();
      cell.seed = c.contains("seed") ? c.at("seed").get<std::uint64_t>() : derive_seed(seed, index);
      plan.cells.push_back(cell);
      ++index;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  plan.validate();
  return plan;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  nlohmann::json doc = {{"schema_version", 1}};

  auto t1 = open_csv(directory / "table1.csv");
  t1 << "n,p,delta,alpha,rejection_rate,mc_se\n";
  nlohmann::json size = nlohmann::json::array();
  for (const auto& row : report.size) {
    t1 << row.n << ',' << row.p << ',' << csv_number(row.delta) << ',' << csv_number(row.alpha) << ','
       << csv_number(row.rate.value) << ',' << csv_se(row.rate.mc_se) << '\n';
    size.push_back({{"n", row.n},
                    {"p", row.p},
                    {"delta", row.delta},
                    {"alpha", row.alpha},
                    {"rejection_rate", row.rate.value},
                    {"mc_se", json_se(row.rate.mc_se)}});
  }
  doc["size"] = std::move(size);

  auto t2 = open_csv(directory / "table2.csv");
  auto t3 = open_csv(directory / "table3.csv");
  auto t4 = open_csv(directory / "table4.csv");
  auto hist = open_csv(directory / "histogram_gamma.csv");
  t2 << "n,p,setting,alpha,rejection_rate,mc_se\n";
  t3 << "n,p,setting,mean_abs_error,over,under,exact\n";
  t4 << "n,p,setting,regime,delta,mean_distance\n";
  hist << "n,p,setting,bin_lo,bin_hi,under,over\n";
  nlohmann::json power = nlohmann::json::array();
  for (const auto& row : report.power_location) {
    const auto name = to_string(row.setting);
    const auto deltas = deltas_of(row.setting);
    nlohmann::json rates = nlohmann::json::array();
    for (const auto& [alpha, rate] : row.power) {
      t2 << row.n << ',' << row.p << ',' << name << ',' << csv_number(alpha) << ',' << csv_number(rate.value) << ','
         << csv_se(rate.mc_se) << '\n';
      rates.push_back({{"alpha", alpha}, {"rejection_rate", rate.value}, {"mc_se", json_se(rate.mc_se)}});
    }
    t3 << row.n << ',' << row.p << ',' << name << ',' << csv_number(row.mean_abs_error) << ',' << row.over << ','
       << row.under << ',' << row.exact << '\n';
    t4 << row.n << ',' << row.p << ',' << name << ",1," << csv_number(deltas.first) << ','
       << csv_number(row.mean_distance1) << '\n';
    t4 << row.n << ',' << row.p << ',' << name << ",2," << csv_number(deltas.second) << ','
       << csv_number(row.mean_distance2) << '\n';
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& bin : row.histogram) {
      hist << row.n << ',' << row.p << ',' << name << ',' << csv_number(bin.lo) << ',' << csv_number(bin.hi) << ','
           << bin.under << ',' << bin.over << '\n';
      bins.push_back({{"lo", bin.lo}, {"hi", bin.hi}, {"under", bin.under}, {"over", bin.over}});
    }
    power.push_back({{"n", row.n},
                     {"p", row.p},
                     {"setting", name},
                     {"power", std::move(rates)},
                     {"mean_abs_error", row.mean_abs_error},
                     {"mean_distance", {row.mean_distance1, row.mean_distance2}},
                     {"over", row.over},
                     {"under", row.under},
                     {"exact", row.exact},
                     {"histogram", std::move(bins)}});
  }
  doc["power_location"] = std::move(power);

  std::ofstream json(directory / "report.json");
  if (!json) throw Error(ErrorKind::IoError, "cannot write report.json");
  json << doc.dump(2) << '\n';
}

}  // namespace fcp
