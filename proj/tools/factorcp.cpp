// factorcp: command-line front end for change-point analysis of factor-model panels.

#include "factorcp/bench.hpp"
#include "factorcp/critvals.hpp"
#include "factorcp/dgp.hpp"
#include "factorcp/error.hpp"
#include "factorcp/locate.hpp"
#include "factorcp/panel.hpp"
#include "factorcp/report_io.hpp"
#include "factorcp/sntest.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

/// Thrown for invalid option combinations; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string input;
  std::string output;
  bool header = false;
  bool center = false;
  int h0 = 1;
  double eta1 = 0.1;
  double eta2 = 0.9;
  std::vector<double> alphas{0.05};
  std::string k1 = "auto";
  std::string k2 = "auto";
  int threads = 0;
  std::string critvals_file;
  std::uint64_t seed = 1;
};

fcp::FactorCount parse_count(const std::string& text, const char* flag) {
  if (text == "auto") return fcp::kAutoCount;
  try {
    std::size_t used = 0;
    const int k = std::stoi(text, &used);
    if (used == text.size() && k >= 1) return k;
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string(flag) + " must be 'auto' or a positive integer");
}

void validate_common(const CommonOptions& o) {
  if (!(o.eta1 < o.eta2)) throw ConfigError("eta1 must be < eta2");
  if (!(o.eta1 > 0.0 && o.eta2 < 1.0)) throw ConfigError("eta1 and eta2 must lie in (0, 1)");
  if (o.h0 < 1 || o.h0 > fcp::kMaxLag) throw ConfigError("h0 must be in [1, " + std::to_string(fcp::kMaxLag) + "]");
  if (o.threads < 0) throw ConfigError("threads must be non-negative");
  for (double a : o.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  }
  parse_count(o.k1, "--k1");
  parse_count(o.k2, "--k2");
}

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_input) {
  auto* in = cmd->add_option("-i,--input", o.input, "Panel CSV (rows are time points)");
  if (needs_input) in->required();
  cmd->add_option("-o,--output", o.output, "Output JSON path (stdout when omitted)");
  cmd->add_flag("--header", o.header, "Skip a header row in the input");
  cmd->add_flag("--center", o.center, "Subtract column means before analysis");
  cmd->add_option("--h0", o.h0, "Number of lags pooled in the moment matrix")->capture_default_str();
  cmd->add_option("--eta1", o.eta1, "Lower trimming fraction")->capture_default_str();
  cmd->add_option("--eta2", o.eta2, "Upper trimming fraction")->capture_default_str();
  cmd->add_option("--alpha", o.alphas, "Significance level (repeatable)")->capture_default_str();
  cmd->add_option("--k1", o.k1, "Factors before the change ('auto' or integer)")->capture_default_str();
  cmd->add_option("--k2", o.k2, "Factors after the change ('auto' or integer)")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all available)")->capture_default_str();
  cmd->add_option("--critvals-file", o.critvals_file, "Critical-value table JSON instead of the cache");
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

fcp::TimeSeriesPanel read_input(const CommonOptions& o) {
  auto panel = fcp::load_panel(o.input, o.header);
  return o.center ? fcp::center_panel(panel) : panel;
}

fcp::CriticalValueTable critical_values_for(const CommonOptions& o) {
  if (!o.critvals_file.empty()) {
    auto table = fcp::load_critical_values(o.critvals_file);
    if (std::abs(table.eta1 - o.eta1) > 1e-12 || std::abs(table.eta2 - o.eta2) > 1e-12) {
      throw ConfigError("critical-value table was simulated for different eta1/eta2");
    }
    return table;
  }
  return fcp::cached_critical_values(o.eta1, o.eta2, fcp::kDefaultGridSize, fcp::kDefaultCvReplications,
                                     fcp::kDefaultCvSeed, o.threads);
}

void emit(const nlohmann::json& doc, const std::string& path) {
  const auto text = doc.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fcp::Error(fcp::ErrorKind::IoError, "cannot write " + path);
  out << text;
}

fcp::TestOptions test_options(const CommonOptions& o) {
  fcp::TestOptions t;
  t.h0 = o.h0;
  t.k1 = parse_count(o.k1, "--k1");
  t.k2 = parse_count(o.k2, "--k2");
  t.alphas = o.alphas;
  return t;
}

fcp::LocateOptions locate_options(const CommonOptions& o) {
  fcp::LocateOptions l;
  l.h0 = o.h0;
  l.k1 = parse_count(o.k1, "--k1");
  l.k2 = parse_count(o.k2, "--k2");
  l.threads = o.threads;
  return l;
}

void export_loadings(const fcp::ChangePointFit& fit, const std::string& prefix) {
  if (prefix.empty()) return;
  fcp::write_matrix_csv(prefix + "_q1.csv", fit.loading1.q_hat.matrix());
  fcp::write_matrix_csv(prefix + "_q2.csv", fit.loading2.q_hat.matrix());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change-point estimation and testing for high-dimensional factor models"};
  app.require_subcommand(1);

  CommonOptions test_opts, locate_opts, fit_opts;
  std::string locate_loadings, fit_loadings, fit_residuals;
  bool force_locate = false;

  auto* test_cmd = app.add_subcommand("test", "Self-normalized test for a single change point");
  add_common(test_cmd, test_opts, true);

  auto* locate_cmd = app.add_subcommand("locate", "Estimate the change-point location");
  add_common(locate_cmd, locate_opts, true);
  locate_cmd->add_option("--loadings", locate_loadings, "Write <prefix>_q1.csv and <prefix>_q2.csv");

  auto* fit_cmd = app.add_subcommand("fit", "Test, then locate and estimate loadings on rejection");
  add_common(fit_cmd, fit_opts, true);
  fit_cmd->add_flag("--force-locate", force_locate, "Locate even when the test does not reject");
  fit_cmd->add_option("--loadings", fit_loadings, "Write <prefix>_q1.csv and <prefix>_q2.csv");
  fit_cmd->add_option("--residuals", fit_residuals, "Write the residual panel as CSV");

  fcp::DgpSpec sim_spec;
  double sim_gamma0 = 0.5;
  bool sim_no_change = false;
  std::string sim_output, sim_truth;
  int sim_threads = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a panel from the two-regime factor model");
  sim_cmd->add_option("-o,--output", sim_output, "Panel CSV path")->required();
  sim_cmd->add_option("--truth", sim_truth, "Truth JSON path (loadings go to CSV sidecars)");
  sim_cmd->add_option("--n", sim_spec.n, "Time points")->capture_default_str();
  sim_cmd->add_option("--p", sim_spec.p, "Cross-sectional dimension")->capture_default_str();
  sim_cmd->add_option("--k1", sim_spec.k1, "Factors before the change")->capture_default_str();
  sim_cmd->add_option("--k2", sim_spec.k2, "Factors after the change")->capture_default_str();
  sim_cmd->add_option("--delta1", sim_spec.delta1, "Factor strength before the change")->capture_default_str();
  sim_cmd->add_option("--delta2", sim_spec.delta2, "Factor strength after the change")->capture_default_str();
  sim_cmd->add_option("--gamma0", sim_gamma0, "Change fraction")->capture_default_str();
  sim_cmd->add_flag("--no-change", sim_no_change, "Simulate without a change point");
  sim_cmd->add_option("--rho-e", sim_spec.rho_e, "Noise cross-correlation")->capture_default_str();
  sim_cmd->add_option("--seed", sim_spec.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--threads", sim_threads, "Unused; accepted for uniformity");

  double cv_eta1 = 0.1, cv_eta2 = 0.9;
  int cv_grid = fcp::kDefaultGridSize, cv_reps = fcp::kDefaultCvReplications, cv_threads = 0;
  std::uint64_t cv_seed = fcp::kDefaultCvSeed;
  std::string cv_output;
  auto* cv_cmd = app.add_subcommand("critvals", "Simulate a critical-value table");
  cv_cmd->add_option("-o,--output", cv_output, "Table JSON path (draws go to a .draws.bin sidecar)")->required();
  cv_cmd->add_option("--eta1", cv_eta1, "Lower trimming fraction")->capture_default_str();
  cv_cmd->add_option("--eta2", cv_eta2, "Upper trimming fraction")->capture_default_str();
  cv_cmd->add_option("--grid-size", cv_grid, "Brownian grid points")->capture_default_str();
  cv_cmd->add_option("--replications", cv_reps, "Monte Carlo replications")->capture_default_str();
  cv_cmd->add_option("--seed", cv_seed, "Random seed")->capture_default_str();
  cv_cmd->add_option("--threads", cv_threads, "Worker threads (0 = all available)")->capture_default_str();

  std::string bench_plan, bench_output, bench_critvals;
  int bench_threads = -1;
  auto* bench_cmd = app.add_subcommand("bench", "Run a Monte Carlo experiment plan");
  bench_cmd->add_option("--plan", bench_plan, "Experiment plan JSON")->required();
  bench_cmd->add_option("-o,--output", bench_output, "Report directory (overrides the plan)");
  bench_cmd->add_option("--critvals-file", bench_critvals, "Critical-value table JSON instead of the cache");
  bench_cmd->add_option("--threads", bench_threads, "Worker threads (overrides the plan)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*test_cmd) {
      validate_common(test_opts);
      apply_threads(test_opts.threads);
      const auto panel = read_input(test_opts);
      const auto cv = critical_values_for(test_opts);
      emit(fcp::to_json(fcp::test_change_point(panel, test_opts.eta1, test_opts.eta2, cv, test_options(test_opts))),
           test_opts.output);
    } else if (*locate_cmd) {
      validate_common(locate_opts);
      apply_threads(locate_opts.threads);
      const auto panel = read_input(locate_opts);
      const auto fit = fcp::locate_change_point(panel, fcp::FractionGrid(locate_opts.eta1, locate_opts.eta2),
                                                locate_options(locate_opts));
      export_loadings(fit, locate_loadings);
      emit(fcp::to_json(fit), locate_opts.output);
    } else if (*fit_cmd) {
      validate_common(fit_opts);
      apply_threads(fit_opts.threads);
      const auto panel = read_input(fit_opts);
      const auto cv = critical_values_for(fit_opts);
      const auto test = fcp::test_change_point(panel, fit_opts.eta1, fit_opts.eta2, cv, test_options(fit_opts));
      nlohmann::json doc = {{"schema_version", fcp::kSchemaVersion}, {"test", fcp::to_json(test)}};
      const bool rejected = test.reject.at(fit_opts.alphas.front());
      if (rejected || force_locate) {
        const auto fit = fcp::locate_change_point(panel, fcp::FractionGrid(fit_opts.eta1, fit_opts.eta2),
                                                  locate_options(fit_opts));
        export_loadings(fit, fit_loadings);
        if (!fit_residuals.empty()) fcp::save_panel(fit_residuals, fit.residuals);
        doc["change_point"] = fcp::to_json(fit);
        doc["forced"] = !rejected;
      } else {
        doc["change_point"] = nullptr;
        doc["forced"] = false;
      }
      emit(doc, fit_opts.output);
    } else if (*sim_cmd) {
      if (!sim_no_change) sim_spec.gamma0 = sim_gamma0;
      else sim_spec.gamma0.reset();
      try {
        sim_spec.validate();
      } catch (const fcp::Error& e) {
        throw ConfigError(e.what());
      }
      const auto sim = fcp::generate(sim_spec);
      fcp::save_panel(sim_output, sim.panel);
      if (!sim_truth.empty()) {
        const fs::path truth(sim_truth);
        emit(fcp::truth_to_json(sim_spec, sim.truth), sim_truth);
        auto stem = truth;
        stem.replace_extension();
        fcp::write_matrix_csv(stem.string() + "_a1.csv", sim.truth.a1);
        fcp::write_matrix_csv(stem.string() + "_a2.csv", sim.truth.a2);
      }
    } else if (*cv_cmd) {
      if (!(cv_eta1 < cv_eta2)) throw ConfigError("eta1 must be < eta2");
      apply_threads(cv_threads);
      const auto table = fcp::simulate_critical_values(cv_eta1, cv_eta2, cv_grid, cv_reps, cv_seed, cv_threads);
      fcp::save_critical_values(table, cv_output);
    } else if (*bench_cmd) {
      auto plan = fcp::load_plan(bench_plan);
      if (!bench_output.empty()) plan.output = bench_output;
      if (bench_threads >= 0) plan.threads = bench_threads;
      apply_threads(plan.threads);
      const auto cv = bench_critvals.empty() ? fcp::cached_critical_values(plan.eta1, plan.eta2)
                                             : fcp::load_critical_values(bench_critvals);
      fcp::ExperimentReport report;
      report.size = fcp::run_size_experiment(plan, cv);
      report.power_location = fcp::run_power_location_experiment(plan, cv);
      fcp::write_report(report, plan.output);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fcp::Error& e) {
    std::cerr << nlohmann::json{{"error", fcp::to_string(e.kind())}, {"message", e.what()}}.dump() << '\n';
    return e.kind() == fcp::ErrorKind::InvalidParams || e.kind() == fcp::ErrorKind::InvalidSpec ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
