#include "factorcp/report_io.hpp"

#include "factorcp/error.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

namespace fcp {

nlohmann::json to_json(const ChangePointFit& fit) {
  nlohmann::json trace = nlohmann::json::array();
  for (std::size_t i = 0; i < fit.trace.values.size(); ++i) {
    trace.push_back({{"gamma", fit.trace.gammas[i]}, {"value", fit.trace.values[i]}});
  }
  return {{"schema_version", kSchemaVersion},
          {"gamma_hat", fit.gamma_hat},
          {"r_hat", fit.r_hat},
          {"n", fit.residuals.n()},
          {"k1", fit.k1},
          {"k2", fit.k2},
          {"rss", fit.rss},
          {"trace", std::move(trace)}};
}

nlohmann::json to_json(const SnTestResult& result) {
  nlohmann::json cvs = nlohmann::json::object();
  nlohmann::json reject = nlohmann::json::object();
  for (const auto& [alpha, cv] : result.critical_values) cvs[alpha_key(alpha)] = cv;
  for (const auto& [alpha, flag] : result.reject) reject[alpha_key(alpha)] = flag;
  return {{"schema_version", kSchemaVersion},
          {"t_n", result.t_n},
          {"argmax_r", result.argmax_r},
          {"argmax_gamma", static_cast<double>(result.argmax_r) / static_cast<double>(result.n)},
          {"n", result.n},
          {"b_source", result.b_source},
          {"k1", result.k1},
          {"k2", result.k2},
          {"critical_values", std::move(cvs)},
          {"p_value", result.p_value},
          {"reject", std::move(reject)}};
}

nlohmann::json to_json(const CriticalValueTable& table) {
  nlohmann::json quantiles = nlohmann::json::object();
  for (const auto& [alpha, value] : table.quantiles) quantiles[alpha_key(alpha)] = value;
  return {{"schema_version", kSchemaVersion},
          {"eta1", table.eta1},
          {"eta2", table.eta2},
          {"grid_size", table.grid_size},
          {"replications", table.replications},
          {"seed", table.seed},
          {"quantiles", std::move(quantiles)},
          {"draws_digest", table.draws_digest()}};
}

nlohmann::json truth_to_json(const DgpSpec& spec, const DgpTruth& truth) {
  nlohmann::json out = {{"schema_version", kSchemaVersion},
                        {"n", spec.n},
                        {"p", spec.p},
                        {"k1", spec.k1},
                        {"k2", spec.gamma0 ? spec.k2 : spec.k1},
                        {"delta1", spec.delta1},
                        {"delta2", spec.gamma0 ? spec.delta2 : spec.delta1},
                        {"rho_e", spec.rho_e},
                        {"r0", truth.r0},
                        {"seed", spec.seed}};
  out["gamma0"] = truth.gamma0 ? nlohmann::json(*truth.gamma0) : nlohmann::json(nullptr);
  return out;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << matrix(i, j);
    }
    out << '\n';
  }
}

}  // namespace fcp
