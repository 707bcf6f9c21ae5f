#pragma once

#include "factorcp/dgp.hpp"
#include "factorcp/locate.hpp"
#include "factorcp/sntest.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>

namespace fcp {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ChangePointFit& fit);
nlohmann::json to_json(const SnTestResult& result);
nlohmann::json to_json(const CriticalValueTable& table);
nlohmann::json truth_to_json(const DgpSpec& spec, const DgpTruth& truth);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& matrix);

}  // namespace fcp
