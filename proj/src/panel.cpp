#include "factorcp/panel.hpp"

#include "factorcp/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

namespace fcp {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorKind::ParseError, "non-numeric cell at row " + std::to_string(row) + " column " +
                                           std::to_string(col) + ": '" + std::string(cell) + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::ParseError,
                "non-finite cell at row " + std::to_string(row) + " column " + std::to_string(col));
  }
  return value;
}

}  // namespace

TimeSeriesPanel::TimeSeriesPanel(PanelMatrix values) : values_(std::move(values)) {
  if (values_.rows() < 2) {
    throw Error(ErrorKind::EmptyPanel, "panel needs at least 2 time points, got " + std::to_string(values_.rows()));
  }
  if (values_.cols() < 1) throw Error(ErrorKind::EmptyPanel, "panel has no columns");
  if (!values_.allFinite()) throw Error(ErrorKind::ParseError, "panel contains non-finite values");
}

TimeSeriesPanel TimeSeriesPanel::slice(Eigen::Index begin, Eigen::Index end) const {
  if (begin < 0 || end > n() || end - begin < 2) {
    throw Error(ErrorKind::InvalidParams, "invalid panel slice [" + std::to_string(begin) + ", " +
                                              std::to_string(end) + ")");
  }
  return TimeSeriesPanel(values_.middleRows(begin, end - begin));
}

TimeSeriesPanel parse_panel(std::istream& in, bool has_header) {
  std::vector<double> cells;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::string line;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    ++rows;
    std::size_t col = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(parse_cell(rest.substr(0, comma), rows, ++col));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 1) {
      width = col;
    } else if (col != width) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(rows) + " has " + std::to_string(col) +
                                             " columns, expected " + std::to_string(width));
    }
  }
  if (rows < 2) throw Error(ErrorKind::EmptyPanel, "panel needs at least 2 data rows, got " + std::to_string(rows));
  PanelMatrix values = Eigen::Map<PanelMatrix>(cells.data(), static_cast<Eigen::Index>(rows),
                                               static_cast<Eigen::Index>(width));
  return TimeSeriesPanel(std::move(values));
}

TimeSeriesPanel load_panel(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return parse_panel(in, has_header);
}

void write_panel(std::ostream& out, const TimeSeriesPanel& panel) {
  const auto& v = panel.values();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index t = 0; t < v.rows(); ++t) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (j) out << ',';
      out << v(t, j);
    }
    out << '\n';
  }
}

void save_panel(const std::filesystem::path& path, const TimeSeriesPanel& panel) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  write_panel(out, panel);
}

TimeSeriesPanel center_panel(const TimeSeriesPanel& panel) {
  const Eigen::RowVectorXd means = panel.values().colwise().mean();
  PanelMatrix centered = panel.values().rowwise() - means;
  return TimeSeriesPanel(std::move(centered));
}

FractionGrid::FractionGrid(double eta1, double eta2) : eta1_(eta1), eta2_(eta2) {
  if (!(eta1 > 0.0 && eta1 < 1.0 && eta2 > 0.0 && eta2 < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "eta1 and eta2 must lie in (0, 1)");
  }
  if (!(eta1 < eta2)) throw Error(ErrorKind::InvalidParams, "eta1 must be < eta2");
}

Eigen::Index FractionGrid::boundary_index(double eta, Eigen::Index n) {
  return static_cast<Eigen::Index>(std::floor(eta * static_cast<double>(n) + 1e-9));
}

std::vector<Eigen::Index> FractionGrid::candidates(Eigen::Index n) const {
  const auto first = boundary_index(eta1_, n) + 1;
  const auto last = static_cast<Eigen::Index>(std::ceil(eta2_ * static_cast<double>(n) - 1e-9)) - 1;
  std::vector<Eigen::Index> out;
  for (auto r = std::max<Eigen::Index>(first, 1); r <= std::min(last, n - 1); ++r) out.push_back(r);
  return out;
}

}  // namespace fcp
