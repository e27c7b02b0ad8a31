#include "rbpcr/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rbpcr/errors.hpp"

namespace rbpcr::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Table read_numeric(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw input_error("empty file: " + path);
  Table table;
  table.header = split_line(line);
  const std::size_t n_cols = table.header.size();
  if (n_cols == 0) throw input_error("no columns in header: " + path);

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_line(line);
    if (cells.size() != n_cols) {
      std::ostringstream msg;
      msg << path << ": row " << line_no << " has " << cells.size()
          << " cells, expected " << n_cols;
      throw input_error(msg.str());
    }
    std::vector<double> row(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
      const std::string& cell = cells[c];
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        std::ostringstream msg;
        msg << path << ": non-numeric cell '" << cell << "' at row "
            << line_no << ", column " << (c + 1) << " ('" << table.header[c]
            << "')";
        throw input_error(msg.str());
      }
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }

  table.values.resize(static_cast<int>(rows.size()), static_cast<int>(n_cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      table.values(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
  }
  return table;
}

void write_numeric(const std::string& path,
                   const std::vector<std::string>& header,
                   const Eigen::MatrixXd& values) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write file: " + path);
  out.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  for (int r = 0; r < values.rows(); ++r) {
    for (int c = 0; c < values.cols(); ++c) {
      const double v = values(r, c);
      if (!std::isnan(v)) out << v;
      out << (c + 1 < values.cols() ? "," : "\n");
    }
  }
}

}  // namespace rbpcr::csv
