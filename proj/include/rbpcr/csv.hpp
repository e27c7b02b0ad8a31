#ifndef RBPCR_CSV_HPP
#define RBPCR_CSV_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace rbpcr::csv {

struct Table {
  std::vector<std::string> header;
  Eigen::MatrixXd values;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  int column_index(const std::string& name) const;  // -1 when absent
};

// Reads a numeric CSV with one header row. Throws input_error naming the
// (1-based) row and column of the first non-numeric cell.
Table read_numeric(const std::string& path);

// Writes rows of numeric cells; NaN becomes an empty cell.
void write_numeric(const std::string& path,
                   const std::vector<std::string>& header,
                   const Eigen::MatrixXd& values);

}  // namespace rbpcr::csv

#endif  // RBPCR_CSV_HPP
