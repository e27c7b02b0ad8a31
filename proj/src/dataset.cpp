#include "rbpcr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rbpcr/errors.hpp"

namespace rbpcr {

void Dataset::validate_normal_path(double hard_tol) const {
  const int nn = n();
  const int dd = d();
  if (nn < 3) throw numerical_error("dataset: need n >= 3");
  if (X.rows() != nn) throw numerical_error("dataset: X/y row mismatch");

  const double scale = static_cast<double>(nn - 1);
  auto fail = [](const std::string& what, double dev) {
    std::ostringstream msg;
    msg << "dataset: normal-path orthogonality violated (" << what
        << ", deviation " << dev << ")";
    throw numerical_error(msg.str());
  };

  double dev = std::fabs(y.sum() / nn);
  if (dev > hard_tol) fail("sum y != 0", dev);
  dev = std::fabs(y.squaredNorm() / scale - 1.0);
  if (dev > hard_tol) fail("sum y^2 != n-1", dev);

  dev = (X.col(0).array() - 1.0).abs().maxCoeff();
  if (dev > hard_tol) fail("intercept column != 1", dev);

  for (int j = 1; j < dd; ++j) {
    dev = std::fabs(X.col(j).sum() / nn);
    if (dev > hard_tol) fail("PC column not centred", dev);
    dev = std::fabs(X.col(j).squaredNorm() / scale - 1.0);
    if (dev > hard_tol) fail("PC column sum of squares != n-1", dev);
    for (int s = j + 1; s < dd; ++s) {
      dev = std::fabs(X.col(j).dot(X.col(s)) / scale);
      if (dev > hard_tol) fail("PC columns not orthogonal", dev);
    }
  }
}

void ModelSpec::validate(int d_total) const {
  if (cols.empty() || cols.front() != 1) {
    throw numerical_error("model spec: index set must start with column 1");
  }
  if (!std::is_sorted(cols.begin(), cols.end()) ||
      std::adjacent_find(cols.begin(), cols.end()) != cols.end()) {
    throw numerical_error("model spec: columns must be strictly increasing");
  }
  if (cols.back() > d_total) {
    throw numerical_error("model spec: column index exceeds design width");
  }
}

void ModelSpace::validate(int d_total) const {
  if (models.empty()) throw numerical_error("model space: empty");
  for (const auto& m : models) m.validate(d_total);
}

void ModelSpace::validate_nested(int d_total) const {
  validate(d_total);
  if (models.front().cols != std::vector<int>{1}) {
    throw numerical_error("model space: first model must be the intercept {1}");
  }
  for (std::size_t k = 1; k < models.size(); ++k) {
    const auto& prev = models[k - 1].cols;
    const auto& cur = models[k].cols;
    if (cur.size() != prev.size() + 1 ||
        !std::equal(prev.begin(), prev.end(), cur.begin())) {
      throw numerical_error(
          "model space: models must be nested, growing by one column");
    }
  }
}

ModelSpace ModelSpace::nested(const std::vector<int>& retained_cols) {
  ModelSpace space;
  ModelSpec cur{{1}};
  space.models.push_back(cur);
  for (int col : retained_cols) {
    cur.cols.push_back(col);
    space.models.push_back(cur);
  }
  return space;
}

Eigen::MatrixXd design_for(const Dataset& data, const ModelSpec& model) {
  Eigen::MatrixXd Xk(data.n(), model.dim());
  for (int j = 0; j < model.dim(); ++j) {
    Xk.col(j) = data.X.col(model.cols[static_cast<std::size_t>(j)] - 1);
  }
  return Xk;
}

Eigen::VectorXd restrict_row(const Eigen::VectorXd& x_full,
                             const ModelSpec& model) {
  Eigen::VectorXd out(model.dim());
  for (int j = 0; j < model.dim(); ++j) {
    out[j] = x_full[model.cols[static_cast<std::size_t>(j)] - 1];
  }
  return out;
}

}  // namespace rbpcr
