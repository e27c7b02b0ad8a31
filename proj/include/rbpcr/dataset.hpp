#ifndef RBPCR_DATASET_HPP
#define RBPCR_DATASET_HPP

#include <Eigen/Dense>
#include <vector>

namespace rbpcr {

// Standardized response and design matrix. Column 1 of X is the
// intercept (all ones); columns 2..d hold principal components. Index
// sets below use the same 1-based column convention.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;

  int n() const { return static_cast<int>(y.size()); }
  int d() const { return static_cast<int>(X.cols()); }

  // Checks the exact-orthogonality requirements of the closed-form
  // normal-error posterior: y centred with sum of squares n-1, PC
  // columns centred, scaled to n-1 and pairwise orthogonal. Throws
  // numerical_error when any deviation exceeds hard_tol. The robust
  // path never calls this.
  void validate_normal_path(double hard_tol = 1e-4) const;
};

// Index set I_k of one model: 1-based design columns, sorted ascending,
// always containing the intercept column 1.
struct ModelSpec {
  std::vector<int> cols;

  int dim() const { return static_cast<int>(cols.size()); }
  void validate(int d_total) const;
};

// Ordered list of models. The second analysis stage uses a nested
// sequence: I_1 = {1} and each model extends the previous by one column.
struct ModelSpace {
  std::vector<ModelSpec> models;

  int k_max() const { return static_cast<int>(models.size()); }
  void validate(int d_total) const;
  void validate_nested(int d_total) const;

  // Nested sequence {1}, {1, j1}, {1, j1, j2}, ... from retained columns.
  static ModelSpace nested(const std::vector<int>& retained_cols);
};

// Copy of the columns of X selected by the model, in I_k order.
Eigen::MatrixXd design_for(const Dataset& data, const ModelSpec& model);

// Subvector of a full covariate row (with intercept) matching the model.
Eigen::VectorXd restrict_row(const Eigen::VectorXd& x_full,
                             const ModelSpec& model);

}  // namespace rbpcr

#endif  // RBPCR_DATASET_HPP
