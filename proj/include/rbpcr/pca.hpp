#ifndef RBPCR_PCA_HPP
#define RBPCR_PCA_HPP

#include <Eigen/Dense>
#include <vector>

#include "rbpcr/lptn.hpp"

namespace rbpcr {

enum class StandardizeMode { sample, robust };
enum class PcaPath { normal, robust };

struct ColumnStats {
  double mu = 0.0;
  double sigma = 1.0;
};

struct StandardizedMatrix {
  Eigen::MatrixXd C;
  std::vector<ColumnStats> stats;
};

// Column-wise standardization. Sample mode uses mean and sd (n-1);
// robust mode uses the LPTN location-scale MAP per column. Throws
// numerical_error naming the column when a column is constant.
StandardizedMatrix standardize(const Eigen::MatrixXd& C_raw,
                               StandardizeMode mode,
                               const LptnParams* p = nullptr);

// Apply previously fitted stats to new rows.
Eigen::MatrixXd apply_standardization(const Eigen::MatrixXd& C_raw,
                                      const std::vector<ColumnStats>& stats);

// C'C/(n-1) for standardized C.
Eigen::MatrixXd sample_correlation(const Eigen::MatrixXd& C);

struct RobustCorrelationOptions {
  bool clip = true;     // clip off-diagonals into [-1, 1]
  int n_threads = 0;    // 0 = hardware default
};

// Pairwise LPTN regression slopes on robust-standardized columns: the
// upper-triangle entry (j1, j2), j1 < j2, is the slope of column j2
// regressed on column j1; mirrored to the lower triangle, unit diagonal.
// Not guaranteed positive semidefinite. Estimator failures are rethrown
// tagged with the column pair.
Eigen::MatrixXd robust_correlation(const Eigen::MatrixXd& C,
                                   const LptnParams& p,
                                   const RobustCorrelationOptions& opt = {});

struct PcaResult {
  PcaPath path = PcaPath::normal;
  Eigen::VectorXd eigenvalues;   // surviving spectrum, descending
  Eigen::MatrixXd eigenvectors;  // p x r, orthonormal columns, sign-fixed
  int q = 0;                     // retained count from the variance cap
  Eigen::MatrixXd scores;        // n x r; normal path scaled to sumsq n-1,
                                 // robust path raw C v_j
  std::vector<ColumnStats> column_stats;
  std::vector<int> excluded;     // spectrum positions dropped (lambda <= 0)

  int r() const { return static_cast<int>(eigenvalues.size()); }
};

// Symmetric eigendecomposition of R with the spectrum sorted descending.
// Eigenpairs with lambda <= 1e-10 are dropped and their positions
// recorded; q is the largest count with cumulative variance fraction at
// most cap, floored at 1. Eigenvector signs are canonicalized so each
// column's largest-magnitude entry is positive.
PcaResult decompose(const Eigen::MatrixXd& R, const Eigen::MatrixXd& C,
                    PcaPath path, const std::vector<ColumnStats>& stats,
                    double cap = 0.95);

// Rank-q approximation of the standardized matrix (q <= r).
Eigen::MatrixXd reconstruct(const PcaResult& res, int q);

// Scores of new standardized rows under the fitted decomposition.
Eigen::MatrixXd transform(const PcaResult& res, const Eigen::MatrixXd& C_new);

}  // namespace rbpcr

#endif  // RBPCR_PCA_HPP
