#ifndef RBPCR_ROBUST_HPP
#define RBPCR_ROBUST_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbpcr/lptn.hpp"

namespace rbpcr {

struct RobustFit {
  Eigen::VectorXd beta;  // intercept first
  double sigma = 0.0;
  bool converged = false;
  double objective = 0.0;  // final negative log-posterior
  int iterations = 0;
};

// Thrown when the optimizer exhausts its iteration cap without meeting
// the gradient tolerance; carries the best point reached.
class robust_fit_error : public std::runtime_error {
 public:
  robust_fit_error(const std::string& msg, RobustFit best)
      : std::runtime_error(msg), best_fit(std::move(best)) {}
  RobustFit best_fit;
};

// Negative log-posterior (n+1) log sigma - sum_i log f((y_i - x_i'b)/sigma)
// of the LPTN regression model with prior 1/sigma, parameterized by
// (beta, log sigma). Exposed for gradient checks.
double robust_neg_log_posterior(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y,
                                const Eigen::VectorXd& beta, double log_sigma,
                                const LptnParams& p);

// Analytic gradient in (beta, log sigma); piecewise with one-sided values
// on the kink |z| = tau.
Eigen::VectorXd robust_neg_log_posterior_grad(const Eigen::MatrixXd& X,
                                              const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& beta,
                                              double log_sigma,
                                              const LptnParams& p);

// MAP of the location-scale model (intercept-only regression).
// Requires n >= 3 and non-constant input.
RobustFit map_location_scale(const Eigen::VectorXd& x, const LptnParams& p);

// MAP of (beta, sigma) under LPTN errors, quasi-Newton from an OLS start
// and a median-based high-breakdown start; the lower objective wins, exact
// ties break toward the smaller ||beta||. Requires n > d and full column
// rank.
RobustFit map_regression(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const LptnParams& p);

struct ResidualReport {
  Eigen::VectorXd z;         // standardized residuals (y - X beta) / sigma
  std::vector<bool> flags;   // |z| > threshold
  double threshold = 2.5;
};

ResidualReport standardized_residuals(const RobustFit& fit,
                                      const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& y,
                                      double threshold = 2.5);

// OLS solve (QR); shared by warm starts and tests.
Eigen::VectorXd ols_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace rbpcr

#endif  // RBPCR_ROBUST_HPP
