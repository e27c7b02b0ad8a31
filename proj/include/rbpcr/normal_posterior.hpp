#ifndef RBPCR_NORMAL_POSTERIOR_HPP
#define RBPCR_NORMAL_POSTERIOR_HPP

#include <Eigen/Dense>
#include <vector>

#include "rbpcr/dataset.hpp"

namespace rbpcr {

// Closed-form posterior under normal errors with prior pi(sigma, beta | k)
// proportional to 1/sigma, for orthogonal standardized designs. Model
// probabilities follow
//   pi(k | y)  ~  pi(k) Gamma((n-d_k)/2) pi^{d_k/2} (rss_k/(n-1))^{-(n-d_k)/2},
// sigma_k^2 | k is inverse-gamma((n-d_k)/2, rss_k/2), and the beta_{j,k}
// are independent normals around the projection coefficients.

// Projection coefficients: first entry exactly 0, entries j >= 2 equal
// sum_i x_{i I_{j,k}} y_i / (n-1). Coincides with OLS on orthogonal designs.
Eigen::VectorXd beta_hat(const ModelSpec& model, const Dataset& data);

// Residual sum of squares ||y - X_k beta_hat_k||^2.
double rss_for(const ModelSpec& model, const Dataset& data);

// Log of the unnormalized model weight. log_prior is log pi(k) up to a
// common constant (0 for the uniform prior). Requires n > d_k and a
// design satisfying the orthogonality invariants (validated, hard error
// beyond 1e-4). Throws numerical_error for degenerate or exact-fit data.
double model_log_weight(const ModelSpec& model, const Dataset& data,
                        double log_prior = 0.0);

struct NormalPosteriorSummary {
  std::vector<double> model_log_weights;  // unnormalized
  std::vector<double> model_probs;        // normalized via log-sum-exp
  std::vector<Eigen::VectorXd> beta;      // beta_hat per model
  std::vector<double> rss;
  std::vector<double> sigma_shape;        // inverse-gamma shape (n-d_k)/2
  std::vector<double> sigma_rate;         // inverse-gamma rate rss/2
};

// log_priors, when given, must align with space.models; nullptr means
// the uniform prior pi(k) proportional to 1.
NormalPosteriorSummary normal_posterior(
    const ModelSpace& space, const Dataset& data,
    const std::vector<double>* log_priors = nullptr);

// Model-averaged point prediction sum_k pi(k|y) x_new_k' beta_hat_k.
// x_new is a full design row (intercept first, d entries).
double predict_model_average(const ModelSpace& space, const Dataset& data,
                             const Eigen::VectorXd& x_new,
                             const std::vector<double>* log_priors = nullptr);

// Finite-n diagnostic of the asymptotic agreement between posterior odds
// and BIC differences for nested model pairs.
struct BicOddsDiagnostic {
  double log_posterior_odds;  // log pi(t|y) - log pi(s|y), uniform prior
  double neg_half_bic_diff;   // -(BIC_t - BIC_s)/2
  double difference;          // log_posterior_odds - neg_half_bic_diff
  double log_gamma_ratio;     // log Gamma((n-d_t)/2) - log Gamma((n-d_s)/2)
  double bic_s;
  double bic_t;
};

BicOddsDiagnostic bic_posterior_consistency(const ModelSpec& s,
                                            const ModelSpec& t,
                                            const Dataset& data);

// log(sum_i exp(v_i)) guarded against overflow.
double log_sum_exp(const std::vector<double>& v);

}  // namespace rbpcr

#endif  // RBPCR_NORMAL_POSTERIOR_HPP
