#include "rbpcr/normal_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rbpcr/errors.hpp"

namespace rbpcr {

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Eigen::VectorXd beta_hat(const ModelSpec& model, const Dataset& data) {
  model.validate(data.d());
  const double scale = static_cast<double>(data.n() - 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(model.dim());
  for (int j = 1; j < model.dim(); ++j) {
    const int col = model.cols[static_cast<std::size_t>(j)] - 1;
    b[j] = data.X.col(col).dot(data.y) / scale;
  }
  return b;
}

double rss_for(const ModelSpec& model, const Dataset& data) {
  const Eigen::VectorXd b = beta_hat(model, data);
  const Eigen::MatrixXd Xk = design_for(data, model);
  return (data.y - Xk * b).squaredNorm();
}

double model_log_weight(const ModelSpec& model, const Dataset& data,
                        double log_prior) {
  data.validate_normal_path();
  const int n = data.n();
  const int dk = model.dim();
  if (n <= dk) {
    std::ostringstream msg;
    msg << "model_log_weight: degenerate model, n = " << n
        << " <= d_k = " << dk;
    throw numerical_error(msg.str());
  }
  const double rss = rss_for(model, data);
  if (rss <= 0.0) {
    throw numerical_error(
        "model_log_weight: exact fit (rss = 0), log weight undefined");
  }
  const double half_nd = 0.5 * (n - dk);
  return log_prior + std::lgamma(half_nd) +
         0.5 * dk * std::log(std::numbers::pi) -
         half_nd * std::log(rss / (n - 1));
}

NormalPosteriorSummary normal_posterior(const ModelSpace& space,
                                        const Dataset& data,
                                        const std::vector<double>* log_priors) {
  space.validate(data.d());
  if (log_priors && log_priors->size() != space.models.size()) {
    throw numerical_error("normal_posterior: log_priors size mismatch");
  }
  NormalPosteriorSummary out;
  const int k_max = space.k_max();
  out.model_log_weights.reserve(static_cast<std::size_t>(k_max));
  for (int k = 0; k < k_max; ++k) {
    const auto& model = space.models[static_cast<std::size_t>(k)];
    const double lp = log_priors ? (*log_priors)[static_cast<std::size_t>(k)]
                                 : 0.0;
    out.model_log_weights.push_back(model_log_weight(model, data, lp));
    out.beta.push_back(beta_hat(model, data));
    out.rss.push_back(rss_for(model, data));
    out.sigma_shape.push_back(0.5 * (data.n() - model.dim()));
    out.sigma_rate.push_back(0.5 * out.rss.back());
  }
  const double lse = log_sum_exp(out.model_log_weights);
  out.model_probs.reserve(static_cast<std::size_t>(k_max));
  for (double lw : out.model_log_weights) {
    out.model_probs.push_back(std::exp(lw - lse));
  }
  return out;
}

double predict_model_average(const ModelSpace& space, const Dataset& data,
                             const Eigen::VectorXd& x_new,
                             const std::vector<double>* log_priors) {
  if (x_new.size() != data.d()) {
    throw numerical_error("predict_model_average: x_new has wrong dimension");
  }
  const NormalPosteriorSummary post = normal_posterior(space, data, log_priors);
  double pred = 0.0;
  for (std::size_t k = 0; k < space.models.size(); ++k) {
    const Eigen::VectorXd xk = restrict_row(x_new, space.models[k]);
    pred += post.model_probs[k] * xk.dot(post.beta[k]);
  }
  return pred;
}

namespace {
double bic(double rss, int n, int dk) {
  return n * std::log(rss / n) + (dk + 1) * std::log(static_cast<double>(n));
}
}  // namespace

BicOddsDiagnostic bic_posterior_consistency(const ModelSpec& s,
                                            const ModelSpec& t,
                                            const Dataset& data) {
  const int n = data.n();
  if (!std::includes(t.cols.begin(), t.cols.end(), s.cols.begin(),
                     s.cols.end())) {
    throw numerical_error("bic_posterior_consistency: s must be nested in t");
  }
  BicOddsDiagnostic diag;
  diag.log_posterior_odds =
      model_log_weight(t, data) - model_log_weight(s, data);
  diag.bic_s = bic(rss_for(s, data), n, s.dim());
  diag.bic_t = bic(rss_for(t, data), n, t.dim());
  diag.neg_half_bic_diff = -0.5 * (diag.bic_t - diag.bic_s);
  diag.difference = diag.log_posterior_odds - diag.neg_half_bic_diff;
  diag.log_gamma_ratio = std::lgamma(0.5 * (n - t.dim())) -
                         std::lgamma(0.5 * (n - s.dim()));
  return diag;
}

}  // namespace rbpcr
