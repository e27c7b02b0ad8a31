#ifndef RBPCR_LPTN_HPP
#define RBPCR_LPTN_HPP

#include <cstdint>
#include <vector>

namespace rbpcr {

// Log-Pareto-tailed standard normal. The density equals the standard
// normal on [-tau, tau] and decays like (1/|x|)(log|x|)^(-lambda-1)
// beyond, which keeps the normal core probability mass at rho while the
// tails stay heavy enough for whole robustness.
struct LptnParams {
  double rho;     // probability mass of the normal core
  double tau;     // core/tail boundary, > 1
  double lambda;  // tail decay exponent, > 0

  // Cached constants reused by the log-density and CDF.
  double log_phi_tau;
  double log_tau;
  double log_log_tau;
};

// Valid rho interval is the open (2*Phi(1)-1, 1).
double lptn_rho_lower_bound();

// Derives (tau, lambda) from rho. Throws std::domain_error when rho is
// outside the valid open interval.
LptnParams lptn_params(double rho);

double lptn_logpdf(double x, const LptnParams& p);
double lptn_cdf(double x, const LptnParams& p);

// Derivative of the log-density in x. One-sided (core-side) value is
// returned at |x| == tau, where the density has a kink.
double lptn_dlogpdf(double x, const LptnParams& p);

// Inverse CDF. Throws std::domain_error for u outside (0, 1).
double lptn_quantile(double u, const LptnParams& p);

// n i.i.d. draws by inverse transform of a deterministic uniform stream.
std::vector<double> lptn_sample(std::size_t n, const LptnParams& p,
                                std::uint64_t seed);

}  // namespace rbpcr

#endif  // RBPCR_LPTN_HPP
