#include "rbpcr/lptn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rbpcr/normal.hpp"
#include "rbpcr/rng.hpp"

namespace rbpcr {

double lptn_rho_lower_bound() { return 2.0 * stdnorm::cdf(1.0) - 1.0; }

LptnParams lptn_params(double rho) {
  const double lo = lptn_rho_lower_bound();
  if (!(rho > lo) || !(rho < 1.0)) {
    std::ostringstream msg;
    msg << "lptn_params: rho = " << rho
        << " outside the valid open interval (2*Phi(1)-1, 1) = (" << lo
        << ", 1)";
    throw std::domain_error(msg.str());
  }
  LptnParams p;
  p.rho = rho;
  p.tau = stdnorm::quantile(0.5 * (1.0 + rho));
  p.lambda = 2.0 / (1.0 - rho) * stdnorm::pdf(p.tau) * p.tau * std::log(p.tau);
  p.log_phi_tau = stdnorm::log_pdf(p.tau);
  p.log_tau = std::log(p.tau);
  p.log_log_tau = std::log(p.log_tau);
  return p;
}

double lptn_logpdf(double x, const LptnParams& p) {
  const double ax = std::fabs(x);
  if (ax <= p.tau) return stdnorm::log_pdf(x);
  const double log_ax = std::log(ax);
  return p.log_phi_tau + p.log_tau - log_ax +
         (p.lambda + 1.0) * (p.log_log_tau - std::log(log_ax));
}

double lptn_dlogpdf(double x, const LptnParams& p) {
  const double ax = std::fabs(x);
  if (ax <= p.tau) return -x;
  return -1.0 / x - (p.lambda + 1.0) / (x * std::log(ax));
}

double lptn_cdf(double x, const LptnParams& p) {
  const double ax = std::fabs(x);
  if (ax <= p.tau) return stdnorm::cdf(x);
  // Integrating the tail density gives mass
  // (1-rho)/2 * (log tau / log x)^lambda beyond x > tau.
  const double tail =
      0.5 * (1.0 - p.rho) * std::pow(p.log_tau / std::log(ax), p.lambda);
  return x > 0.0 ? 1.0 - tail : tail;
}

double lptn_quantile(double u, const LptnParams& p) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("lptn_quantile: u must lie in (0, 1)");
  }
  const double lo = 0.5 * (1.0 - p.rho);
  const double hi = 0.5 * (1.0 + p.rho);
  if (u >= lo && u <= hi) return stdnorm::quantile(u);
  // Tail inversion of (1-rho)/2 * (log tau / log x)^lambda.
  const double tail_mass = u > hi ? 1.0 - u : u;
  const double log_x =
      p.log_tau * std::pow(0.5 * (1.0 - p.rho) / tail_mass, 1.0 / p.lambda);
  const double x = std::exp(log_x);
  return u > hi ? x : -x;
}

std::vector<double> lptn_sample(std::size_t n, const LptnParams& p,
                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lptn_quantile(rng.uniform(), p);
  return out;
}

}  // namespace rbpcr
