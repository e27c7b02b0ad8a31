#ifndef RBPCR_NORMAL_HPP
#define RBPCR_NORMAL_HPP

namespace rbpcr::stdnorm {

double pdf(double x);
double log_pdf(double x);
double cdf(double x);

// Inverse CDF. Wichura's AS 241 (PPND16) rational approximation followed
// by one Newton step against the erfc-based CDF; absolute error is at the
// 1e-15 level across (0, 1). Throws std::domain_error outside (0, 1).
double quantile(double p);

}  // namespace rbpcr::stdnorm

#endif  // RBPCR_NORMAL_HPP
