#include "rbpcr/normal.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace rbpcr::stdnorm {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599344;
constexpr double kLogInvSqrt2Pi = -0.9189385332046727417803297364056;
}  // namespace

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_pdf(double x) { return kLogInvSqrt2Pi - 0.5 * x * x; }

double cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("stdnorm::quantile: p must lie in (0, 1)");
  }

  static const std::array<double, 8> a{
      3.3871328727963996080e0, 1.3314166789178437745e2,
      1.9715909503065514427e3, 1.3731693765509461125e4,
      4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3};
  static const std::array<double, 8> b{
      1.0,                     4.2313330701600911252e1,
      6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4,
      2.8729085735721942674e4, 5.2264952788528545610e3};
  static const std::array<double, 8> c{
      1.42343711074968357734e0,  4.63033784615654529590e0,
      5.76949722146069140550e0,  3.64784832476320460504e0,
      1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const std::array<double, 8> d{
      1.0,                       2.05319162663775882187e0,
      1.67638483018380384940e0,  6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const std::array<double, 8> e{
      6.65790464350110377720e0,  5.46378491116411436990e0,
      1.78482653991729133580e0,  2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const std::array<double, 8> f{
      1.0,                       5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  auto ratpoly = [](const std::array<double, 8>& num,
                    const std::array<double, 8>& den, double r) {
    double n = num[7];
    double m = den[7];
    for (int i = 6; i >= 0; --i) {
      n = n * r + num[i];
      m = m * r + den[i];
    }
    return n / m;
  };

  const double q = p - 0.5;
  double x;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    x = q * ratpoly(a, b, r);
  } else {
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
      x = ratpoly(c, d, r - 1.6);
    } else {
      x = ratpoly(e, f, r - 5.0);
    }
    if (q < 0.0) x = -x;
  }

  // One Newton polish; pdf(x) > 0 for all representable quantiles of
  // interest, and the correction is ~1e-16 relative near the centre.
  const double err = cdf(x) - p;
  const double dens = pdf(x);
  if (dens > 0.0) x -= err / dens;
  return x;
}

}  // namespace rbpcr::stdnorm
