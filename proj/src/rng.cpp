#include "rbpcr/rng.hpp"

#include <cmath>

#include "rbpcr/normal.hpp"

namespace rbpcr {

double Rng::normal() { return stdnorm::quantile(uniform()); }

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    // Boost the shape and correct with a power of a uniform.
    const double u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::truncated_normal_positive(double mu, double sd) {
  for (;;) {
    const double x = normal(mu, sd);
    if (x > 0.0) return x;
  }
}

}  // namespace rbpcr
