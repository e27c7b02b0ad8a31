// Test-only oracles, deliberately independent of the library's
// implementation paths: quadrature, bisection probit, normal-equation
// least squares and textbook statistics formulas.
#ifndef RBPCR_TESTS_ORACLES_HPP
#define RBPCR_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracles {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Probit by bisection on the erfc-based CDF; ~1e-15 accurate.
inline double probit_bisect(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Gauss-Legendre nodes/weights on [-1, 1] (Newton iteration on P_n).
struct GaussLegendre {
  std::vector<double> nodes, weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
      weights[n - 1 - i] = weights[i];
    }
  }
};

// Composite Gauss-Legendre integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, int panels = 16, int order = 16) {
  static const GaussLegendre gl(16);
  const GaussLegendre* rule = &gl;
  GaussLegendre custom(order);
  if (order != 16) rule = &custom;
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      total += 0.5 * h * rule->weights[i] * f(mid + 0.5 * h * rule->nodes[i]);
    }
  }
  return total;
}

// Least squares through the normal equations (a route independent of the
// library's QR-based solves).
inline Eigen::VectorXd ols_normal_equations(const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& y) {
  return (X.transpose() * X).ldlt().solve(X.transpose() * y);
}

inline double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double ma = a.mean(), mb = b.mean();
  const Eigen::ArrayXd da = a.array() - ma, db = b.array() - mb;
  return (da * db).sum() / std::sqrt(da.square().sum() * db.square().sum());
}

inline double sample_sd(const Eigen::VectorXd& a) {
  const double m = a.mean();
  return std::sqrt((a.array() - m).square().sum() / (a.size() - 1));
}

// Design with exactly centred, pairwise orthogonal PC columns scaled to
// sum of squares n-1, plus the intercept, via repeated QR.
inline Eigen::MatrixXd orthonormal_design(int n, int q, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd Z(n, q);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < q; ++j) Z(i, j) = gauss(eng);
  }
  // Columns of Q span the centred column space, which is orthogonal to
  // the ones vector, so they stay centred to machine precision.
  Z.rowwise() -= Z.colwise().mean();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  Z = qr.householderQ() * Eigen::MatrixXd::Identity(n, q);
  Z *= std::sqrt(static_cast<double>(n - 1));
  Eigen::MatrixXd X(n, q + 1);
  X.col(0).setOnes();
  X.rightCols(q) = Z;
  return X;
}

// y standardized to mean 0 and sum of squares n-1.
inline Eigen::VectorXd standardize_response(Eigen::VectorXd y) {
  y.array() -= y.mean();
  y *= std::sqrt((y.size() - 1) / y.squaredNorm());
  return y;
}

// Brute-force log integral of the unnormalized normal-error posterior
//   sigma^{-(n+1)} prod_i phi((y_i - x_i'beta)/sigma)
// over sigma > 0 and beta in R^d, by tensor-product Gauss-Legendre in
// s = log sigma and per-coordinate scaled offsets u = (beta - b0) *
// sqrt(n-1) / sigma. Suited to standardized near-orthogonal designs,
// where +-12 in u covers the coefficient mass at every sigma. The only
// inputs are the design and response; nothing of the closed form enters.
inline double log_posterior_integral_bruteforce(const Eigen::MatrixXd& X,
                                                const Eigen::VectorXd& y,
                                                int u_order = 16,
                                                int u_panels = 4,
                                                int s_panels = 10) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  const Eigen::VectorXd b0 = ols_normal_equations(X, y);
  const Eigen::VectorXd r0 = y - X * b0;
  const double sigma_hat =
      std::sqrt(std::max(r0.squaredNorm() / std::max(n - d, 1), 1e-12));
  const double s_lo = std::log(sigma_hat) - 2.8;
  const double s_hi = std::log(sigma_hat) + 2.8;
  const double u_half = 12.0;
  const double root_nm1 = std::sqrt(static_cast<double>(n - 1));

  // 1-D composite rules
  const GaussLegendre gl(u_order);
  struct Node {
    double x, w;
  };
  auto composite = [&](double a, double b, int panels) {
    std::vector<Node> out;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        out.push_back({mid + 0.5 * h * gl.nodes[i], 0.5 * h * gl.weights[i]});
      }
    }
    return out;
  };
  const std::vector<Node> s_nodes = composite(s_lo, s_hi, s_panels);
  const std::vector<Node> u_nodes = composite(-u_half, u_half, u_panels);

  const double log2pi = std::log(2.0 * std::numbers::pi);
  // reference magnitude at the centre to keep exponents tame
  const double log_g0 = -(n + 1) * std::log(sigma_hat) - 0.5 * n * log2pi -
                        0.5 * r0.squaredNorm() / (sigma_hat * sigma_hat);

  const std::size_t m = u_nodes.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  const double A = r0.squaredNorm();
  double total = 0.0;
  for (;;) {
    // v = X u / sqrt(n-1), then ||r0 - sigma v||^2 = A - 2 sigma B + sigma^2 C
    Eigen::VectorXd u(d);
    double wu = 1.0;
    for (int j = 0; j < d; ++j) {
      u[j] = u_nodes[idx[static_cast<std::size_t>(j)]].x;
      wu *= u_nodes[idx[static_cast<std::size_t>(j)]].w;
    }
    const Eigen::VectorXd v = (X * u) / root_nm1;
    const double B = r0.dot(v);
    const double C = v.squaredNorm();

    for (const Node& sn : s_nodes) {
      const double sigma = std::exp(sn.x);
      const double rss = A - 2.0 * sigma * B + sigma * sigma * C;
      // integrand in (s, u) coordinates:
      //   g * sigma (ds) * (sigma/sqrt(n-1))^d (du)
      const double log_g = -(n + 1) * sn.x - 0.5 * n * log2pi -
                           0.5 * rss / (sigma * sigma) + sn.x +
                           d * (sn.x - std::log(root_nm1));
      total += wu * sn.w * std::exp(log_g - log_g0);
    }

    int j = 0;
    for (; j < d; ++j) {
      if (++idx[static_cast<std::size_t>(j)] < m) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j == d) break;
  }
  return log_g0 + std::log(total);
}

}  // namespace oracles

#endif  // RBPCR_TESTS_ORACLES_HPP
