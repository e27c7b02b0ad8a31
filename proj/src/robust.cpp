#include "rbpcr/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rbpcr/errors.hpp"

namespace rbpcr {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kGradTol = 1e-8;

struct Objective {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& y;
  const LptnParams& p;

  double value(const Eigen::VectorXd& theta) const {
    const int d = static_cast<int>(X.cols());
    return robust_neg_log_posterior(X, y, theta.head(d), theta[d], p);
  }
  Eigen::VectorXd grad(const Eigen::VectorXd& theta) const {
    const int d = static_cast<int>(X.cols());
    return robust_neg_log_posterior_grad(X, y, theta.head(d), theta[d], p);
  }
};

struct SolveResult {
  Eigen::VectorXd theta;
  double value;
  double grad_norm;
  int iterations;
  bool converged;
};

// BFGS with backtracking Armijo line search on (beta, log sigma).
SolveResult bfgs(const Objective& obj, Eigen::VectorXd theta) {
  const int m = static_cast<int>(theta.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m);
  double f = obj.value(theta);
  Eigen::VectorXd g = obj.grad(theta);
  bool scaled = false;

  int it = 0;
  for (; it < kMaxIterations; ++it) {
    const double gnorm = g.norm();
    if (gnorm < kGradTol) {
      return {theta, f, gnorm, it, true};
    }
    Eigen::VectorXd dir = -(H * g);
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {  // H lost positive definiteness; restart
      H.setIdentity();
      scaled = false;
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    double f_new = f;
    Eigen::VectorXd theta_new = theta;
    bool moved = false;
    while (step > 1e-18) {
      theta_new = theta + step * dir;
      f_new = obj.value(theta_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // Stalled: either converged in a flat basin or pinned on a kink of
      // the piecewise density. The caller decides with a polish pass.
      return {theta, f, gnorm, it, false};
    }

    Eigen::VectorXd g_new = obj.grad(theta_new);
    const Eigen::VectorXd s = theta_new - theta;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (!scaled) {
        H *= sy / yv.squaredNorm();  // standard initial-scale heuristic
        scaled = true;
      }
      const Eigen::VectorXd Hy = H * yv;
      const double yHy = yv.dot(Hy);
      // BFGS inverse-Hessian update
      H += ((sy + yHy) / (sy * sy)) * (s * s.transpose());
      H -= (Hy * s.transpose() + s * Hy.transpose()) / sy;
    }
    theta = std::move(theta_new);
    f = f_new;
    g = std::move(g_new);
  }
  return {theta, f, g.norm(), it, false};
}

// Compass-search polish. The density's kinks at |z| = tau put V-shaped
// creases into the objective, and minima can sit exactly on them, where
// no gradient vanishes; a direct search still converges there. Treated
// as converged when the step collapses below the resolution floor.
SolveResult compass_polish(const Objective& obj, SolveResult start) {
  const int m = static_cast<int>(start.theta.size());
  Eigen::VectorXd theta = start.theta;
  double f = start.value;
  Eigen::VectorXd h(m);
  for (int j = 0; j < m; ++j) h[j] = 1e-4 * (1.0 + std::fabs(theta[j]));

  int evals = 0;
  const int max_evals = 60000;
  double resolution = 0.0;
  while (evals < max_evals) {
    bool improved = false;
    for (int j = 0; j < m; ++j) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd cand = theta;
        cand[j] += sign * h[j];
        const double fc = obj.value(cand);
        ++evals;
        if (fc < f) {
          theta = std::move(cand);
          f = fc;
          improved = true;
        }
      }
    }
    if (!improved) {
      h *= 0.4;
      resolution = 0.0;
      for (int j = 0; j < m; ++j) {
        resolution = std::max(resolution,
                              h[j] / (1.0 + std::fabs(theta[j])));
      }
      if (resolution < 1e-12) break;
    }
  }
  const double gnorm = obj.grad(theta).norm();
  const bool converged = resolution < 1e-12 || gnorm < kGradTol;
  return {theta, f, gnorm, start.iterations, converged};
}

SolveResult minimize(const Objective& obj, const Eigen::VectorXd& start) {
  SolveResult r = bfgs(obj, start);
  if (!r.converged) {
    r = compass_polish(obj, std::move(r));
  }
  return r;
}

// Approximate least-absolute-deviations coefficients via iteratively
// reweighted least squares; high-breakdown warm start for the MAP search.
Eigen::VectorXd lad_coefficients(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y) {
  Eigen::VectorXd b = ols_solve(X, y);
  const int n = static_cast<int>(X.rows());
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd r = y - X * b;
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = 1.0 / std::max(std::fabs(r[i]), 1e-8);
    const Eigen::MatrixXd Xw = w.asDiagonal() * X;
    Eigen::VectorXd b_new =
        (X.transpose() * Xw).ldlt().solve(Xw.transpose() * y);
    if ((b_new - b).norm() < 1e-10) {
      b = b_new;
      break;
    }
    b = b_new;
  }
  return b;
}

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

double mad_scale(const Eigen::VectorXd& r) {
  std::vector<double> v(r.data(), r.data() + r.size());
  const double med = median_of(v);
  for (double& x : v) x = std::fabs(x - med);
  return 1.4826 * median_of(std::move(v));
}

RobustFit run_map(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const LptnParams& p) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  const Objective obj{X, y, p};

  const Eigen::VectorXd b_ols = ols_solve(X, y);
  const Eigen::VectorXd r_ols = y - X * b_ols;
  double s_ols = std::sqrt(r_ols.squaredNorm() / std::max(n - d, 1));
  const Eigen::VectorXd b_lad = lad_coefficients(X, y);
  double s_lad = mad_scale(y - X * b_lad);
  if (!(s_ols > 0.0)) s_ols = 1e-8;
  if (!(s_lad > 0.0)) s_lad = s_ols;

  std::vector<Eigen::VectorXd> starts;
  Eigen::VectorXd t0(d + 1), t1(d + 1);
  t0 << b_ols, std::log(s_ols);
  t1 << b_lad, std::log(s_lad);
  starts.push_back(t0);
  starts.push_back(t1);

  SolveResult best;
  best.value = std::numeric_limits<double>::infinity();
  bool have = false;
  for (const auto& t : starts) {
    SolveResult r = minimize(obj, t);
    const bool better =
        !have || r.value < best.value ||
        (r.value == best.value &&
         r.theta.head(d).norm() < best.theta.head(d).norm());
    if (better) {
      best = std::move(r);
      have = true;
    }
  }

  RobustFit fit;
  fit.beta = best.theta.head(d);
  fit.sigma = std::exp(best.theta[d]);
  fit.converged = best.converged;
  fit.objective = best.value;
  fit.iterations = best.iterations;
  if (!fit.converged) {
    std::ostringstream msg;
    msg << "robust MAP did not converge in " << kMaxIterations
        << " iterations (gradient norm " << best.grad_norm << ")";
    throw robust_fit_error(msg.str(), fit);
  }
  return fit;
}

}  // namespace

double robust_neg_log_posterior(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y,
                                const Eigen::VectorXd& beta, double log_sigma,
                                const LptnParams& p) {
  const int n = static_cast<int>(X.rows());
  const double inv_sigma = std::exp(-log_sigma);
  double acc = (n + 1) * log_sigma;
  const Eigen::VectorXd r = y - X * beta;
  for (int i = 0; i < n; ++i) {
    acc -= lptn_logpdf(r[i] * inv_sigma, p);
  }
  return acc;
}

Eigen::VectorXd robust_neg_log_posterior_grad(const Eigen::MatrixXd& X,
                                              const Eigen::VectorXd& y,
                                              const Eigen::VectorXd& beta,
                                              double log_sigma,
                                              const LptnParams& p) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  const double inv_sigma = std::exp(-log_sigma);
  const Eigen::VectorXd r = y - X * beta;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d + 1);
  g[d] = n + 1;
  for (int i = 0; i < n; ++i) {
    const double z = r[i] * inv_sigma;
    const double score = lptn_dlogpdf(z, p);
    g.head(d) += score * inv_sigma * X.row(i).transpose();
    g[d] += score * z;
  }
  return g;
}

RobustFit map_location_scale(const Eigen::VectorXd& x, const LptnParams& p) {
  const int n = static_cast<int>(x.size());
  if (n < 3) throw numerical_error("map_location_scale: need n >= 3");
  if ((x.array() - x[0]).abs().maxCoeff() == 0.0) {
    throw numerical_error(
        "map_location_scale: constant input, scale is degenerate");
  }
  const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, 1);
  return run_map(X, x, p);
}

RobustFit map_regression(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const LptnParams& p) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  if (n <= d) throw numerical_error("map_regression: need n > d");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < d) {
    throw numerical_error("map_regression: design is rank deficient");
  }
  return run_map(X, y, p);
}

ResidualReport standardized_residuals(const RobustFit& fit,
                                      const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& y,
                                      double threshold) {
  if (X.cols() != fit.beta.size() || X.rows() != y.size()) {
    throw numerical_error("standardized_residuals: dimension mismatch");
  }
  ResidualReport rep;
  rep.threshold = threshold;
  rep.z = (y - X * fit.beta) / fit.sigma;
  rep.flags.resize(static_cast<std::size_t>(y.size()));
  for (int i = 0; i < y.size(); ++i) {
    rep.flags[static_cast<std::size_t>(i)] = std::fabs(rep.z[i]) > threshold;
  }
  return rep;
}

Eigen::VectorXd ols_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  return X.colPivHouseholderQr().solve(y);
}

}  // namespace rbpcr
