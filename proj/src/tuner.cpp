#include "rbpcr/tuner.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "rbpcr/errors.hpp"
#include "rbpcr/normal_posterior.hpp"
#include "rbpcr/parallel.hpp"
#include "rbpcr/rng.hpp"
#include "rbpcr/robust.hpp"

namespace rbpcr {

namespace {

// Full autocovariance via FFT; direct summation is quadratic in the
// truncation lag and too slow for badly mixing grid points.
std::vector<double> autocovariance(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);
  for (auto& s : spec) s = std::norm(s);
  std::vector<std::complex<double>> acf;
  fft.inv(acf, spec);

  std::vector<double> gamma(n);
  for (std::size_t t = 0; t < n; ++t) {
    gamma[t] = acf[t].real() / static_cast<double>(n);
  }
  return gamma;
}

struct PreliminaryFit {
  Eigen::VectorXd beta;
  double rss = 0.0;
};

PreliminaryFit preliminary_fit(const ModelSpec& model, const Dataset& data,
                               const LptnParams& p, ErrorModel error_model) {
  const Eigen::MatrixXd Xk = design_for(data, model);
  PreliminaryFit fit;
  if (error_model == ErrorModel::lptn) {
    const RobustFit rf = map_regression(Xk, data.y, p);
    fit.beta = rf.beta;
  } else {
    fit.beta = ols_solve(Xk, data.y);
  }
  fit.rss = (data.y - Xk * fit.beta).squaredNorm();
  return fit;
}

// Step-3 start: sigma^2 from the inverse-gamma conditional, coefficients
// from normals centred at the preliminary estimate.
ParameterState draw_init(const ModelSpec& model, const Dataset& data,
                         const PreliminaryFit& fit, Rng& rng) {
  const int n = data.n();
  const int dk = model.dim();
  ParameterState s;
  s.k = 1;
  const double sigma2 = rng.inverse_gamma(0.5 * (n - dk), 0.5 * fit.rss);
  s.sigma = std::sqrt(sigma2);
  s.beta.resize(dk);
  s.beta[0] = rng.normal(fit.beta[0], std::sqrt(sigma2 / n));
  for (int j = 1; j < dk; ++j) {
    s.beta[j] = rng.normal(fit.beta[j], std::sqrt(sigma2 / (n - 1)));
  }
  return s;
}

struct RwmRun {
  double acceptance = 0.0;
  double summed_iat = 0.0;
  Eigen::VectorXd m_beta, s_beta;
  double m_sigma = 0.0, s_sigma = 0.0;
};

RwmRun run_rwm(const ModelSpec& model, const Dataset& data,
               const LptnParams& p, ErrorModel error_model,
               const PreliminaryFit& fit, double ell, long T, long B,
               std::uint64_t seed, bool want_stats) {
  ModelSpace single;
  single.models.push_back(model);
  SamplerInputs inputs;
  inputs.vartheta = 1.0;  // updates only
  inputs.ell = {ell};
  inputs.lptn = p;
  inputs.error_model = error_model;

  Rng init_rng(derive_seed(seed, {0xA111D}));
  const ParameterState start = draw_init(model, data, fit, init_rng);
  const ChainTrace trace = run_chain(single, data, inputs, T, B,
                                     derive_seed(seed, {0xC4A11}), nullptr,
                                     &start);

  RwmRun out;
  out.acceptance = trace.moves[kUpdate].rate();
  if (!want_stats) return out;

  const int dk = model.dim();
  const long n_post = T - B;
  std::vector<double> series(static_cast<std::size_t>(n_post));
  out.m_beta.resize(dk);
  out.s_beta.resize(dk);

  auto stats = [&](auto getter, double& mean, double& sd) {
    for (long i = 0; i < n_post; ++i) {
      series[static_cast<std::size_t>(i)] = getter(B + i);
    }
    mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n_post);
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n_post - 1);
    sd = std::sqrt(var);
    // a chain that never moved is the worst possible grid point
    const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
    out.summed_iat +=
        *mn == *mx ? std::numeric_limits<double>::infinity() : iat(series);
  };

  stats([&](long m) { return trace.sigma[m]; }, out.m_sigma, out.s_sigma);
  for (int j = 0; j < dk; ++j) {
    stats([&](long m) { return trace.beta(m, j); }, out.m_beta[j],
          out.s_beta[j]);
  }
  return out;
}

}  // namespace

double iat(const std::vector<double>& series) {
  if (series.size() < 100) {
    throw numerical_error("iat: need at least 100 samples");
  }
  const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
  if (*mn == *mx) {
    throw numerical_error("iat: series is constant");
  }
  const std::vector<double> gamma = autocovariance(series);
  if (!(gamma[0] > 0.0)) {
    throw numerical_error("iat: series has zero variance");
  }
  double tau = 1.0;
  for (std::size_t t = 1; t < gamma.size(); ++t) {
    const double rho = gamma[t] / gamma[0];
    if (rho <= 0.0) break;
    tau += 2.0 * rho;
  }
  return tau;
}

StartScaling find_start_scaling(const ModelSpec& model, const Dataset& data,
                                const LptnParams& p, ErrorModel error_model,
                                std::uint64_t seed, double target,
                                long probe_iters) {
  model.validate(data.d());
  if (data.n() <= model.dim()) {
    throw numerical_error("find_start_scaling: model not estimable (n <= d_k)");
  }
  const PreliminaryFit fit = preliminary_fit(model, data, p, error_model);
  const long burn = probe_iters / 10;
  const std::uint64_t probe_seed = derive_seed(seed, {0x5CA1E});

  // Common probe seed across ell values keeps the acceptance curve
  // effectively monotone for the bisection.
  auto acceptance_at = [&](double ell) {
    return run_rwm(model, data, p, error_model, fit, ell, probe_iters, burn,
                   probe_seed, false)
        .acceptance;
  };

  const double window = 0.05;
  double ell = 2.38 / std::sqrt(model.dim() + 1.0);
  double acc = acceptance_at(ell);
  int probes = 1;
  if (std::fabs(acc - target) <= window) return {ell, acc, probes};

  // Bracket: acceptance decreases in ell.
  double lo = ell, hi = ell;
  double acc_lo = acc, acc_hi = acc;
  while (acc_lo < target && probes < 30) {
    lo /= 4.0;
    acc_lo = acceptance_at(lo);
    ++probes;
  }
  while (acc_hi > target && probes < 30) {
    hi *= 4.0;
    acc_hi = acceptance_at(hi);
    ++probes;
  }

  for (; probes < 30; ++probes) {
    ell = std::sqrt(lo * hi);
    acc = acceptance_at(ell);
    if (std::fabs(acc - target) <= window) return {ell, acc, probes + 1};
    if (acc > target) {
      lo = ell;
      acc_lo = acc;
    } else {
      hi = ell;
      acc_hi = acc;
    }
  }
  std::ostringstream msg;
  msg << "find_start_scaling: bisection failed after 30 probes; bracket ["
      << lo << ", " << hi << "] with acceptances [" << acc_lo << ", "
      << acc_hi << "], target " << target;
  throw numerical_error(msg.str());
}

TuningResult tune_model(const ModelSpec& model, const Dataset& data,
                        const LptnParams& p, ErrorModel error_model,
                        std::uint64_t seed, const TuneOptions& opt) {
  model.validate(data.d());
  if (data.n() <= model.dim()) {
    throw numerical_error("tune_model: model not estimable (n <= d_k)");
  }
  if (opt.grid_size < 3 || opt.grid_size % 2 == 0) {
    throw numerical_error("tune_model: grid_size must be odd and >= 3");
  }
  const PreliminaryFit fit = preliminary_fit(model, data, p, error_model);

  double ell_start = opt.ell_start_override;
  if (!(ell_start > 0.0)) {
    ell_start = find_start_scaling(model, data, p, error_model,
                                   derive_seed(seed, {0x57A27}),
                                   opt.accept_target, opt.probe_iters)
                    .ell;
  }

  const int L = opt.grid_size;
  const int half = (L - 1) / 2;
  double centre = ell_start;

  TuningResult result;
  result.ell_start = ell_start;
  for (int round = 0;; ++round) {
    std::vector<GridPoint> grid(static_cast<std::size_t>(L));
    parallel_for(L, opt.n_threads, [&](int j) {
      GridPoint& gp = grid[static_cast<std::size_t>(j)];
      gp.ell = centre * std::pow(opt.grid_ratio, j - half);
      const RwmRun run =
          run_rwm(model, data, p, error_model, fit, gp.ell, opt.iters,
                  opt.burn_in, derive_seed(seed, {static_cast<std::uint64_t>(round),
                                                  static_cast<std::uint64_t>(j)}),
                  true);
      gp.summed_iat = run.summed_iat;
      gp.acceptance = run.acceptance;
      gp.m_beta = run.m_beta;
      gp.s_beta = run.s_beta;
      gp.m_sigma = run.m_sigma;
      gp.s_sigma = run.s_sigma;
    });

    int best = 0;
    for (int j = 1; j < L; ++j) {
      if (grid[static_cast<std::size_t>(j)].summed_iat <
          grid[static_cast<std::size_t>(best)].summed_iat) {
        best = j;
      }
    }

    if (best == 0 || best == L - 1) {
      if (round >= opt.max_regrids) {
        std::ostringstream msg;
        msg << "tune_model: minimal IAT stayed on a grid endpoint after "
            << opt.max_regrids << " re-grids (last centre " << centre << ")";
        throw tuning_error(msg.str(), std::move(grid));
      }
      centre = grid[static_cast<std::size_t>(best)].ell;
      result.regrids = round + 1;
      continue;
    }

    result.grid = std::move(grid);
    result.opt_index = best;
    result.ell_opt = result.grid[static_cast<std::size_t>(best)].ell;
    break;
  }

  // Step-6 averages over the final grid.
  const int dk = model.dim();
  result.m_beta = Eigen::VectorXd::Zero(dk);
  result.s_beta = Eigen::VectorXd::Zero(dk);
  for (const auto& gp : result.grid) {
    result.m_beta += gp.m_beta;
    result.s_beta += gp.s_beta;
    result.m_sigma += gp.m_sigma;
    result.s_sigma += gp.s_sigma;
  }
  const double inv_l = 1.0 / static_cast<double>(L);
  result.m_beta *= inv_l;
  result.s_beta *= inv_l;
  result.m_sigma *= inv_l;
  result.s_sigma *= inv_l;
  return result;
}

SamplerInputs assemble_inputs(const std::vector<TuningResult>& results,
                              const ModelSpace& space, double vartheta,
                              const LptnParams& p, ErrorModel error_model) {
  const std::size_t k_max = space.models.size();
  if (results.size() != k_max) {
    throw numerical_error("assemble_inputs: need one tuning result per model");
  }
  SamplerInputs inputs;
  inputs.vartheta = vartheta;
  inputs.lptn = p;
  inputs.error_model = error_model;
  inputs.ell.resize(k_max);
  inputs.c.resize(k_max);
  inputs.birth.resize(k_max);
  inputs.init.resize(k_max);

  for (std::size_t k = 0; k < k_max; ++k) {
    const TuningResult& r = results[k];
    const int dk = space.models[k].dim();
    if (r.m_beta.size() != dk) {
      throw numerical_error("assemble_inputs: tuning result dimension mismatch");
    }
    inputs.ell[k] = r.ell_opt;
    inputs.init[k] = ModelInit{r.m_sigma, r.s_sigma, r.m_beta, r.s_beta};
    if (k == 0) continue;

    const TuningResult& prev = results[k - 1];
    const int d_prev = space.models[k - 1].dim();
    Eigen::VectorXd c(d_prev + 1);
    c[0] = 0.0;
    for (int i = 0; i < d_prev; ++i) {
      c[i + 1] = r.m_beta[i] - prev.m_beta[i];
    }
    inputs.c[k] = std::move(c);
    const double s_last = r.s_beta[dk - 1];
    if (!(s_last > 0.0)) {
      throw numerical_error("assemble_inputs: nonpositive birth proposal scale");
    }
    inputs.birth[k] = BirthProposal{r.m_beta[dk - 1], s_last};
  }
  return inputs;
}

}  // namespace rbpcr
