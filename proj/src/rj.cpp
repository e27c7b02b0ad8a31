#include "rbpcr/rj.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rbpcr/errors.hpp"
#include "rbpcr/normal.hpp"
#include "rbpcr/rng.hpp"
#include "rbpcr/tuner.hpp"

namespace rbpcr {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_error_density(double z, const LptnParams& p, ErrorModel model) {
  return model == ErrorModel::lptn ? lptn_logpdf(z, p) : stdnorm::log_pdf(z);
}

double log_birth_proposal(double u, const BirthProposal& q,
                          const LptnParams& p) {
  return lptn_logpdf((u - q.location) / q.scale, p) - std::log(q.scale);
}
}  // namespace

void SamplerInputs::validate(const ModelSpace& space, bool need_init) const {
  const std::size_t k_max = space.models.size();
  if (ell.size() != k_max) {
    throw numerical_error("sampler inputs: need one ell per model");
  }
  for (double l : ell) {
    if (!(l > 0.0)) throw numerical_error("sampler inputs: ell must be > 0");
  }
  // vartheta = 1 degenerates to random-walk Metropolis (no model moves).
  if (!(vartheta > 0.0) || !(vartheta <= 1.0)) {
    throw numerical_error("sampler inputs: vartheta must lie in (0, 1]");
  }
  if (k_max > 1) {
    if (c.size() != k_max || birth.size() != k_max) {
      throw numerical_error(
          "sampler inputs: need shift vector and birth proposal slots for "
          "every model (slot 0 unused)");
    }
    for (std::size_t k = 1; k < k_max; ++k) {
      const int expect = space.models[k - 1].dim() + 1;
      if (c[k].size() != expect) {
        std::ostringstream msg;
        msg << "sampler inputs: c for model " << (k + 1) << " must have "
            << expect << " entries";
        throw numerical_error(msg.str());
      }
      if (c[k][0] != 0.0) {
        throw numerical_error(
            "sampler inputs: first entry of every shift vector must be 0");
      }
      if (!(birth[k].scale > 0.0)) {
        throw numerical_error("sampler inputs: birth proposal scale must be > 0");
      }
    }
  }
  if (need_init) {
    if (init.size() != k_max) {
      throw numerical_error("sampler inputs: need init for every model");
    }
    for (std::size_t k = 0; k < k_max; ++k) {
      const int dk = space.models[k].dim();
      if (init[k].m_beta.size() != dk || init[k].s_beta.size() != dk ||
          !(init[k].s_sigma > 0.0)) {
        throw numerical_error("sampler inputs: malformed init entry");
      }
    }
  }
}

double log_likelihood(const Eigen::MatrixXd& Xk, const Eigen::VectorXd& y,
                      double sigma, const Eigen::VectorXd& beta,
                      const LptnParams& p, ErrorModel model) {
  if (!(sigma > 0.0)) return kNegInf;
  const int n = static_cast<int>(y.size());
  const double inv_sigma = 1.0 / sigma;
  const Eigen::VectorXd r = y - Xk * beta;
  double acc = -n * std::log(sigma);
  if (model == ErrorModel::normal) {
    // log phi(z) summed: constant - 0.5 sum z^2
    acc += n * stdnorm::log_pdf(0.0);
    acc -= 0.5 * r.squaredNorm() * inv_sigma * inv_sigma;
    return acc;
  }
  for (int i = 0; i < n; ++i) {
    acc += lptn_logpdf(r[i] * inv_sigma, p);
  }
  return acc;
}

double log_accept_update(const ParameterState& cur,
                         const Eigen::VectorXd& candidate,
                         const ModelSpace& space, const Dataset& data,
                         const LptnParams& p, ErrorModel model) {
  const ModelSpec& spec = space.models[static_cast<std::size_t>(cur.k - 1)];
  const int dk = spec.dim();
  if (candidate.size() != dk + 1) {
    throw numerical_error("log_accept_update: candidate has wrong length");
  }
  const double w1 = candidate[0];
  if (!(w1 > 0.0)) return kNegInf;
  const Eigen::MatrixXd Xk = design_for(data, spec);
  const double ll_cand =
      log_likelihood(Xk, data.y, w1, candidate.tail(dk), p, model);
  const double ll_cur =
      log_likelihood(Xk, data.y, cur.sigma, cur.beta, p, model);
  // Prior ratio (1/w1)/(1/sigma) rides along with the likelihoods.
  return (ll_cand - std::log(w1)) - (ll_cur - std::log(cur.sigma));
}

double log_accept_birth(const ParameterState& cur, double u_new,
                        const SamplerInputs& inputs, const ModelSpace& space,
                        const Dataset& data,
                        const std::vector<double>* log_priors) {
  const int k = cur.k;
  if (k >= space.k_max()) return kNegInf;
  const std::size_t up = static_cast<std::size_t>(k);  // 0-based slot of k+1
  const Eigen::VectorXd& shift = inputs.c[up];

  const double sigma_new = cur.sigma + shift[0];
  if (!(sigma_new > 0.0)) return kNegInf;
  const int dk = cur.beta.size() > 0 ? static_cast<int>(cur.beta.size())
                                     : space.models[static_cast<std::size_t>(k - 1)].dim();
  Eigen::VectorXd beta_new(dk + 1);
  beta_new.head(dk) = cur.beta + shift.tail(dk);
  beta_new[dk] = u_new;

  const ModelSpec& spec_cur = space.models[static_cast<std::size_t>(k - 1)];
  const ModelSpec& spec_new = space.models[up];
  const double ll_new = log_likelihood(design_for(data, spec_new), data.y,
                                       sigma_new, beta_new, inputs.lptn,
                                       inputs.error_model);
  const double ll_cur = log_likelihood(design_for(data, spec_cur), data.y,
                                       cur.sigma, cur.beta, inputs.lptn,
                                       inputs.error_model);
  const double lp_new = log_priors ? (*log_priors)[up] : 0.0;
  const double lp_cur = log_priors ? (*log_priors)[up - 1] : 0.0;
  return lp_new + ll_new - lp_cur - ll_cur -
         log_birth_proposal(u_new, inputs.birth[up], inputs.lptn);
}

double log_accept_death(const ParameterState& cur,
                        const SamplerInputs& inputs, const ModelSpace& space,
                        const Dataset& data,
                        const std::vector<double>* log_priors) {
  const int k = cur.k;
  if (k <= 1) return kNegInf;
  const std::size_t slot = static_cast<std::size_t>(k - 1);  // c_k, q_k slot
  const Eigen::VectorXd& shift = inputs.c[slot];
  const int dk = static_cast<int>(cur.beta.size());

  const double sigma_new = cur.sigma - shift[0];
  if (!(sigma_new > 0.0)) return kNegInf;
  Eigen::VectorXd beta_new = cur.beta.head(dk - 1) - shift.tail(dk - 1);
  const double removed = cur.beta[dk - 1];

  const ModelSpec& spec_cur = space.models[slot];
  const ModelSpec& spec_new = space.models[slot - 1];
  const double ll_new = log_likelihood(design_for(data, spec_new), data.y,
                                       sigma_new, beta_new, inputs.lptn,
                                       inputs.error_model);
  const double ll_cur = log_likelihood(design_for(data, spec_cur), data.y,
                                       cur.sigma, cur.beta, inputs.lptn,
                                       inputs.error_model);
  const double lp_new = log_priors ? (*log_priors)[slot - 1] : 0.0;
  const double lp_cur = log_priors ? (*log_priors)[slot] : 0.0;
  return lp_new + ll_new - lp_cur - ll_cur +
         log_birth_proposal(removed, inputs.birth[slot], inputs.lptn);
}

ChainTrace run_chain(const ModelSpace& space, const Dataset& data,
                     const SamplerInputs& inputs, long T, long B,
                     std::uint64_t seed,
                     const std::vector<double>* log_priors,
                     const ParameterState* init_state) {
  space.validate(data.d());
  inputs.validate(space, init_state == nullptr);
  if (T <= B || B < 0) throw numerical_error("run_chain: need T > B >= 0");
  if (log_priors && log_priors->size() != space.models.size()) {
    throw numerical_error("run_chain: log_priors size mismatch");
  }

  const int k_max = space.k_max();
  std::vector<Eigen::MatrixXd> designs;
  designs.reserve(static_cast<std::size_t>(k_max));
  int d_max = 0;
  for (const auto& m : space.models) {
    designs.push_back(design_for(data, m));
    d_max = std::max(d_max, m.dim());
  }

  Rng rng(seed);
  ParameterState state;
  if (init_state) {
    state = *init_state;
  } else {
    state.k = std::min(static_cast<int>(rng.uniform() * k_max) + 1, k_max);
    const ModelInit& mi = inputs.init[static_cast<std::size_t>(state.k - 1)];
    state.sigma = rng.truncated_normal_positive(mi.m_sigma, mi.s_sigma);
    const int dk = space.models[static_cast<std::size_t>(state.k - 1)].dim();
    state.beta.resize(dk);
    for (int j = 0; j < dk; ++j) {
      state.beta[j] = rng.normal(mi.m_beta[j], mi.s_beta[j]);
    }
  }
  if (state.k < 1 || state.k > k_max ||
      state.beta.size() !=
          space.models[static_cast<std::size_t>(state.k - 1)].dim()) {
    throw numerical_error("run_chain: invalid initial state");
  }

  ChainTrace trace;
  trace.burn_in = B;
  trace.seed = seed;
  trace.initial = state;
  trace.k.resize(static_cast<std::size_t>(T));
  trace.sigma.resize(T);
  trace.beta.setConstant(T, d_max, std::numeric_limits<double>::quiet_NaN());
  trace.per_model.resize(static_cast<std::size_t>(k_max));

  const double birth_edge = inputs.vartheta + 0.5 * (1.0 - inputs.vartheta);
  double ll_cur = log_likelihood(designs[static_cast<std::size_t>(state.k - 1)],
                                 data.y, state.sigma, state.beta, inputs.lptn,
                                 inputs.error_model);

  for (long m = 0; m < T; ++m) {
    const double u = rng.uniform();
    const std::size_t ks = static_cast<std::size_t>(state.k - 1);
    const int dk = static_cast<int>(state.beta.size());

    if (u <= inputs.vartheta) {
      // (a) parameter update with independent LPTN kernels
      const double ell = inputs.ell[ks];
      const double w1 = state.sigma + ell * lptn_quantile(rng.uniform(), inputs.lptn);
      Eigen::VectorXd wb(dk);
      for (int j = 0; j < dk; ++j) {
        wb[j] = state.beta[j] + ell * lptn_quantile(rng.uniform(), inputs.lptn);
      }
      trace.moves[kUpdate].attempts++;
      trace.per_model[ks][kUpdate].attempts++;
      if (w1 > 0.0) {
        const double ll_cand =
            log_likelihood(designs[ks], data.y, w1, wb, inputs.lptn,
                           inputs.error_model);
        const double log_ratio = (ll_cand - std::log(w1)) -
                                 (ll_cur - std::log(state.sigma));
        if (std::log(rng.uniform()) <= log_ratio) {
          state.sigma = w1;
          state.beta = std::move(wb);
          ll_cur = ll_cand;
          trace.moves[kUpdate].accepts++;
          trace.per_model[ks][kUpdate].accepts++;
        }
      }
    } else if (u <= birth_edge) {
      // (b) birth: switch to model k+1
      trace.moves[kBirth].attempts++;
      trace.per_model[ks][kBirth].attempts++;
      if (state.k < k_max) {
        const std::size_t up = ks + 1;
        const BirthProposal& q = inputs.birth[up];
        const double u_new =
            q.location + q.scale * lptn_quantile(rng.uniform(), inputs.lptn);
        const Eigen::VectorXd& shift = inputs.c[up];
        const double sigma_new = state.sigma + shift[0];
        Eigen::VectorXd beta_new(dk + 1);
        beta_new.head(dk) = state.beta + shift.tail(dk);
        beta_new[dk] = u_new;
        if (sigma_new > 0.0) {
          const double ll_new =
              log_likelihood(designs[up], data.y, sigma_new, beta_new,
                             inputs.lptn, inputs.error_model);
          const double lp_new = log_priors ? (*log_priors)[up] : 0.0;
          const double lp_cur = log_priors ? (*log_priors)[ks] : 0.0;
          const double log_ratio =
              lp_new + ll_new - lp_cur - ll_cur -
              log_birth_proposal(u_new, q, inputs.lptn);
          if (std::log(rng.uniform()) <= log_ratio) {
            state.k += 1;
            state.sigma = sigma_new;
            state.beta = std::move(beta_new);
            ll_cur = ll_new;
            trace.moves[kBirth].accepts++;
            trace.per_model[ks][kBirth].accepts++;
          }
        }
      }
    } else {
      // (c) death: withdraw the last coefficient
      trace.moves[kDeath].attempts++;
      trace.per_model[ks][kDeath].attempts++;
      if (state.k > 1) {
        const Eigen::VectorXd& shift = inputs.c[ks];
        const double sigma_new = state.sigma - shift[0];
        Eigen::VectorXd beta_new = state.beta.head(dk - 1) - shift.tail(dk - 1);
        const double removed = state.beta[dk - 1];
        if (sigma_new > 0.0) {
          const double ll_new =
              log_likelihood(designs[ks - 1], data.y, sigma_new, beta_new,
                             inputs.lptn, inputs.error_model);
          const double lp_new = log_priors ? (*log_priors)[ks - 1] : 0.0;
          const double lp_cur = log_priors ? (*log_priors)[ks] : 0.0;
          const double log_ratio =
              lp_new + ll_new - lp_cur - ll_cur +
              log_birth_proposal(removed, inputs.birth[ks], inputs.lptn);
          if (std::log(rng.uniform()) <= log_ratio) {
            state.k -= 1;
            state.sigma = sigma_new;
            state.beta = std::move(beta_new);
            ll_cur = ll_new;
            trace.moves[kDeath].accepts++;
            trace.per_model[ks][kDeath].accepts++;
          }
        }
      }
    }

    trace.k[static_cast<std::size_t>(m)] = state.k;
    trace.sigma[m] = state.sigma;
    trace.beta.row(m).head(state.beta.size()) = state.beta;
  }
  return trace;
}

McmcSummary estimate(const ChainTrace& trace, const ModelSpace& space) {
  const long T = trace.iterations();
  const long B = trace.burn_in;
  if (T <= B) throw numerical_error("estimate: trace shorter than burn-in");
  const int k_max = space.k_max();
  const long n_post = T - B;

  McmcSummary out;
  out.samples = n_post;
  out.occupancy.assign(static_cast<std::size_t>(k_max), 0.0);
  out.per_model.resize(static_cast<std::size_t>(k_max));

  std::vector<std::vector<long>> hits(static_cast<std::size_t>(k_max));
  for (long m = B; m < T; ++m) {
    hits[static_cast<std::size_t>(trace.k[static_cast<std::size_t>(m)] - 1)]
        .push_back(m);
  }

  auto series_stats = [](const std::vector<double>& s, double& mean,
                         double& mcse) {
    const std::size_t len = s.size();
    mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(len);
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    var /= std::max<std::size_t>(len - 1, 1);
    double tau = 1.0;
    if (len >= 100 && var > 0.0) tau = iat(s);
    mcse = std::sqrt(var * tau / static_cast<double>(len));
  };

  for (int k = 0; k < k_max; ++k) {
    const auto& idx = hits[static_cast<std::size_t>(k)];
    ModelEstimate& est = out.per_model[static_cast<std::size_t>(k)];
    est.visits = static_cast<long>(idx.size());
    est.occupancy = static_cast<double>(idx.size()) / n_post;
    out.occupancy[static_cast<std::size_t>(k)] = est.occupancy;
    if (idx.empty()) continue;
    est.available = true;

    const int dk = space.models[static_cast<std::size_t>(k)].dim();
    est.beta_mean.resize(dk);
    est.beta_mcse.resize(dk);
    std::vector<double> s(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) s[i] = trace.sigma[idx[i]];
    series_stats(s, est.sigma_mean, est.sigma_mcse);
    for (int j = 0; j < dk; ++j) {
      for (std::size_t i = 0; i < idx.size(); ++i) {
        s[i] = trace.beta(idx[i], j);
      }
      double mean, mcse;
      series_stats(s, mean, mcse);
      est.beta_mean[j] = mean;
      est.beta_mcse[j] = mcse;
    }
  }
  return out;
}

}  // namespace rbpcr
