#ifndef RBPCR_RJ_HPP
#define RBPCR_RJ_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "rbpcr/dataset.hpp"
#include "rbpcr/lptn.hpp"

namespace rbpcr {

// Error distribution of the regression model. The normal variant exists
// so chains can be validated against the closed-form posterior.
enum class ErrorModel { lptn, normal };

// Chain state (K, sigma_K, beta_K).
struct ParameterState {
  int k = 1;  // 1-based model index into the space
  double sigma = 1.0;
  Eigen::VectorXd beta;
};

// Location-scale LPTN proposal for the coefficient added by a birth move.
struct BirthProposal {
  double location = 0.0;
  double scale = 1.0;
};

// Per-model starting distribution for chains (from trial runs).
struct ModelInit {
  double m_sigma = 1.0;
  double s_sigma = 0.5;
  Eigen::VectorXd m_beta;
  Eigen::VectorXd s_beta;
};

enum MoveType { kUpdate = 0, kBirth = 1, kDeath = 2 };

// Everything the sampler needs besides data and the model space. For a
// space of K_max models: ell has K_max entries; c[k-1] and birth[k-1]
// are used for moves into model k (k >= 2, slot 0 unused); the first
// entry of every shift vector c must be 0 so the scale component is
// never moved below zero.
struct SamplerInputs {
  double vartheta = 0.6;
  std::vector<double> ell;
  std::vector<Eigen::VectorXd> c;
  std::vector<BirthProposal> birth;
  std::vector<ModelInit> init;
  LptnParams lptn;
  ErrorModel error_model = ErrorModel::lptn;

  void validate(const ModelSpace& space, bool need_init) const;
};

struct MoveStats {
  long attempts = 0;
  long accepts = 0;
  double rate() const {
    return attempts > 0 ? static_cast<double>(accepts) / attempts : 0.0;
  }
};

struct ChainTrace {
  std::vector<int> k;     // length T, state after each iteration
  Eigen::VectorXd sigma;  // length T
  Eigen::MatrixXd beta;   // T x d_max, NaN where the model lacks the column
  long burn_in = 0;
  std::uint64_t seed = 0;
  std::array<MoveStats, 3> moves;                   // by move type
  std::vector<std::array<MoveStats, 3>> per_model;  // by current model
  ParameterState initial;

  long iterations() const { return static_cast<long>(k.size()); }
};

// Log-likelihood including the 1/sigma^n factor:
// sum_i log f((y_i - x_i' beta)/sigma) - n log sigma.
double log_likelihood(const Eigen::MatrixXd& Xk, const Eigen::VectorXd& y,
                      double sigma, const Eigen::VectorXd& beta,
                      const LptnParams& p, ErrorModel model);

// Log acceptance ratios of the three moves, before the min(1, .) cap.
// -inf encodes candidates outside the support. `candidate` for the
// update move is (w_1, ..., w_{d_k+1}) = (sigma, beta) proposal.
double log_accept_update(const ParameterState& cur,
                         const Eigen::VectorXd& candidate,
                         const ModelSpace& space, const Dataset& data,
                         const LptnParams& p, ErrorModel model);

double log_accept_birth(const ParameterState& cur, double u_new,
                        const SamplerInputs& inputs, const ModelSpace& space,
                        const Dataset& data,
                        const std::vector<double>* log_priors = nullptr);

double log_accept_death(const ParameterState& cur,
                        const SamplerInputs& inputs, const ModelSpace& space,
                        const Dataset& data,
                        const std::vector<double>* log_priors = nullptr);

// Runs the reversible-jump chain for T iterations. Moves are selected
// with mass (vartheta, (1-vartheta)/2, (1-vartheta)/2); births at the
// top model and deaths at the bottom are counted as attempted and
// rejected. When init_state is null the start is drawn from inputs.init.
ChainTrace run_chain(const ModelSpace& space, const Dataset& data,
                     const SamplerInputs& inputs, long T, long B,
                     std::uint64_t seed,
                     const std::vector<double>* log_priors = nullptr,
                     const ParameterState* init_state = nullptr);

struct ModelEstimate {
  bool available = false;  // model visited after burn-in
  long visits = 0;
  double occupancy = 0.0;
  double sigma_mean = 0.0;
  double sigma_mcse = 0.0;
  Eigen::VectorXd beta_mean;
  Eigen::VectorXd beta_mcse;
};

struct McmcSummary {
  std::vector<ModelEstimate> per_model;
  std::vector<double> occupancy;
  long samples = 0;  // post burn-in count
};

// Occupancy probabilities and per-model posterior means with Monte Carlo
// standard errors from integrated autocorrelation times.
McmcSummary estimate(const ChainTrace& trace, const ModelSpace& space);

}  // namespace rbpcr

#endif  // RBPCR_RJ_HPP
