#ifndef RBPCR_TUNER_HPP
#define RBPCR_TUNER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rbpcr/dataset.hpp"
#include "rbpcr/errors.hpp"
#include "rbpcr/rj.hpp"

namespace rbpcr {

// Integrated autocorrelation time 1 + 2 sum_t rho(t), with the sum
// truncated at the first nonpositive autocorrelation estimate. Requires
// length >= 100 and nonzero variance.
double iat(const std::vector<double>& series);

struct StartScaling {
  double ell = 1.0;
  double acceptance = 0.0;
  int probes = 0;
};

struct TuneOptions {
  int grid_size = 11;       // L
  double grid_ratio = 1.3;  // geometric spacing between adjacent ell
  long iters = 100000;      // T per grid point
  long burn_in = 10000;     // B per grid point
  int max_regrids = 3;
  long probe_iters = 10000;      // for the 0.234 search
  double accept_target = 0.234;  // step-1 target
  double accept_window = 0.05;
  int n_threads = 0;
  double ell_start_override = 0.0;  // > 0 skips the 0.234 search
};

// Finds ell with random-walk acceptance near the target by bisection on
// log ell over a probe run. Throws numerical_error with bracket
// diagnostics when 30 bisection steps are not enough.
StartScaling find_start_scaling(const ModelSpec& model, const Dataset& data,
                                const LptnParams& p, ErrorModel error_model,
                                std::uint64_t seed, double target = 0.234,
                                long probe_iters = 10000);

struct GridPoint {
  double ell = 0.0;
  double summed_iat = 0.0;
  double acceptance = 0.0;
  Eigen::VectorXd m_beta, s_beta;
  double m_sigma = 0.0, s_sigma = 0.0;
};

struct TuningResult {
  double ell_opt = 0.0;
  Eigen::VectorXd m_beta, s_beta;  // averages over the final grid
  double m_sigma = 0.0, s_sigma = 0.0;
  std::vector<GridPoint> grid;     // final grid, ascending ell
  int opt_index = -1;
  int regrids = 0;
  double ell_start = 0.0;
};

// Thrown when the minimal-IAT grid point keeps landing on an endpoint
// after the allowed number of re-grids; carries the last IAT curve.
class tuning_error : public numerical_error {
 public:
  tuning_error(const std::string& msg, std::vector<GridPoint> curve)
      : numerical_error(msg), grid(std::move(curve)) {}
  std::vector<GridPoint> grid;
};

// Trial-run tuning of one model: a geometric grid of proposal scalings
// centred at the 0.234-rate start, one random-walk Metropolis run per
// grid point (initialized from the preliminary fit posterior), minimal
// summed IAT selects ell_opt, endpoints trigger a re-grid. Location and
// scale summaries are averaged over the final grid.
TuningResult tune_model(const ModelSpec& model, const Dataset& data,
                        const LptnParams& p, ErrorModel error_model,
                        std::uint64_t seed, const TuneOptions& opt = {});

// Builds the sampler inputs of the nested space from per-model tuning
// results (aligned with space.models): per-model optimal scalings, shift
// vectors c_k from adjacent mean differences (first entry 0), and
// location-scale LPTN birth proposals from the last-coefficient summaries.
SamplerInputs assemble_inputs(const std::vector<TuningResult>& results,
                              const ModelSpace& space, double vartheta,
                              const LptnParams& p, ErrorModel error_model);

}  // namespace rbpcr

#endif  // RBPCR_TUNER_HPP
