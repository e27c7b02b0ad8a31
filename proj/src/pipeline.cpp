#include "rbpcr/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "rbpcr/errors.hpp"
#include "rbpcr/parallel.hpp"
#include "rbpcr/rng.hpp"

namespace rbpcr {

std::vector<int> ScreeningReport::retained_columns() const {
  std::vector<int> cols;
  for (const auto& e : entries) {
    if (e.retained) cols.push_back(e.column);
  }
  return cols;
}

ScreeningReport screen_components(const Dataset& data, const LptnParams& p,
                                  ErrorModel error_model,
                                  const PipelineOptions& opt,
                                  std::uint64_t seed, double threshold) {
  const int d = data.d();
  if (d < 2) throw numerical_error("screen_components: need at least one PC");

  ScreeningReport report;
  report.threshold = threshold;
  report.entries.resize(static_cast<std::size_t>(d - 1));

  // The intercept model is common to every pair; tune it once.
  const ModelSpec intercept{{1}};
  const TuningResult tuned_intercept =
      tune_model(intercept, data, p, error_model,
                 derive_seed(seed, {0x1C, 1}), opt.tune_options());

  parallel_for(d - 1, opt.n_threads, [&](int idx) {
    const int j = idx + 2;
    ModelSpace pair;
    pair.models.push_back(intercept);
    pair.models.push_back(ModelSpec{{1, j}});

    const TuningResult tuned_j =
        tune_model(pair.models[1], data, p, error_model,
                   derive_seed(seed, {0x1C, static_cast<std::uint64_t>(j)}),
                   opt.tune_options());
    const SamplerInputs inputs = assemble_inputs(
        {tuned_intercept, tuned_j}, pair, opt.vartheta, p, error_model);

    const ChainTrace trace = run_chain(
        pair, data, inputs, opt.screen_iters, opt.screen_burnin,
        derive_seed(seed, {0x5C, static_cast<std::uint64_t>(j)}));
    const McmcSummary summary = estimate(trace, pair);

    ScreeningEntry& entry = report.entries[static_cast<std::size_t>(idx)];
    entry.column = j;
    entry.occupancy_with = summary.occupancy[1];
    entry.update_acceptance = trace.moves[kUpdate].rate();
    const double n_post = static_cast<double>(summary.samples);
    if (summary.per_model[1].visits == 0) {
      entry.bf = 1.0 / n_post;
      entry.never_visited = true;
    } else if (summary.per_model[0].visits == 0) {
      entry.bf = n_post;
      entry.never_visited = true;
    } else {
      // Posterior odds; the uniform model prior makes the prior-odds
      // correction 1.
      entry.bf = summary.occupancy[1] / summary.occupancy[0];
    }
    entry.retained = entry.bf > threshold;
  });
  return report;
}

ModelSpace build_nested_space(const ScreeningReport& report) {
  return ModelSpace::nested(report.retained_columns());
}

PredictionReport fit_predict(const ModelSpace& space, const Dataset& data,
                             const Eigen::MatrixXd& X_new,
                             const std::optional<Eigen::VectorXd>& y_true,
                             const ColumnStats& y_stats, const LptnParams& p,
                             ErrorModel error_model,
                             const PipelineOptions& opt, std::uint64_t seed) {
  space.validate_nested(data.d());
  if (X_new.cols() != data.d()) {
    throw numerical_error("fit_predict: X_new must have d design columns");
  }
  if (y_true && y_true->size() != X_new.rows()) {
    throw numerical_error("fit_predict: y_true length mismatch");
  }

  const int k_max = space.k_max();
  PredictionReport report;
  report.tuning.resize(static_cast<std::size_t>(k_max));
  parallel_for(k_max, opt.n_threads, [&](int k) {
    report.tuning[static_cast<std::size_t>(k)] =
        tune_model(space.models[static_cast<std::size_t>(k)], data, p,
                   error_model,
                   derive_seed(seed, {0x70, static_cast<std::uint64_t>(k)}),
                   opt.tune_options());
  });
  report.inputs = assemble_inputs(report.tuning, space, opt.vartheta, p,
                                  error_model);

  report.trace = run_chain(space, data, report.inputs, opt.main_iters,
                           opt.main_burnin, derive_seed(seed, {0x3A14}));
  const McmcSummary summary = estimate(report.trace, space);
  report.model_probs = summary.occupancy;
  report.model_estimates = summary.per_model;

  const int n_new = static_cast<int>(X_new.rows());
  report.predictions.resize(static_cast<std::size_t>(n_new));
  for (int i = 0; i < n_new; ++i) {
    PredictionRow& row = report.predictions[static_cast<std::size_t>(i)];
    row.per_model.assign(static_cast<std::size_t>(k_max), 0.0);
    double acc = 0.0;
    for (int k = 0; k < k_max; ++k) {
      const ModelEstimate& est = summary.per_model[static_cast<std::size_t>(k)];
      if (!est.available) continue;
      const Eigen::VectorXd xk = restrict_row(
          X_new.row(i).transpose(), space.models[static_cast<std::size_t>(k)]);
      const double pred = xk.dot(est.beta_mean);
      row.per_model[static_cast<std::size_t>(k)] = pred;
      acc += est.occupancy * pred;
    }
    row.y_std = acc;
    row.y_raw = y_stats.mu + y_stats.sigma * acc;
  }

  if (y_true) {
    Metrics m;
    m.n = n_new;
    int sign_hits = 0;
    double abs_sum = 0.0;
    for (int i = 0; i < n_new; ++i) {
      const double pred = report.predictions[static_cast<std::size_t>(i)].y_raw;
      const double truth = (*y_true)[i];
      abs_sum += std::fabs(pred - truth);
      if (pred * truth > 0.0 || (pred == 0.0 && truth == 0.0)) ++sign_hits;
    }
    m.aad = abs_sum / n_new;
    m.sign_rate = static_cast<double>(sign_hits) / n_new;
    report.metrics = m;
  }
  return report;
}

std::vector<RobustFit> fit_models_map(const ModelSpace& space,
                                      const Dataset& data, const LptnParams& p,
                                      int n_threads) {
  std::vector<RobustFit> fits(space.models.size());
  parallel_for(space.k_max(), n_threads, [&](int k) {
    const Eigen::MatrixXd Xk =
        design_for(data, space.models[static_cast<std::size_t>(k)]);
    fits[static_cast<std::size_t>(k)] = map_regression(Xk, data.y, p);
  });
  return fits;
}

std::vector<ResidualReport> flag_outliers_full(
    const ModelSpace& space, const Dataset& data,
    const std::vector<RobustFit>& fits, double threshold) {
  if (fits.size() != space.models.size()) {
    throw numerical_error("flag_outliers_full: one fit per model required");
  }
  std::vector<ResidualReport> reports;
  reports.reserve(fits.size());
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const Eigen::MatrixXd Xk = design_for(data, space.models[k]);
    reports.push_back(
        standardized_residuals(fits[k], Xk, data.y, threshold));
  }
  return reports;
}

}  // namespace rbpcr
