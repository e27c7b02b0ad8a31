#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rbpcr/cli.hpp"
#include "rbpcr/errors.hpp"
#include "rbpcr/normal_posterior.hpp"
#include "rbpcr/pipeline.hpp"

using namespace rbpcr;

namespace {

const LptnParams kP = lptn_params(0.95);

PipelineOptions quick_options() {
  PipelineOptions opt;
  opt.tune_iters = 3000;
  opt.tune_burnin = 600;
  opt.probe_iters = 1500;
  opt.grid_size = 7;
  opt.screen_iters = 10000;
  opt.screen_burnin = 2000;
  opt.main_iters = 20000;
  opt.main_burnin = 4000;
  return opt;
}

Dataset pc_data(int n, int q, const std::vector<double>& coef, double noise,
                unsigned seed) {
  std::mt19937_64 eng(seed);
  Dataset data;
  data.X = oracles::orthonormal_design(n, q, eng);
  std::normal_distribution<double> gauss(0.0, noise);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (std::size_t j = 0; j < coef.size(); ++j) {
    y += coef[j] * data.X.col(static_cast<int>(j) + 1);
  }
  for (int i = 0; i < n; ++i) y[i] += gauss(eng);
  data.y = oracles::standardize_response(y);
  return data;
}

}  // namespace

TEST_CASE("screening: null PCs, informative PC, posterior-odds identity") {
  SUBCASE("pure noise keeps the retained set empty in most seeds") {
    int empty = 0;
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const Dataset data = pc_data(200, 3, {0.0, 0.0, 0.0}, 1.0, 900 + seed);
      const ScreeningReport rep = screen_components(
          data, kP, ErrorModel::lptn, quick_options(), seed, 1.0);
      if (rep.retained_columns().empty()) ++empty;
    }
    CHECK(empty >= 3);
  }

  SUBCASE("a strong PC is retained with a huge Bayes factor") {
    const Dataset data = pc_data(150, 2, {0.9}, 0.35, 11);
    const ScreeningReport rep = screen_components(
        data, kP, ErrorModel::lptn, quick_options(), 3, 1.0);
    const auto& strong = rep.entries[0];  // column 2
    CHECK(strong.column == 2);
    CHECK(strong.retained);
    CHECK(strong.bf > 100.0);
    CHECK(strong.never_visited);  // the intercept model is never revisited
    // the null PC stays out
    CHECK_FALSE(rep.entries[1].retained);
    CHECK(rep.entries[1].bf < 1.0);
  }

  SUBCASE("with the uniform prior the BF is exactly the occupancy odds") {
    const Dataset data = pc_data(100, 1, {0.4}, 0.9, 17);
    const ScreeningReport rep = screen_components(
        data, kP, ErrorModel::lptn, quick_options(), 23, 1.0);
    const auto& e = rep.entries[0];
    if (!e.never_visited) {
      CHECK(e.bf == doctest::Approx(e.occupancy_with /
                                    (1.0 - e.occupancy_with))
                        .epsilon(1e-12));
    }
    CHECK(e.retained == (e.bf > 1.0));
  }

  SUBCASE("screening is deterministic across thread counts") {
    const Dataset data = pc_data(80, 3, {0.5, 0.0, 0.3}, 0.8, 29);
    PipelineOptions opt = quick_options();
    opt.n_threads = 1;
    const ScreeningReport a =
        screen_components(data, kP, ErrorModel::lptn, opt, 31, 1.0);
    opt.n_threads = 4;
    const ScreeningReport b =
        screen_components(data, kP, ErrorModel::lptn, opt, 31, 1.0);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t j = 0; j < a.entries.size(); ++j) {
      CHECK(a.entries[j].bf == b.entries[j].bf);
      CHECK(a.entries[j].retained == b.entries[j].retained);
    }
  }
}

TEST_CASE("nested space construction") {
  ScreeningReport rep;
  rep.threshold = 1.0;
  for (int col : {2, 3, 4}) {
    ScreeningEntry e;
    e.column = col;
    e.retained = (col == 2 || col == 4);
    rep.entries.push_back(e);
  }
  const ModelSpace space = build_nested_space(rep);
  REQUIRE(space.k_max() == 3);
  CHECK(space.models[0].cols == std::vector<int>{1});
  CHECK(space.models[1].cols == std::vector<int>{1, 2});
  CHECK(space.models[2].cols == std::vector<int>{1, 2, 4});

  SUBCASE("empty retained set gives the intercept-only space") {
    for (auto& e : rep.entries) e.retained = false;
    const ModelSpace lone = build_nested_space(rep);
    CHECK(lone.k_max() == 1);
    CHECK(lone.models[0].cols == std::vector<int>{1});
  }

  SUBCASE("single retained column") {
    for (auto& e : rep.entries) e.retained = (e.column == 3);
    const ModelSpace one = build_nested_space(rep);
    CHECK(one.k_max() == 2);
    CHECK(one.models[1].cols == std::vector<int>{1, 3});
  }
}

TEST_CASE("fit_predict: intercept space, normal oracle, metrics") {
  SUBCASE("intercept-only space predicts the location estimate") {
    const Dataset data = pc_data(60, 1, {0.0}, 1.0, 41);
    const ModelSpace space = ModelSpace::nested({});
    Eigen::MatrixXd X_new(3, 2);
    X_new << 1, 0.5, 1, -1.0, 1, 2.0;
    const ColumnStats y_stats{2.0, 1.5};
    const PredictionReport rep =
        fit_predict(space, data, X_new, std::nullopt, y_stats, kP,
                    ErrorModel::lptn, quick_options(), 43);
    for (const auto& row : rep.predictions) {
      // beta_1 posterior mean is near 0 on the standardized scale
      CHECK(std::fabs(row.y_std) < 0.15);
      CHECK(row.y_raw == doctest::Approx(2.0 + 1.5 * row.y_std));
    }
  }

  SUBCASE("normal-error swap-in tracks the closed-form prediction") {
    const Dataset data = pc_data(40, 2, {0.6, 0.35}, 0.7, 47);
    const ModelSpace space = ModelSpace::nested({2, 3});
    Eigen::MatrixXd X_new(2, 3);
    X_new << 1, 0.8, -0.6, 1, -1.2, 0.4;
    PipelineOptions opt = quick_options();
    opt.main_iters = 60000;
    opt.main_burnin = 10000;
    const PredictionReport rep =
        fit_predict(space, data, X_new, std::nullopt, ColumnStats{0.0, 1.0},
                    kP, ErrorModel::normal, opt, 53);
    for (int i = 0; i < 2; ++i) {
      const double oracle = predict_model_average(
          space, data, X_new.row(i).transpose());
      CHECK(std::fabs(rep.predictions[static_cast<std::size_t>(i)].y_std -
                      oracle) < 0.05);
    }
    double prob_sum = 0.0;
    for (double p : rep.model_probs) prob_sum += p;
    CHECK(prob_sum == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("metrics: AAD and sign rate") {
    const Dataset data = pc_data(50, 1, {0.7}, 0.6, 59);
    const ModelSpace space = ModelSpace::nested({2});
    Eigen::MatrixXd X_new(4, 2);
    X_new << 1, 1.0, 1, -1.0, 1, 0.5, 1, -0.5;
    Eigen::VectorXd truth(4);
    truth << 0.8, -0.7, 0.4, -0.2;
    const PredictionReport rep =
        fit_predict(space, data, X_new, truth, ColumnStats{0.0, 1.0}, kP,
                    ErrorModel::lptn, quick_options(), 61);
    REQUIRE(rep.metrics.has_value());
    double aad = 0.0;
    for (int i = 0; i < 4; ++i) {
      aad += std::fabs(rep.predictions[static_cast<std::size_t>(i)].y_raw -
                       truth[i]);
    }
    CHECK(rep.metrics->aad == doctest::Approx(aad / 4.0).epsilon(1e-12));
    CHECK(rep.metrics->sign_rate >= 0.0);
    CHECK(rep.metrics->sign_rate <= 1.0);
    CHECK(rep.metrics->n == 4);
  }
}

TEST_CASE("outlier flags across the model sequence") {
  SUBCASE("clean Gaussian data rarely flags") {
    const Dataset data = pc_data(100, 2, {0.5, 0.3}, 0.7, 67);
    const ModelSpace space = ModelSpace::nested({2, 3});
    const auto fits = fit_models_map(space, data, kP);
    const auto reports = flag_outliers_full(space, data, fits, 2.5);
    REQUIRE(reports.size() == 3);
    for (const auto& rep : reports) {
      int flags = 0;
      for (bool f : rep.flags) flags += f;
      CHECK(flags <= 6);
    }
  }

  SUBCASE("an injected gross outlier is flagged in every model") {
    Dataset data = pc_data(100, 2, {0.5, 0.3}, 0.5, 71);
    data.y[7] += 5.0;  // ~10 residual sds
    const ModelSpace space = ModelSpace::nested({2, 3});
    const auto fits = fit_models_map(space, data, kP);
    const auto reports = flag_outliers_full(space, data, fits, 2.5);
    for (const auto& rep : reports) {
      CHECK(rep.flags[7]);
    }
  }

  SUBCASE("zero-residual points are never flagged") {
    Dataset data = pc_data(30, 1, {0.4}, 0.8, 73);
    ModelSpace space = ModelSpace::nested({2});
    auto fits = fit_models_map(space, data, kP);
    // plant an exact fit for observation 0 under every model
    for (std::size_t k = 0; k < fits.size(); ++k) {
      const Eigen::MatrixXd Xk = design_for(data, space.models[k]);
      data.y[0] = Xk.row(0).dot(fits[k].beta);
      const auto reports = flag_outliers_full(space, data, fits, 2.5);
      CHECK_FALSE(reports[k].flags[0]);
    }
  }
}

TEST_CASE("end-to-end: no-outlier agreement between the two pipelines") {
  // raw covariates with correlation structure, clean Gaussian response
  std::mt19937_64 eng(79);
  std::normal_distribution<double> gauss;
  const int n = 150;
  Eigen::MatrixXd C(n, 4);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double f = gauss(eng);
    C(i, 0) = f + 0.4 * gauss(eng);
    C(i, 1) = 0.8 * f + 0.7 * gauss(eng);
    C(i, 2) = -0.5 * f + 0.9 * gauss(eng);
    C(i, 3) = 0.3 * f + 1.1 * gauss(eng);
    y[i] = 1.5 * f + 0.8 * gauss(eng);
  }
  cli::RawData raw;
  raw.y = y;
  raw.C = C;
  raw.C_new.resize(8, 4);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 4; ++j) raw.C_new(i, j) = gauss(eng);
  }

  cli::RunConfig config;
  config.seed = 83;
  config.train_path = "unused";
  config.tune_iters = 3000;
  config.tune_burnin = 600;
  config.screen_iters = 12000;
  config.screen_burnin = 2400;
  config.main_iters = 30000;
  config.main_burnin = 6000;

  const cli::ModeResult rob = cli::run_robust_mode(raw, config);
  const cli::ModeResult nor = cli::run_normal_mode(raw, config);

  // both pipelines retain the same columns on clean data
  CHECK(rob.screening.retained_columns() == nor.screening.retained_columns());

  REQUIRE(rob.model_probs.size() == nor.model_probs.size());
  double tv = 0.0;
  for (std::size_t k = 0; k < rob.model_probs.size(); ++k) {
    tv += 0.5 * std::fabs(rob.model_probs[k] - nor.model_probs[k]);
  }
  CHECK(tv < 0.1);

  REQUIRE(rob.predictions.size() == nor.predictions.size());
  double aad = 0.0;
  for (std::size_t i = 0; i < rob.predictions.size(); ++i) {
    aad += std::fabs(rob.predictions[i].y_raw - nor.predictions[i].y_raw);
  }
  aad /= static_cast<double>(rob.predictions.size());
  CHECK(aad < 0.05);
}

TEST_CASE("end-to-end: prediction plateau under drifting outliers") {
  std::mt19937_64 eng(89);
  std::normal_distribution<double> gauss;
  const int n = 60;
  Eigen::MatrixXd C(n, 3);
  Eigen::VectorXd y_base(n);
  for (int i = 0; i < n; ++i) {
    const double f = gauss(eng);
    C(i, 0) = f + 0.5 * gauss(eng);
    C(i, 1) = 0.7 * f + 0.8 * gauss(eng);
    C(i, 2) = -0.6 * f + 0.8 * gauss(eng);
    y_base[i] = 1.2 * f + 0.5 * gauss(eng);
  }
  Eigen::MatrixXd C_new(5, 3);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) C_new(i, j) = gauss(eng);
  }

  auto predictions = [&](double offset, bool robust) {
    cli::RawData raw;
    raw.y = y_base;
    raw.y[2] += offset;  // single drifting response outlier
    raw.C = C;
    raw.C_new = C_new;
    cli::RunConfig config;
    config.seed = 97;  // common random numbers across offsets
    config.train_path = "unused";
    config.tune_iters = 3000;
    config.tune_burnin = 600;
    config.screen_iters = 8000;
    config.screen_burnin = 1600;
    config.main_iters = 30000;
    config.main_burnin = 6000;
    const cli::ModeResult res = robust ? cli::run_robust_mode(raw, config)
                                       : cli::run_normal_mode(raw, config);
    Eigen::VectorXd out(5);
    for (int i = 0; i < 5; ++i) {
      out[i] = res.predictions[static_cast<std::size_t>(i)].y_raw;
    }
    return out;
  };

  const Eigen::VectorXd rob50 = predictions(50.0, true);
  const Eigen::VectorXd rob100 = predictions(100.0, true);
  const Eigen::VectorXd nor50 = predictions(50.0, false);
  const Eigen::VectorXd nor100 = predictions(100.0, false);

  CHECK((rob50 - rob100).cwiseAbs().maxCoeff() < 1e-2);
  CHECK((nor50 - nor100).cwiseAbs().maxCoeff() > 1e-1);
}
