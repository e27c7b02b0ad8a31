#include "rbpcr/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "rbpcr/csv.hpp"
#include "rbpcr/errors.hpp"
#include "rbpcr/normal_posterior.hpp"
#include "rbpcr/rng.hpp"

namespace rbpcr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  const double lo = lptn_rho_lower_bound();
  if (!(rho > lo) || !(rho < 1.0)) {
    std::ostringstream msg;
    msg << "config: rho must lie in (" << lo << ", 1)";
    throw input_error(msg.str());
  }
  if (!(variance_cap > 0.0) || !(variance_cap <= 1.0)) {
    throw input_error("config: variance cap must lie in (0, 1]");
  }
  if (!(bf_threshold > 0.0)) {
    throw input_error("config: Bayes factor threshold must be positive");
  }
  if (!(vartheta > 0.0) || !(vartheta < 1.0)) {
    throw input_error("config: vartheta must lie in (0, 1)");
  }
  auto check_tb = [](long t, long b, const char* what) {
    if (!(t > b) || b <= 0) {
      throw input_error(std::string("config: need iters > burnin > 0 for ") +
                        what);
    }
  };
  check_tb(tune_iters, tune_burnin, "tuning runs");
  check_tb(screen_iters, screen_burnin, "screening runs");
  check_tb(main_iters, main_burnin, "the main run");
  if (!(outlier_threshold > 0.0)) {
    throw input_error("config: outlier threshold must be positive");
  }
  if (mode != "robust" && mode != "normal" && mode != "both") {
    throw input_error("config: mode must be robust, normal or both");
  }
  if (train_path.empty()) throw input_error("config: train path is required");
}

PipelineOptions RunConfig::pipeline_options() const {
  PipelineOptions opt;
  opt.bf_threshold = bf_threshold;
  opt.vartheta = vartheta;
  opt.tune_iters = tune_iters;
  opt.tune_burnin = tune_burnin;
  opt.screen_iters = screen_iters;
  opt.screen_burnin = screen_burnin;
  opt.main_iters = main_iters;
  opt.main_burnin = main_burnin;
  opt.outlier_threshold = outlier_threshold;
  opt.n_threads = n_threads;
  return opt;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw input_error("config parse error in " + path + ": " + e.what());
  }
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("rho", c.rho);
  get("variance_cap", c.variance_cap);
  get("bf_threshold", c.bf_threshold);
  get("vartheta", c.vartheta);
  get("tune_iters", c.tune_iters);
  get("tune_burnin", c.tune_burnin);
  get("screen_iters", c.screen_iters);
  get("screen_burnin", c.screen_burnin);
  get("main_iters", c.main_iters);
  get("main_burnin", c.main_burnin);
  get("outlier_threshold", c.outlier_threshold);
  get("seed", c.seed);
  get("mode", c.mode);
  get("train", c.train_path);
  get("predict", c.predict_path);
  get("out_dir", c.out_dir);
  get("export_screen_traces", c.export_screen_traces);
  get("n_threads", c.n_threads);
  return c;
}

RawData ingest(const std::string& train_csv, const std::string& predict_csv) {
  const csv::Table train = csv::read_numeric(train_csv);
  if (train.cols() < 2) {
    throw input_error(train_csv +
                      ": need a dependent column plus at least one covariate");
  }
  if (train.rows() <= 3) {
    throw input_error(train_csv + ": need more than 3 rows");
  }
  RawData raw;
  raw.y = train.values.col(0);
  raw.C = train.values.rightCols(train.cols() - 1);
  for (int j = 0; j < raw.C.cols(); ++j) {
    if ((raw.C.col(j).array() - raw.C(0, j)).abs().maxCoeff() == 0.0) {
      std::ostringstream msg;
      msg << train_csv << ": covariate column '" << train.header[j + 1]
          << "' is constant";
      throw input_error(msg.str());
    }
  }

  if (predict_csv.empty()) {
    raw.C_new.resize(0, raw.C.cols());
    return raw;
  }
  const csv::Table pred = csv::read_numeric(predict_csv);
  const int truth_col = pred.column_index("y_true");
  const int expected = static_cast<int>(raw.C.cols()) + (truth_col >= 0 ? 1 : 0);
  if (pred.cols() != expected) {
    std::ostringstream msg;
    msg << predict_csv << ": expected " << raw.C.cols()
        << " covariate columns (plus optional y_true), got " << pred.cols();
    throw input_error(msg.str());
  }
  raw.C_new.resize(pred.rows(), raw.C.cols());
  int out_col = 0;
  for (int j = 0; j < pred.cols(); ++j) {
    if (j == truth_col) continue;
    raw.C_new.col(out_col++) = pred.values.col(j);
  }
  if (truth_col >= 0) raw.y_true = pred.values.col(truth_col);
  return raw;
}

namespace {

Dataset make_dataset(const Eigen::VectorXd& y_std, const PcaResult& pca) {
  Dataset data;
  data.y = y_std;
  data.X.resize(y_std.size(), pca.q + 1);
  data.X.col(0).setOnes();
  data.X.rightCols(pca.q) = pca.scores.leftCols(pca.q);
  return data;
}

Eigen::MatrixXd make_new_design(const Eigen::MatrixXd& C_new_raw,
                                const PcaResult& pca) {
  const Eigen::MatrixXd C_new =
      apply_standardization(C_new_raw, pca.column_stats);
  const Eigen::MatrixXd Z = transform(pca, C_new).leftCols(pca.q);
  Eigen::MatrixXd X(Z.rows(), pca.q + 1);
  X.col(0).setOnes();
  X.rightCols(pca.q) = Z;
  return X;
}

Metrics compute_metrics(const std::vector<PredictionRow>& rows,
                        const Eigen::VectorXd& y_true) {
  Metrics m;
  m.n = static_cast<int>(rows.size());
  int hits = 0;
  double acc = 0.0;
  for (int i = 0; i < m.n; ++i) {
    const double pred = rows[static_cast<std::size_t>(i)].y_raw;
    acc += std::fabs(pred - y_true[i]);
    if (pred * y_true[i] > 0.0 || (pred == 0.0 && y_true[i] == 0.0)) ++hits;
  }
  m.aad = acc / m.n;
  m.sign_rate = static_cast<double>(hits) / m.n;
  return m;
}

}  // namespace

ModeResult run_robust_mode(const RawData& raw, const RunConfig& config) {
  const LptnParams p = lptn_params(config.rho);
  const PipelineOptions opt = config.pipeline_options();
  ModeResult res;

  const RobustFit y_fit = map_location_scale(raw.y, p);
  res.y_stats = ColumnStats{y_fit.beta[0], y_fit.sigma};
  const Eigen::VectorXd y_std =
      (raw.y.array() - res.y_stats.mu) / res.y_stats.sigma;

  const StandardizedMatrix std_c =
      standardize(raw.C, StandardizeMode::robust, &p);
  RobustCorrelationOptions corr_opt;
  corr_opt.n_threads = config.n_threads;
  const Eigen::MatrixXd R = robust_correlation(std_c.C, p, corr_opt);
  res.pca = decompose(R, std_c.C, PcaPath::robust, std_c.stats,
                      config.variance_cap);
  res.data = make_dataset(y_std, res.pca);

  res.screening =
      screen_components(res.data, p, ErrorModel::lptn, opt,
                        derive_seed(config.seed, {0xB0B, 1}),
                        config.bf_threshold);
  res.space = build_nested_space(res.screening);

  Eigen::MatrixXd X_new(0, res.data.d());
  if (raw.C_new.rows() > 0) X_new = make_new_design(raw.C_new, res.pca);

  PredictionReport pred =
      fit_predict(res.space, res.data, X_new, raw.y_true, res.y_stats, p,
                  ErrorModel::lptn, opt, derive_seed(config.seed, {0xB0B, 2}));
  res.model_probs = pred.model_probs;
  for (const auto& est : pred.model_estimates) {
    res.beta_means.push_back(est.beta_mean);
    res.sigma_means.push_back(est.sigma_mean);
  }
  res.predictions = std::move(pred.predictions);
  res.metrics = pred.metrics;
  res.trace = std::move(pred.trace);
  res.inputs = std::move(pred.inputs);

  const std::vector<RobustFit> fits =
      fit_models_map(res.space, res.data, p, config.n_threads);
  res.outlier_flags = flag_outliers_full(res.space, res.data, fits,
                                         config.outlier_threshold);
  return res;
}

ModeResult run_normal_mode(const RawData& raw, const RunConfig& config) {
  ModeResult res;
  const int n = static_cast<int>(raw.y.size());

  const double y_mu = raw.y.mean();
  const double y_sd =
      std::sqrt((raw.y.array() - y_mu).square().sum() / (n - 1));
  if (!(y_sd > 0.0)) {
    throw numerical_error("normal mode: dependent variable is constant");
  }
  res.y_stats = ColumnStats{y_mu, y_sd};
  const Eigen::VectorXd y_std = (raw.y.array() - y_mu) / y_sd;

  const StandardizedMatrix std_c =
      standardize(raw.C, StandardizeMode::sample, nullptr);
  const Eigen::MatrixXd R = sample_correlation(std_c.C);
  res.pca = decompose(R, std_c.C, PcaPath::normal, std_c.stats,
                      config.variance_cap);
  res.data = make_dataset(y_std, res.pca);

  // Closed-form screening: exact posterior odds of {1, j} vs {1}.
  res.screening.threshold = config.bf_threshold;
  const double w1 = model_log_weight(ModelSpec{{1}}, res.data);
  for (int j = 2; j <= res.data.d(); ++j) {
    ScreeningEntry e;
    e.column = j;
    e.bf = std::exp(model_log_weight(ModelSpec{{1, j}}, res.data) - w1);
    e.retained = e.bf > config.bf_threshold;
    e.occupancy_with = e.bf / (1.0 + e.bf);
    res.screening.entries.push_back(e);
  }
  res.space = build_nested_space(res.screening);

  const NormalPosteriorSummary post = normal_posterior(res.space, res.data);
  res.model_probs = post.model_probs;
  res.beta_means = post.beta;
  for (std::size_t k = 0; k < post.sigma_shape.size(); ++k) {
    // E[sigma] under inverse-gamma on sigma^2.
    const double a = post.sigma_shape[k];
    const double b = post.sigma_rate[k];
    res.sigma_means.push_back(
        a > 0.5 ? std::sqrt(b) *
                      std::exp(std::lgamma(a - 0.5) - std::lgamma(a))
                : std::numeric_limits<double>::quiet_NaN());
  }

  if (raw.C_new.rows() > 0) {
    const Eigen::MatrixXd X_new = make_new_design(raw.C_new, res.pca);
    for (int i = 0; i < X_new.rows(); ++i) {
      PredictionRow row;
      row.per_model.resize(res.space.models.size());
      double acc = 0.0;
      for (std::size_t k = 0; k < res.space.models.size(); ++k) {
        const Eigen::VectorXd xk =
            restrict_row(X_new.row(i).transpose(), res.space.models[k]);
        row.per_model[k] = xk.dot(post.beta[k]);
        acc += post.model_probs[k] * row.per_model[k];
      }
      row.y_std = acc;
      row.y_raw = res.y_stats.mu + res.y_stats.sigma * acc;
      res.predictions.push_back(std::move(row));
    }
    if (raw.y_true) res.metrics = compute_metrics(res.predictions, *raw.y_true);
  }
  return res;
}

namespace {

json stats_json(const ColumnStats& st) {
  return json{{"mu", st.mu}, {"sigma", st.sigma}};
}

json pca_json(const PcaResult& pca) {
  json j;
  j["path"] = pca.path == PcaPath::robust ? "robust" : "normal";
  j["eigenvalues"] = std::vector<double>(
      pca.eigenvalues.data(), pca.eigenvalues.data() + pca.eigenvalues.size());
  j["q"] = pca.q;
  j["excluded_positions"] = pca.excluded;
  json stats = json::array();
  for (const auto& st : pca.column_stats) stats.push_back(stats_json(st));
  j["column_stats"] = stats;
  json vecs = json::array();
  for (int c = 0; c < pca.eigenvectors.cols(); ++c) {
    vecs.push_back(std::vector<double>(
        pca.eigenvectors.col(c).data(),
        pca.eigenvectors.col(c).data() + pca.eigenvectors.rows()));
  }
  j["eigenvectors"] = vecs;
  return j;
}

json screening_json(const ScreeningReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries) {
    entries.push_back(json{{"column", e.column},
                           {"bf", e.bf},
                           {"retained", e.retained},
                           {"never_visited", e.never_visited},
                           {"occupancy_with", e.occupancy_with},
                           {"update_acceptance", e.update_acceptance}});
  }
  return json{{"threshold", rep.threshold}, {"entries", entries}};
}

json mode_json(const ModeResult& res) {
  json j;
  j["y_stats"] = stats_json(res.y_stats);
  j["pca"] = pca_json(res.pca);
  j["screening"] = screening_json(res.screening);
  json space = json::array();
  for (const auto& m : res.space.models) space.push_back(m.cols);
  j["space"] = space;
  j["model_probs"] = res.model_probs;
  json betas = json::array();
  for (const auto& b : res.beta_means) {
    betas.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  j["beta_means"] = betas;
  j["sigma_means"] = res.sigma_means;

  json preds = json::array();
  for (std::size_t i = 0; i < res.predictions.size(); ++i) {
    const auto& row = res.predictions[i];
    preds.push_back(json{{"index", i},
                         {"y_hat", row.y_raw},
                         {"y_hat_std", row.y_std},
                         {"per_model", row.per_model}});
  }
  j["predictions"] = preds;
  j["metrics"] = res.metrics
                     ? json{{"aad", res.metrics->aad},
                            {"sign_rate", res.metrics->sign_rate},
                            {"n", res.metrics->n}}
                     : json(nullptr);
  if (res.outlier_flags) {
    json flags = json::array();
    for (std::size_t k = 0; k < res.outlier_flags->size(); ++k) {
      const auto& rep = (*res.outlier_flags)[k];
      std::vector<int> rows;
      for (std::size_t i = 0; i < rep.flags.size(); ++i) {
        if (rep.flags[i]) rows.push_back(static_cast<int>(i) + 1);
      }
      flags.push_back(json{{"model", k + 1}, {"flagged_rows", rows}});
    }
    j["outliers"] = flags;
  } else {
    j["outliers"] = json(nullptr);
  }
  if (res.trace) {
    json acc = json::array();
    const char* names[3] = {"update", "birth", "death"};
    for (int t = 0; t < 3; ++t) {
      acc.push_back(json{{"move", names[t]},
                         {"attempts", res.trace->moves[t].attempts},
                         {"accepts", res.trace->moves[t].accepts}});
    }
    j["acceptance"] = acc;
  } else {
    j["acceptance"] = json(nullptr);
  }
  return j;
}

json config_json(const RunConfig& c) {
  return json{{"rho", c.rho},
              {"variance_cap", c.variance_cap},
              {"bf_threshold", c.bf_threshold},
              {"vartheta", c.vartheta},
              {"tune_iters", c.tune_iters},
              {"tune_burnin", c.tune_burnin},
              {"screen_iters", c.screen_iters},
              {"screen_burnin", c.screen_burnin},
              {"main_iters", c.main_iters},
              {"main_burnin", c.main_burnin},
              {"outlier_threshold", c.outlier_threshold},
              {"seed", c.seed},
              {"mode", c.mode},
              {"train", c.train_path},
              {"predict", c.predict_path},
              {"out_dir", c.out_dir}};
}

void export_trace(const ChainTrace& trace, const SamplerInputs& inputs,
                  const std::string& csv_path, const std::string& json_path) {
  const int d_max = static_cast<int>(trace.beta.cols());
  std::vector<std::string> header{"iteration", "k", "sigma"};
  for (int j = 1; j <= d_max; ++j) header.push_back("beta" + std::to_string(j));

  Eigen::MatrixXd values(trace.iterations(), 3 + d_max);
  for (long m = 0; m < trace.iterations(); ++m) {
    values(m, 0) = static_cast<double>(m + 1);
    values(m, 1) = trace.k[static_cast<std::size_t>(m)];
    values(m, 2) = trace.sigma[m];
    values.row(m).tail(d_max) = trace.beta.row(m);
  }
  csv::write_numeric(csv_path, header, values);

  json j;
  j["seed"] = trace.seed;
  j["iterations"] = trace.iterations();
  j["burn_in"] = trace.burn_in;
  j["vartheta"] = inputs.vartheta;
  j["rho"] = inputs.lptn.rho;
  j["error_model"] = inputs.error_model == ErrorModel::lptn ? "lptn" : "normal";
  j["ell"] = inputs.ell;
  json cs = json::array();
  for (const auto& c : inputs.c) {
    cs.push_back(std::vector<double>(c.data(), c.data() + c.size()));
  }
  j["c"] = cs;
  json births = json::array();
  for (const auto& b : inputs.birth) {
    births.push_back(json{{"location", b.location}, {"scale", b.scale}});
  }
  j["birth_proposals"] = births;
  const char* names[3] = {"update", "birth", "death"};
  json acc;
  for (int t = 0; t < 3; ++t) {
    acc[names[t]] = json{{"attempts", trace.moves[t].attempts},
                         {"accepts", trace.moves[t].accepts}};
  }
  j["acceptance"] = acc;

  std::ofstream out(json_path);
  out << j.dump(2) << "\n";
}

void write_plots(const fs::path& plot_dir, const RawData& raw,
                 const ModeResult* robust, const ModeResult* normal) {
  fs::create_directories(plot_dir);

  {
    std::ofstream out(plot_dir / "pc_scatter.csv");
    out.precision(17);
    out << "series,pc_column,row,score,y_std\n";
    auto emit = [&](const char* name, const ModeResult& res) {
      for (int j = 1; j < res.data.d(); ++j) {
        for (int i = 0; i < res.data.n(); ++i) {
          out << name << "," << (j + 1) << "," << (i + 1) << ","
              << res.data.X(i, j) << "," << res.data.y[i] << "\n";
        }
      }
    };
    if (robust) emit("robust", *robust);
    if (normal) emit("normal", *normal);
  }

  {
    std::ofstream out(plot_dir / "reconstruction.csv");
    out.precision(17);
    out << "series,row,column,original,reconstructed\n";
    auto emit = [&](const char* name, const ModeResult& res) {
      const Eigen::MatrixXd M = reconstruct(res.pca, res.pca.q);
      for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) {
          const auto& st = res.pca.column_stats[static_cast<std::size_t>(j)];
          out << name << "," << (i + 1) << "," << (j + 1) << ","
              << raw.C(i, j) << "," << (st.mu + st.sigma * M(i, j)) << "\n";
        }
      }
    };
    if (robust) emit("robust", *robust);
    if (normal) emit("normal", *normal);
  }

  if (robust && normal) {
    std::ofstream out(plot_dir / "pc_weights.csv");
    out.precision(17);
    out << "pc,covariate,robust_weight,normal_weight,difference\n";
    const int pr = robust->pca.r();
    const int pn = normal->pca.r();
    const int p = static_cast<int>(robust->pca.eigenvectors.rows());
    for (int c = 0; c < std::min(pr, pn); ++c) {
      for (int row = 0; row < p; ++row) {
        const double wr = robust->pca.eigenvectors(row, c);
        const double wn = normal->pca.eigenvectors(row, c);
        out << (c + 1) << "," << (row + 1) << "," << wr << "," << wn << ","
            << (wr - wn) << "\n";
      }
    }
  }
}

}  // namespace

int run(const RunConfig& config) {
  config.validate();
  const RawData raw = ingest(config.train_path, config.predict_path);

  fs::create_directories(config.out_dir);
  const fs::path out_dir(config.out_dir);

  std::optional<ModeResult> robust, normal;
  if (config.mode == "robust" || config.mode == "both") {
    robust = run_robust_mode(raw, config);
  }
  if (config.mode == "normal" || config.mode == "both") {
    normal = run_normal_mode(raw, config);
  }

  json report;
  report["config"] = config_json(config);
  report["modes"]["robust"] = robust ? mode_json(*robust) : json(nullptr);
  report["modes"]["normal"] = normal ? mode_json(*normal) : json(nullptr);
  {
    std::ofstream out(out_dir / "report.json");
    out << report.dump(2) << "\n";
  }

  // predictions.csv
  {
    const std::size_t n_pred =
        robust ? robust->predictions.size()
               : (normal ? normal->predictions.size() : 0);
    Eigen::MatrixXd values(static_cast<int>(n_pred), 4);
    values.setConstant(std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n_pred; ++i) {
      values(static_cast<int>(i), 0) = static_cast<double>(i + 1);
      if (robust) values(static_cast<int>(i), 1) = robust->predictions[i].y_raw;
      if (normal && i < normal->predictions.size()) {
        values(static_cast<int>(i), 2) = normal->predictions[i].y_raw;
      }
      if (raw.y_true) {
        values(static_cast<int>(i), 3) = (*raw.y_true)[static_cast<int>(i)];
      }
    }
    csv::write_numeric((out_dir / "predictions.csv").string(),
                       {"index", "y_hat_robust", "y_hat_normal", "y_true"},
                       values);
  }

  if (robust && robust->trace) {
    export_trace(*robust->trace, *robust->inputs,
                 (out_dir / "trace-robust-main.csv").string(),
                 (out_dir / "trace-robust-main.json").string());
  }

  write_plots(out_dir / "plots", raw, robust ? &*robust : nullptr,
              normal ? &*normal : nullptr);
  return 0;
}

ToyDemoResult toy_demo(std::uint64_t seed, const std::string& out_dir,
                       bool inject_outlier) {
  const LptnParams p = lptn_params(0.95);
  Rng rng(seed);

  const int n = 21;
  Eigen::MatrixXd C_raw(n, 2);
  for (int i = 0; i < n; ++i) {
    C_raw(i, 0) = static_cast<double>(i + 1) - 11.0;
    C_raw(i, 1) = C_raw(i, 0) + rng.normal();
  }
  if (inject_outlier) {
    C_raw(20, 0) = 10.0;
    C_raw(20, 1) = 20.0;
  }

  auto rank1 = [&](StandardizeMode mode, PcaPath path) {
    const StandardizedMatrix std_c =
        standardize(C_raw, mode, mode == StandardizeMode::robust ? &p : nullptr);
    const Eigen::MatrixXd R =
        path == PcaPath::robust ? robust_correlation(std_c.C, p)
                                : sample_correlation(std_c.C);
    const PcaResult pca = decompose(R, std_c.C, path, std_c.stats, 0.95);
    Eigen::MatrixXd M = reconstruct(pca, 1);
    for (int j = 0; j < M.cols(); ++j) {
      const auto& st = std_c.stats[static_cast<std::size_t>(j)];
      M.col(j) = (M.col(j).array() * st.sigma + st.mu).matrix();
    }
    return M;
  };

  const Eigen::MatrixXd rec_robust =
      rank1(StandardizeMode::robust, PcaPath::robust);
  const Eigen::MatrixXd rec_normal =
      rank1(StandardizeMode::sample, PcaPath::normal);

  ToyDemoResult result;
  const int inliers = inject_outlier ? n - 1 : n;
  result.robust_inlier_sq_error =
      (rec_robust.topRows(inliers) - C_raw.topRows(inliers)).squaredNorm();
  result.normal_inlier_sq_error =
      (rec_normal.topRows(inliers) - C_raw.topRows(inliers)).squaredNorm();

  // Pairwise outlier rule on the robust-standardized columns.
  {
    const StandardizedMatrix std_c =
        standardize(C_raw, StandardizeMode::robust, &p);
    Eigen::MatrixXd Xp(n, 2);
    Xp.col(0).setOnes();
    Xp.col(1) = std_c.C.col(0);
    const RobustFit fit = map_regression(Xp, std_c.C.col(1), p);
    const ResidualReport rep =
        standardized_residuals(fit, Xp, std_c.C.col(1), 2.5);
    for (std::size_t i = 0; i < rep.flags.size(); ++i) {
      if (rep.flags[i]) result.flagged_rows.push_back(static_cast<int>(i) + 1);
    }
  }

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  Eigen::MatrixXd table(n, 7);
  for (int i = 0; i < n; ++i) {
    table(i, 0) = i + 1;
    table(i, 1) = C_raw(i, 0);
    table(i, 2) = C_raw(i, 1);
    table(i, 3) = rec_robust(i, 0);
    table(i, 4) = rec_robust(i, 1);
    table(i, 5) = rec_normal(i, 0);
    table(i, 6) = rec_normal(i, 1);
  }
  csv::write_numeric((dir / "toy_reconstruction.csv").string(),
                     {"row", "c1", "c2", "robust_c1", "robust_c2", "normal_c1",
                      "normal_c2"},
                     table);
  json summary;
  summary["seed"] = seed;
  summary["outlier_injected"] = inject_outlier;
  summary["robust_inlier_sq_error"] = result.robust_inlier_sq_error;
  summary["normal_inlier_sq_error"] = result.normal_inlier_sq_error;
  summary["flagged_rows"] = result.flagged_rows;
  std::ofstream out(dir / "toy_summary.json");
  out << summary.dump(2) << "\n";
  return result;
}

}  // namespace rbpcr::cli
