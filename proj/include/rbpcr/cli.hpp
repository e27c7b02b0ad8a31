#ifndef RBPCR_CLI_HPP
#define RBPCR_CLI_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "rbpcr/pipeline.hpp"

namespace rbpcr::cli {

struct RunConfig {
  double rho = 0.95;
  double variance_cap = 0.95;
  double bf_threshold = 1.0;
  double vartheta = 0.6;
  long tune_iters = 100000;
  long tune_burnin = 10000;
  long screen_iters = 1000000;
  long screen_burnin = 100000;
  long main_iters = 1000000;
  long main_burnin = 100000;
  double outlier_threshold = 2.5;
  std::uint64_t seed = 1;
  std::string mode = "robust";  // robust | normal | both
  std::string train_path;
  std::string predict_path;  // optional
  std::string out_dir = ".";
  bool export_screen_traces = false;
  int n_threads = 0;

  void validate() const;  // throws input_error on bad values
  PipelineOptions pipeline_options() const;
};

// Load config JSON from disk (missing keys keep defaults).
RunConfig load_config(const std::string& path);

struct RawData {
  Eigen::VectorXd y;
  Eigen::MatrixXd C;
  Eigen::MatrixXd C_new;                  // 0 rows when absent
  std::optional<Eigen::VectorXd> y_true;  // raw scale
};

// Train CSV: header row, first column is the dependent variable, the
// rest are covariates. Predict CSV: the same covariate columns plus an
// optional "y_true" column.
RawData ingest(const std::string& train_csv, const std::string& predict_csv);

// One pipeline pass (robust RJ-based or normal closed-form) over the raw
// data; shared by run() and the tests.
struct ModeResult {
  PcaResult pca;
  ColumnStats y_stats;
  Dataset data;
  ScreeningReport screening;
  ModelSpace space;
  std::vector<double> model_probs;
  std::vector<Eigen::VectorXd> beta_means;
  std::vector<double> sigma_means;
  std::vector<PredictionRow> predictions;
  std::optional<Metrics> metrics;
  std::optional<std::vector<ResidualReport>> outlier_flags;
  std::optional<ChainTrace> trace;      // robust mode only
  std::optional<SamplerInputs> inputs;  // robust mode only
};

ModeResult run_robust_mode(const RawData& raw, const RunConfig& config);
ModeResult run_normal_mode(const RawData& raw, const RunConfig& config);

// Full run: ingest, both-or-one pipeline pass, and all output files
// (report.json, predictions.csv, traces, plots/). Deterministic given
// the seed. Returns 0.
int run(const RunConfig& config);

// The 21-point two-covariate construction with a gross outlier at
// (10, 20): rank-1 robust and traditional PCA reconstructions plus
// inlier squared errors, written under out_dir.
struct ToyDemoResult {
  double robust_inlier_sq_error = 0.0;
  double normal_inlier_sq_error = 0.0;
  std::vector<int> flagged_rows;  // 1-based, pairwise residual rule
};

ToyDemoResult toy_demo(std::uint64_t seed, const std::string& out_dir,
                       bool inject_outlier = true);

}  // namespace rbpcr::cli

#endif  // RBPCR_CLI_HPP
