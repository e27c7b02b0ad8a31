#include "rbpcr/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rbpcr/errors.hpp"
#include "rbpcr/parallel.hpp"
#include "rbpcr/robust.hpp"

namespace rbpcr {

namespace {
constexpr double kEigenvalueFloor = 1e-10;
}

StandardizedMatrix standardize(const Eigen::MatrixXd& C_raw,
                               StandardizeMode mode, const LptnParams* p) {
  const int n = static_cast<int>(C_raw.rows());
  const int cols = static_cast<int>(C_raw.cols());
  if (n < 3) throw numerical_error("standardize: need n >= 3");
  if (mode == StandardizeMode::robust && p == nullptr) {
    throw numerical_error("standardize: robust mode needs LPTN parameters");
  }

  StandardizedMatrix out;
  out.C.resize(n, cols);
  out.stats.resize(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) {
    const Eigen::VectorXd col = C_raw.col(j);
    if ((col.array() - col[0]).abs().maxCoeff() == 0.0) {
      std::ostringstream msg;
      msg << "standardize: column " << (j + 1) << " is constant";
      throw numerical_error(msg.str());
    }
    ColumnStats st;
    if (mode == StandardizeMode::sample) {
      st.mu = col.mean();
      st.sigma = std::sqrt((col.array() - st.mu).square().sum() / (n - 1));
    } else {
      const RobustFit fit = map_location_scale(col, *p);
      st.mu = fit.beta[0];
      st.sigma = fit.sigma;
    }
    out.stats[static_cast<std::size_t>(j)] = st;
    out.C.col(j) = (col.array() - st.mu) / st.sigma;
  }
  return out;
}

Eigen::MatrixXd apply_standardization(const Eigen::MatrixXd& C_raw,
                                      const std::vector<ColumnStats>& stats) {
  if (static_cast<std::size_t>(C_raw.cols()) != stats.size()) {
    throw numerical_error("apply_standardization: column count mismatch");
  }
  Eigen::MatrixXd C = C_raw;
  for (int j = 0; j < C.cols(); ++j) {
    const auto& st = stats[static_cast<std::size_t>(j)];
    C.col(j) = (C.col(j).array() - st.mu) / st.sigma;
  }
  return C;
}

Eigen::MatrixXd sample_correlation(const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(C.rows());
  return C.transpose() * C / static_cast<double>(n - 1);
}

Eigen::MatrixXd robust_correlation(const Eigen::MatrixXd& C,
                                   const LptnParams& p,
                                   const RobustCorrelationOptions& opt) {
  const int n = static_cast<int>(C.rows());
  const int cols = static_cast<int>(C.cols());
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(cols, cols);

  struct Pair {
    int j1, j2;
  };
  std::vector<Pair> pairs;
  for (int j1 = 0; j1 < cols; ++j1) {
    for (int j2 = j1 + 1; j2 < cols; ++j2) pairs.push_back({j1, j2});
  }
  std::vector<double> slopes(pairs.size());

  parallel_for(static_cast<int>(pairs.size()), opt.n_threads, [&](int idx) {
    const auto [j1, j2] = pairs[static_cast<std::size_t>(idx)];
    Eigen::MatrixXd Xp(n, 2);
    Xp.col(0).setOnes();
    Xp.col(1) = C.col(j1);
    try {
      const RobustFit fit = map_regression(Xp, C.col(j2), p);
      slopes[static_cast<std::size_t>(idx)] = fit.beta[1];
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "robust_correlation: pair (" << (j1 + 1) << ", " << (j2 + 1)
          << "): " << e.what();
      throw numerical_error(msg.str());
    }
  });

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double r = slopes[i];
    if (opt.clip) r = std::clamp(r, -1.0, 1.0);
    R(pairs[i].j1, pairs[i].j2) = r;
    R(pairs[i].j2, pairs[i].j1) = r;
  }
  return R;
}

PcaResult decompose(const Eigen::MatrixXd& R, const Eigen::MatrixXd& C,
                    PcaPath path, const std::vector<ColumnStats>& stats,
                    double cap) {
  const int p = static_cast<int>(R.rows());
  if (R.cols() != p || C.cols() != p) {
    throw numerical_error("decompose: dimension mismatch between R and C");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(R);
  if (solver.info() != Eigen::Success) {
    throw numerical_error("decompose: eigensolver failed");
  }

  // Eigen returns ascending order; flip to descending.
  std::vector<int> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return solver.eigenvalues()[a] > solver.eigenvalues()[b];
  });

  PcaResult res;
  res.path = path;
  res.column_stats = stats;
  std::vector<double> lambdas;
  std::vector<int> keep;
  for (int pos = 0; pos < p; ++pos) {
    const double lam = solver.eigenvalues()[order[static_cast<std::size_t>(pos)]];
    if (lam <= kEigenvalueFloor) {
      res.excluded.push_back(pos);
    } else {
      lambdas.push_back(lam);
      keep.push_back(order[static_cast<std::size_t>(pos)]);
    }
  }
  if (lambdas.empty()) {
    throw numerical_error("decompose: all eigenvalues are nonpositive");
  }

  const int r = static_cast<int>(lambdas.size());
  res.eigenvalues = Eigen::Map<Eigen::VectorXd>(lambdas.data(), r);
  res.eigenvectors.resize(p, r);
  for (int j = 0; j < r; ++j) {
    Eigen::VectorXd v = solver.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
    int imax = 0;
    v.array().abs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    res.eigenvectors.col(j) = v;
  }

  const double total = res.eigenvalues.sum();
  double cum = 0.0;
  int q = 0;
  for (int j = 0; j < r; ++j) {
    cum += res.eigenvalues[j];
    if (cum / total <= cap) {
      q = j + 1;
    } else {
      break;
    }
  }
  res.q = std::max(q, 1);

  res.scores = C * res.eigenvectors;
  if (path == PcaPath::normal) {
    for (int j = 0; j < r; ++j) {
      res.scores.col(j) /= std::sqrt(res.eigenvalues[j]);
    }
  }
  return res;
}

Eigen::MatrixXd reconstruct(const PcaResult& res, int q) {
  if (q < 1 || q > res.r()) {
    throw numerical_error("reconstruct: q out of range");
  }
  // Both paths reduce to projection onto the leading eigenvector span:
  // normal-path scores carry a 1/sqrt(lambda) that cancels here.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(res.scores.rows(),
                                            res.eigenvectors.rows());
  for (int j = 0; j < q; ++j) {
    const double scale =
        res.path == PcaPath::normal ? std::sqrt(res.eigenvalues[j]) : 1.0;
    M += scale * res.scores.col(j) * res.eigenvectors.col(j).transpose();
  }
  return M;
}

Eigen::MatrixXd transform(const PcaResult& res, const Eigen::MatrixXd& C_new) {
  if (C_new.cols() != res.eigenvectors.rows()) {
    throw numerical_error("transform: column count mismatch");
  }
  Eigen::MatrixXd Z = C_new * res.eigenvectors;
  if (res.path == PcaPath::normal) {
    for (int j = 0; j < res.r(); ++j) Z.col(j) /= std::sqrt(res.eigenvalues[j]);
  }
  return Z;
}

}  // namespace rbpcr
