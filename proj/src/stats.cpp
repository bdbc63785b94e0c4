#include "deplen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deplen/features.hpp"
#include "deplen/parallel.hpp"
#include "deplen/rng.hpp"

namespace deplen {

namespace {

// Coefficients larger than this on standardized predictors mean the
// likelihood has no finite maximum.
constexpr double kDivergenceBound = 50.0;

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x, bool intercept) {
  if (!intercept) return x;
  Eigen::MatrixXd d(x.rows(), x.cols() + 1);
  d.col(0).setOnes();
  d.rightCols(x.cols()) = x;
  return d;
}

// log(1 + e^t) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double log_likelihood_of_eta(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - softplus(eta(i));
  return ll;
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& eta) {
  return eta.unaryExpr([](double t) { return 1.0 / (1.0 + std::exp(-t)); });
}

std::vector<std::string> coefficient_names(const LogisticOptions& options, Eigen::Index columns) {
  std::vector<std::string> names;
  if (options.intercept) names.emplace_back("(Intercept)");
  for (Eigen::Index c = 0; c < columns; ++c) {
    names.push_back(static_cast<std::size_t>(c) < options.names.size() ? options.names[static_cast<std::size_t>(c)]
                                                                       : "x" + std::to_string(c + 1));
  }
  return names;
}

void check_rank(const Eigen::MatrixXd& design, const std::vector<std::string>& names) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  if (rank == design.cols()) return;
  std::vector<std::string> collinear;
  std::string list;
  for (Eigen::Index i = rank; i < design.cols(); ++i) {
    const auto& name = names[static_cast<std::size_t>(qr.colsPermutation().indices()(i))];
    collinear.push_back(name);
    list += (list.empty() ? "" : ", ") + name;
  }
  throw RankDeficientError("design matrix is rank deficient; collinear columns: " + list, std::move(collinear));
}

RegressionFit irls(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, double ridge, const LogisticOptions& options) {
  const auto p = design.cols();
  RegressionFit fit;
  fit.ridge = ridge;
  fit.intercept = options.intercept;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  auto objective = [&](const Eigen::VectorXd& b) {
    return log_likelihood_of_eta(design * b, y) - 0.5 * ridge * b.squaredNorm();
  };
  double current = objective(beta);
  for (int it = 1; it <= options.max_iterations; ++it) {
    fit.iterations = it;
    const Eigen::VectorXd mu = sigmoid(design * beta);
    const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
    Eigen::VectorXd grad = design.transpose() * (y - mu) - ridge * beta;
    Eigen::MatrixXd info = design.transpose() * w.asDiagonal() * design;
    info.diagonal().array() += ridge;
    Eigen::VectorXd step = info.ldlt().solve(grad);
    if (!step.allFinite()) break;
    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double value = objective(candidate);
    for (int halving = 0; halving < 30 && !(value >= current - 1e-12 * std::abs(current)); ++halving) {
      scale *= 0.5;
      candidate = beta + scale * step;
      value = objective(candidate);
    }
    const double change = (scale * step).cwiseAbs().maxCoeff();
    beta = candidate;
    current = value;
    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
    if (ridge == 0.0 && beta.cwiseAbs().maxCoeff() > kDivergenceBound) break;
  }
  const Eigen::VectorXd mu = sigmoid(design * beta);
  const Eigen::VectorXd w = mu.array() * (1.0 - mu.array());
  Eigen::MatrixXd info = design.transpose() * w.asDiagonal() * design;
  info.diagonal().array() += ridge;
  const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.coefficients = beta;
  fit.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.z_values = beta.cwiseQuotient(fit.std_errors);
  fit.log_likelihood = log_likelihood_of_eta(design * beta, y);
  return fit;
}

}  // namespace

Eigen::VectorXd RegressionFit::p_values() const {
  return z_values.unaryExpr([](double z) { return normal_two_tailed(z); });
}

Eigen::VectorXd RegressionFit::linear_predictor(const Eigen::MatrixXd& x) const {
  if (intercept) {
    return (x * coefficients.tail(coefficients.size() - 1)).array() + coefficients(0);
  }
  return x * coefficients;
}

std::vector<int> RegressionFit::predict(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd eta = linear_predictor(x);
  std::vector<int> out(static_cast<std::size_t>(eta.size()));
  for (Eigen::Index i = 0; i < eta.size(); ++i) out[static_cast<std::size_t>(i)] = eta(i) > 0.0 ? 1 : 0;
  return out;
}

double logistic_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                               bool intercept) {
  return log_likelihood_of_eta(with_intercept(x, intercept) * beta, y);
}

RegressionFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LogisticOptions& options) {
  if (x.rows() != y.size()) throw std::invalid_argument("label count does not match design rows");
  if (options.ridge < 0.0) throw std::invalid_argument("ridge must be non-negative");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw std::invalid_argument("labels must be 0 or 1");
  }
  const Eigen::MatrixXd design = with_intercept(x, options.intercept);
  auto names = coefficient_names(options, x.cols());
  if (options.ridge == 0.0) check_rank(design, names);
  RegressionFit fit = irls(design, y, options.ridge, options);
  if (options.ridge == 0.0 && (!fit.converged || fit.coefficients.cwiseAbs().maxCoeff() > kDivergenceBound)) {
    fit = irls(design, y, kSeparationRidge, options);
    fit.separation = true;
  }
  fit.names = std::move(names);
  return fit;
}

RegressionFit fit_logistic_robust(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LogisticOptions& options) {
  try {
    return fit_logistic(x, y, options);
  } catch (const RankDeficientError& e) {
    LogisticOptions ridged = options;
    ridged.ridge = kSeparationRidge;
    auto fit = fit_logistic(x, y, ridged);
    fit.collinear = e.columns();
    return fit;
  }
}

CvReport crossval_accuracy(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const CvOptions& options) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (options.folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (n < static_cast<std::size_t>(options.folds)) throw std::invalid_argument("fewer examples than folds");
  if (static_cast<std::size_t>(y.size()) != n) throw std::invalid_argument("label count does not match design rows");

  CvReport report;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(options.seed);
  rng.shuffle(std::span<std::size_t>(perm));
  report.fold_of.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) report.fold_of[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(options.folds));

  const auto folds = static_cast<std::size_t>(options.folds);
  report.fold_accuracies.assign(folds, 0.0);
  report.predictions.assign(n, 0);
  std::vector<char> flagged(folds, 0);

  parallel_for(folds, options.jobs, [&](std::size_t f) {
    std::vector<Eigen::Index> train, test;
    for (std::size_t i = 0; i < n; ++i) {
      (static_cast<std::size_t>(report.fold_of[i]) == f ? test : train).push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXd x_train = x(train, Eigen::all);
    Eigen::MatrixXd x_test = x(test, Eigen::all);
    Eigen::VectorXd y_train = y(train);
    if (options.fold_zscore) {
      auto z = zscore(x_train);
      x_test = zscore(x_test, z.stats).matrix;
      x_train = std::move(z.matrix);
    }
    LogisticOptions lo;
    const double positives = y_train.sum();
    if (positives == 0.0 || positives == static_cast<double>(y_train.size())) {
      lo.ridge = kSeparationRidge;
      flagged[f] = 1;
    }
    const auto fit = fit_logistic_robust(x_train, y_train, lo);
    if (fit.separation || !fit.collinear.empty()) flagged[f] = 1;
    const auto pred = fit.predict(x_test);
    std::size_t correct = 0;
    for (std::size_t j = 0; j < test.size(); ++j) {
      const auto row = static_cast<std::size_t>(test[j]);
      report.predictions[row] = pred[j];
      if (pred[j] == static_cast<int>(y(test[j]))) ++correct;
    }
    report.fold_accuracies[f] = static_cast<double>(correct) / static_cast<double>(test.size());
  });

  for (std::size_t f = 0; f < folds; ++f) {
    if (flagged[f]) report.flagged_folds.push_back(static_cast<int>(f));
  }
  report.mean_accuracy =
      std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) / static_cast<double>(folds);
  return report;
}

McNemarResult mcnemar_from_counts(long n01, long n10) {
  if (n01 < 0 || n10 < 0) throw std::invalid_argument("discordant counts must be non-negative");
  McNemarResult r;
  r.n01 = n01;
  r.n10 = n10;
  const long n = n01 + n10;
  if (n == 0) return r;
  const double corrected = std::max(0.0, std::abs(static_cast<double>(n01 - n10)) - 1.0);
  r.statistic = corrected * corrected / static_cast<double>(n);
  if (n < kMcNemarExactBelow) {
    r.exact = true;
    const long m = std::min(n01, n10);
    long double coef = 1.0L;  // C(n, i)
    long double tail = 0.0L;
    for (long i = 0; i <= m; ++i) {
      tail += coef;
      coef = coef * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    }
    r.p_two_tailed = static_cast<double>(std::min(1.0L, 2.0L * tail / std::ldexp(1.0L, static_cast<int>(n))));
  } else {
    r.exact = false;
    r.p_two_tailed = std::erfc(std::sqrt(r.statistic / 2.0));
  }
  return r;
}

McNemarResult mcnemar(const std::vector<int>& pred_a, const std::vector<int>& pred_b, const std::vector<int>& truth) {
  if (pred_a.size() != truth.size() || pred_b.size() != truth.size()) {
    throw std::invalid_argument("prediction vectors must match the truth length");
  }
  long n01 = 0, n10 = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a = pred_a[i] == truth[i];
    const bool b = pred_b[i] == truth[i];
    if (a && !b) ++n01;
    if (!a && b) ++n10;
  }
  return mcnemar_from_counts(n01, n10);
}

RfecvResult rfecv(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const CvOptions& options) {
  if (x.cols() < 2) throw std::invalid_argument("RFECV needs at least 2 candidate features");
  RfecvResult result;
  std::vector<Eigen::Index> current(static_cast<std::size_t>(x.cols()));
  std::iota(current.begin(), current.end(), 0);
  for (;;) {
    const Eigen::MatrixXd sub = x(Eigen::all, current);
    const auto cv = crossval_accuracy(sub, y, options);
    result.curve.push_back({current, cv.mean_accuracy});
    if (current.size() == 1) break;
    const auto z = zscore(sub);
    if (!z.dropped.empty()) {
      // A constant column carries no information; eliminate it first.
      const auto victim = current[static_cast<std::size_t>(z.dropped.front())];
      result.elimination.push_back(victim);
      current.erase(std::find(current.begin(), current.end(), victim));
      continue;
    }
    const auto fit = fit_logistic_robust(z.matrix, y);
    const Eigen::VectorXd slopes = fit.coefficients.tail(fit.coefficients.size() - 1).cwiseAbs();
    Eigen::Index weakest = 0;
    slopes.minCoeff(&weakest);
    result.elimination.push_back(current[static_cast<std::size_t>(weakest)]);
    current.erase(current.begin() + weakest);
  }
  double best = 0.0;
  for (const auto& step : result.curve) best = std::max(best, step.mean_accuracy);
  for (const auto& step : result.curve) {
    if (step.mean_accuracy >= best - 1e-9) result.selected = step.features;
  }
  return result;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson needs equal-length vectors");
  if (x.size() < 2) throw std::invalid_argument("pearson needs at least 2 observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedResult("pearson correlation undefined for zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double normal_two_tailed(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace deplen
