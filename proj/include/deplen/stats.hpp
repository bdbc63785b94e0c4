#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace deplen {

/// The design matrix (with intercept) is not of full column rank.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& what, std::vector<std::string> columns)
      : std::runtime_error(what), columns_(std::move(columns)) {}
  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
};

/// A statistic is undefined for the given input (e.g. zero variance).
class UndefinedResult : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kSeparationRidge = 1e-6;

struct LogisticOptions {
  double ridge = 0.0;
  int max_iterations = 100;
  double tolerance = 1e-8;  // on max |coefficient change|
  bool intercept = true;
  /// Names of the columns of X, used in reports and rank errors.
  std::vector<std::string> names;
};

struct RegressionFit {
  Eigen::VectorXd coefficients;  // intercept first when present
  Eigen::VectorXd std_errors;
  Eigen::VectorXd z_values;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  double ridge = 0.0;
  /// Set when divergence forced the ridge fallback.
  bool separation = false;
  bool intercept = true;
  std::vector<std::string> names;  // one per coefficient
  /// Columns reported collinear when fit_logistic_robust fell back to ridge.
  std::vector<std::string> collinear;

  [[nodiscard]] Eigen::VectorXd p_values() const;
  /// Linear predictor for rows of X (no intercept column).
  [[nodiscard]] Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& x) const;
  /// 1 iff fitted probability > 0.5.
  [[nodiscard]] std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// Maximum-likelihood logistic regression by iteratively reweighted least
/// squares (Newton-Raphson with step halving). Standard errors come from the
/// inverse of the information matrix at the solution. If the coefficients
/// diverge and no ridge was requested, the fit is redone with
/// kSeparationRidge and `separation` is set. Throws RankDeficientError
/// naming the collinear columns when ridge is 0 and [1, X] lacks full rank.
RegressionFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LogisticOptions& options = {});

/// fit_logistic, but a rank-deficient design is refit with kSeparationRidge
/// (which fixes the coefficients along the null space) instead of throwing.
RegressionFit fit_logistic_robust(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  const LogisticOptions& options = {});

/// Log-likelihood of a logistic model with `beta` (intercept first if
/// `intercept`). Exposed for numerical checks.
double logistic_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                               bool intercept = true);

struct CvOptions {
  int folds = 10;
  std::uint64_t seed = 0;
  /// Standardize with statistics of each training fold. When false the
  /// caller is expected to have standardized X globally.
  bool fold_zscore = true;
  unsigned jobs = 1;
};

struct CvReport {
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  std::vector<int> predictions;  // per example, from the fold where it was held out
  std::vector<int> fold_of;      // test fold of each example
  std::vector<int> flagged_folds;
};

/// k-fold cross-validated accuracy of logistic regression.
CvReport crossval_accuracy(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const CvOptions& options = {});

struct McNemarResult {
  double statistic = 0.0;
  double p_two_tailed = 1.0;
  long n01 = 0;  // a correct, b wrong
  long n10 = 0;  // a wrong, b correct
  bool exact = true;
};

inline constexpr long kMcNemarExactBelow = 25;

/// Exact binomial test when n01 + n10 < 25, otherwise chi-square with
/// continuity correction.
McNemarResult mcnemar(const std::vector<int>& pred_a, const std::vector<int>& pred_b, const std::vector<int>& truth);
McNemarResult mcnemar_from_counts(long n01, long n10);

struct RfecvStep {
  std::vector<Eigen::Index> features;
  double mean_accuracy = 0.0;
};

struct RfecvResult {
  std::vector<Eigen::Index> selected;
  std::vector<RfecvStep> curve;           // from all features down to one
  std::vector<Eigen::Index> elimination;  // in the order dropped
};

/// Recursive feature elimination, step 1: drop the feature with the smallest
/// |standardized coefficient| from a full-data fit, scoring each feature set
/// by cross-validated accuracy. Returns the smallest set within 1e-9 of the
/// best accuracy.
RfecvResult rfecv(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const CvOptions& options = {});

/// Sample Pearson correlation.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Two-sided normal tail probability for a z statistic.
double normal_two_tailed(double z);

}  // namespace deplen
