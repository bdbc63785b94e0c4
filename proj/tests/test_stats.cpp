#include <gtest/gtest.h>

#include <random>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "deplen/stats.hpp"
#include "fixtures.hpp"

namespace deplen {
namespace {

struct Sample {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

// Draws y ~ Bernoulli(logistic(b0 + X b)) with standard-normal X.
Sample logistic_sample(std::mt19937_64& gen, Eigen::Index n, const Eigen::VectorXd& beta) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Sample s{Eigen::MatrixXd(n, beta.size() - 1), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    double eta = beta(0);
    for (Eigen::Index j = 0; j < s.x.cols(); ++j) {
      s.x(i, j) = normal(gen);
      eta += beta(j + 1) * s.x(i, j);
    }
    s.y(i) = unif(gen) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  return s;
}

Sample null_sample(std::mt19937_64& gen, Eigen::Index n, Eigen::Index p) {
  std::normal_distribution<double> normal;
  Sample s{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < s.x.size(); ++i) s.x.data()[i] = normal(gen);
  for (Eigen::Index i = 0; i < n; ++i) s.y(i) = static_cast<double>(gen() & 1U);
  return s;
}

// Standard errors from a centered finite-difference Hessian of the
// log-likelihood.
Eigen::VectorXd finite_difference_std_errors(const Sample& s, const Eigen::VectorXd& beta, double h) {
  const auto p = beta.size();
  auto ll = [&](const Eigen::VectorXd& b) { return logistic_log_likelihood(s.x, s.y, b); };
  Eigen::MatrixXd hess(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      Eigen::VectorXd pp = beta, pm = beta, mp = beta, mm = beta;
      pp(i) += h, pp(j) += h;
      pm(i) += h, pm(j) -= h;
      mp(i) -= h, mp(j) += h;
      mm(i) -= h, mm(j) -= h;
      hess(i, j) = (ll(pp) - ll(pm) - ll(mp) + ll(mm)) / (4 * h * h);
    }
  }
  const Eigen::MatrixXd cov = (-hess).inverse();
  return cov.diagonal().cwiseSqrt();
}

TEST(FitLogistic, RecoversKnownCoefficients) {
  std::mt19937_64 gen(101);
  const Eigen::Vector3d beta(0.5, -1.0, 2.0);
  const auto s = logistic_sample(gen, 50000, beta);
  const auto fit = fit_logistic(s.x, s.y);
  ASSERT_TRUE(fit.converged);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(fit.coefficients(i), beta(i), 0.05);
  EXPECT_EQ(fit.names, (std::vector<std::string>{"(Intercept)", "x1", "x2"}));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(fit.z_values(i), fit.coefficients(i) / fit.std_errors(i));
}

TEST(FitLogistic, StdErrorsMatchFiniteDifferenceHessian) {
  std::mt19937_64 gen(102);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  for (int run = 0; run < 20; ++run) {
    const Eigen::Vector3d beta(coef(gen), coef(gen), coef(gen));
    const auto s = logistic_sample(gen, 400, beta);
    const auto fit = fit_logistic(s.x, s.y);
    ASSERT_TRUE(fit.converged);
    const auto fd = finite_difference_std_errors(s, fit.coefficients, 1e-4);
    for (Eigen::Index i = 0; i < 3; ++i) {
      ASSERT_NEAR(fit.std_errors(i), fd(i), 1e-5 * fd(i)) << "run " << run << " coefficient " << i;
    }
  }
}

TEST(FitLogistic, NullSlopesRarelySignificant) {
  std::mt19937_64 gen(103);
  int quiet = 0;
  for (int run = 0; run < 100; ++run) {
    const auto s = null_sample(gen, 500, 2);
    const auto fit = fit_logistic(s.x, s.y);
    quiet += std::abs(fit.z_values(1)) < 3 && std::abs(fit.z_values(2)) < 3 ? 1 : 0;
  }
  EXPECT_GE(quiet, 95);
}

TEST(FitLogistic, InterceptOnlyOnBalancedLabels) {
  Eigen::MatrixXd x(10, 0);
  Eigen::VectorXd y(10);
  y << 1, 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const auto fit = fit_logistic(x, y);
  ASSERT_EQ(fit.coefficients.size(), 1);
  EXPECT_NEAR(fit.coefficients(0), 0.0, 1e-12);
  EXPECT_NEAR(fit.std_errors(0), std::sqrt(1.0 / (10 * 0.25)), 1e-12);
}

TEST(FitLogistic, FittedProbabilitiesAverageToBaseRate) {
  std::mt19937_64 gen(104);
  const auto s = logistic_sample(gen, 2000, Eigen::Vector3d(-0.7, 0.4, 1.1));
  const auto fit = fit_logistic(s.x, s.y);
  const Eigen::VectorXd eta = fit.linear_predictor(s.x);
  const double mean_p = eta.unaryExpr([](double t) { return 1.0 / (1.0 + std::exp(-t)); }).mean();
  EXPECT_NEAR(mean_p, s.y.mean(), 1e-10);
}

TEST(FitLogistic, RescalingAColumnLeavesPredictionsUnchanged) {
  std::mt19937_64 gen(105);
  const auto s = logistic_sample(gen, 1000, Eigen::Vector3d(0.2, 1.0, -0.5));
  const auto base = fit_logistic(s.x, s.y);
  Eigen::MatrixXd scaled = s.x;
  scaled.col(1) *= 3.7;
  const auto refit = fit_logistic(scaled, s.y);
  EXPECT_EQ(base.predict(s.x), refit.predict(scaled));
  EXPECT_NEAR(refit.coefficients(2), base.coefficients(2) / 3.7, 1e-8);
}

TEST(FitLogistic, RankDeficiencyNamesColumns) {
  std::mt19937_64 gen(106);
  auto s = logistic_sample(gen, 100, Eigen::Vector3d(0, 1, 1));
  s.x.col(1) = 2.0 * s.x.col(0);
  LogisticOptions options;
  options.names = {"dl_last", "dl_twice"};
  try {
    fit_logistic(s.x, s.y, options);
    FAIL() << "expected RankDeficientError";
  } catch (const RankDeficientError& e) {
    ASSERT_EQ(e.columns().size(), 1u);
    EXPECT_TRUE(e.columns()[0] == "dl_last" || e.columns()[0] == "dl_twice");
    EXPECT_NE(std::string(e.what()).find(e.columns()[0]), std::string::npos);
  }
  const auto robust = fit_logistic_robust(s.x, s.y, options);
  EXPECT_EQ(robust.collinear.size(), 1u);
  EXPECT_GT(robust.ridge, 0.0);
}

TEST(FitLogistic, SeparationFallsBackToRidge) {
  Eigen::MatrixXd x(8, 1);
  x << -4, -3, -2, -1, 1, 2, 3, 4;
  Eigen::VectorXd y(8);
  y << 0, 0, 0, 0, 1, 1, 1, 1;
  const auto fit = fit_logistic(x, y);
  EXPECT_TRUE(fit.separation);
  EXPECT_DOUBLE_EQ(fit.ridge, kSeparationRidge);
  EXPECT_TRUE(fit.coefficients.allFinite());
  EXPECT_GT(fit.coefficients(1), 0.0);
  EXPECT_EQ(fit.predict(x), (std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1}));
}

TEST(CrossVal, SeparableDataIsPerfect) {
  Eigen::MatrixXd x(200, 1);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) {
    x(i, 0) = i < 100 ? -1.0 - i * 0.01 : 1.0 + i * 0.01;
    y(i) = i < 100 ? 0 : 1;
  }
  const auto cv = crossval_accuracy(x, y, {10, 7});
  EXPECT_DOUBLE_EQ(cv.mean_accuracy, 1.0);
}

TEST(CrossVal, NullAccuracyIsChance) {
  std::mt19937_64 gen(107);
  const auto s = null_sample(gen, 10000, 3);
  const auto cv = crossval_accuracy(s.x, s.y, {10, 8});
  EXPECT_NEAR(cv.mean_accuracy, 0.5, 0.02);
}

TEST(CrossVal, FoldsPartitionTheData) {
  std::mt19937_64 gen(108);
  const auto s = null_sample(gen, 1003, 2);
  const auto cv = crossval_accuracy(s.x, s.y, {10, 9});
  ASSERT_EQ(cv.fold_of.size(), 1003u);
  ASSERT_EQ(cv.fold_accuracies.size(), 10u);
  std::vector<int> sizes(10, 0);
  for (int f : cv.fold_of) {
    ASSERT_GE(f, 0);
    ASSERT_LT(f, 10);
    ++sizes[static_cast<std::size_t>(f)];
  }
  EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
  double mean = 0;
  for (double a : cv.fold_accuracies) mean += a / 10.0;
  EXPECT_DOUBLE_EQ(cv.mean_accuracy, mean);
}

TEST(CrossVal, JobsDoNotChangeResults) {
  std::mt19937_64 gen(109);
  const auto s = logistic_sample(gen, 3000, Eigen::Vector3d(0, 0.5, -0.5));
  CvOptions one{10, 11, true, 1};
  CvOptions four{10, 11, true, 4};
  const auto a = crossval_accuracy(s.x, s.y, one);
  const auto b = crossval_accuracy(s.x, s.y, four);
  EXPECT_EQ(a.predictions, b.predictions);
  EXPECT_EQ(a.fold_accuracies, b.fold_accuracies);
}

TEST(CrossVal, SingleClassTrainingFoldIsFlagged) {
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  Eigen::VectorXd y(4);
  y << 1, 1, 1, 0;
  const auto cv = crossval_accuracy(x, y, {4, 0});
  EXPECT_FALSE(cv.flagged_folds.empty());
}

TEST(McNemar, Examples) {
  const auto none = mcnemar_from_counts(0, 0);
  EXPECT_DOUBLE_EQ(none.p_two_tailed, 1.0);
  EXPECT_DOUBLE_EQ(none.statistic, 0.0);

  const auto small = mcnemar_from_counts(10, 0);
  EXPECT_TRUE(small.exact);
  EXPECT_NEAR(small.p_two_tailed, 2.0 * std::pow(0.5, 10), 1e-15);

  const auto large = mcnemar_from_counts(100, 60);
  EXPECT_FALSE(large.exact);
  EXPECT_NEAR(large.statistic, 39.0 * 39.0 / 160.0, 1e-12);
  EXPECT_NEAR(large.p_two_tailed, 0.00205, 0.00001);
}

TEST(McNemar, ExactBranchMatchesBinomialTail) {
  for (long n = 1; n <= 24; ++n) {
    for (long a = 0; a <= n; ++a) {
      const auto r = mcnemar_from_counts(a, n - a);
      ASSERT_TRUE(r.exact);
      ASSERT_NEAR(r.p_two_tailed, testing::binomial_two_tailed(a, n - a), 1e-12) << a << "/" << n - a;
    }
  }
}

TEST(McNemar, ChiSquareBranchMatchesBoostCdf) {
  const boost::math::chi_squared chi1(1.0);
  for (long n = 25; n <= 400; n += 7) {
    for (long a = 0; a <= n; a += 3) {
      const auto r = mcnemar_from_counts(a, n - a);
      ASSERT_FALSE(r.exact);
      const double d = std::max(0.0, std::abs(static_cast<double>(2 * a - n)) - 1.0);
      const double stat = d * d / static_cast<double>(n);
      ASSERT_NEAR(r.p_two_tailed, boost::math::cdf(boost::math::complement(chi1, stat)), 1e-9);
    }
  }
}

TEST(McNemar, CountsFromPredictions) {
  const std::vector<int> truth{1, 1, 0, 0, 1};
  const std::vector<int> a{1, 1, 0, 1, 0};
  const std::vector<int> b{0, 1, 1, 1, 1};
  const auto r = mcnemar(a, b, truth);
  EXPECT_EQ(r.n01, 2);
  EXPECT_EQ(r.n10, 1);
  EXPECT_THROW(mcnemar(a, {1}, truth), std::invalid_argument);
}

TEST(Rfecv, KeepsTheInformativeFeature) {
  std::mt19937_64 gen(110);
  int kept = 0;
  for (int run = 0; run < 100; ++run) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(6);
    beta(1) = 1.5;
    const auto s = logistic_sample(gen, 400, beta);
    const auto r = rfecv(s.x, s.y, {10, static_cast<std::uint64_t>(run)});
    ASSERT_EQ(r.curve.size(), 5u);
    ASSERT_EQ(r.elimination.size(), 4u);
    kept += std::find(r.selected.begin(), r.selected.end(), 0) != r.selected.end() ? 1 : 0;
  }
  EXPECT_GE(kept, 95);
}

TEST(Rfecv, AllNoiseCurveIsFlatAtChance) {
  std::mt19937_64 gen(111);
  const auto s = null_sample(gen, 10000, 5);
  const auto r = rfecv(s.x, s.y, {10, 3});
  for (const auto& step : r.curve) EXPECT_NEAR(step.mean_accuracy, 0.5, 0.02);
}

TEST(Rfecv, ConstantColumnIsEliminatedFirst) {
  std::mt19937_64 gen(112);
  auto s = logistic_sample(gen, 300, Eigen::Vector3d(0, 1.0, 0.5));
  Eigen::MatrixXd x(300, 3);
  x << s.x.col(0), Eigen::VectorXd::Constant(300, 2.0), s.x.col(1);
  const auto r = rfecv(x, s.y, {10, 1});
  EXPECT_EQ(r.elimination.front(), 1);
}

TEST(Pearson, Cases) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  EXPECT_DOUBLE_EQ(pearson(x, x), 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, neg), -1.0);
  EXPECT_THROW(pearson(x, std::vector<double>(5, 1.0)), UndefinedResult);

  std::mt19937_64 gen(113);
  std::normal_distribution<double> normal;
  std::vector<double> a(10000), b(10000);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = normal(gen), b[i] = normal(gen);
  EXPECT_LT(std::abs(pearson(a, b)), 0.05);
}

}  // namespace
}  // namespace deplen
