#include "loopzeta/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "loopzeta/error.hpp"

namespace loopzeta {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw InvalidArgument("fit_line: need at least three (x, y) pairs");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

double richardson_extrapolate(std::span<const double> values, double ratio, double leading_power,
                              double power_step) {
  if (values.empty()) throw InvalidArgument("richardson_extrapolate: no values");
  std::vector<double> table(values.begin(), values.end());
  double power = leading_power;
  for (std::size_t level = 1; level < values.size(); ++level) {
    const double factor = std::pow(ratio, power);
    for (std::size_t i = 0; i + level < values.size(); ++i) {
      table[i] = (factor * table[i + 1] - table[i]) / (factor - 1.0);
    }
    power += power_step;
  }
  return table[0];
}

double effective_sample_size(std::span<const double> weights) {
  double s1 = 0.0, s2 = 0.0;
  for (double w : weights) {
    s1 += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s1 * s1 / s2 : 0.0;
}

namespace {

ChiSquareTest quadratic_form_test(const Eigen::VectorXd& diff, const Eigen::MatrixXd& cov) {
  ChiSquareTest test;
  if (diff.size() == 0) return test;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() != Eigen::Success) throw NumericalError("chi-square: covariance factorisation failed");
  test.statistic = diff.dot(ldlt.solve(diff));
  test.dof = static_cast<int>(diff.size());
  test.p_value = chi_square_sf(test.statistic, test.dof);
  return test;
}

// Mean vector and covariance of the mean estimator; for weighted samples the
// self-normalised (delta-method) covariance.
void mean_and_cov(const std::vector<Eigen::VectorXd>& rows, std::span<const double> weights,
                  Eigen::VectorXd& mean, Eigen::MatrixXd& cov) {
  const Eigen::Index dim = rows.front().size();
  mean = Eigen::VectorXd::Zero(dim);
  cov = Eigen::MatrixXd::Zero(dim, dim);
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    mean += w * rows[i];
    total += w;
  }
  mean /= total;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    const Eigen::VectorXd d = rows[i] - mean;
    cov += (w * w) * d * d.transpose();
  }
  cov /= total * total;
  if (weights.empty()) {
    // Unbiased factor n/(n-1) for the plain sample mean.
    const double n = static_cast<double>(rows.size());
    if (n > 1) cov *= n / (n - 1.0);
  }
}

}  // namespace

ChiSquareTest compare_categorical(std::span<const int> direct, std::span<const int> weighted,
                                  std::span<const double> weights, double min_expected) {
  if (weighted.size() != weights.size()) {
    throw InvalidArgument("compare_categorical: one weight per weighted sample required");
  }
  if (direct.empty() || weighted.empty()) throw InvalidArgument("compare_categorical: empty sample");
  std::map<int, double> pooled;
  for (int c : direct) pooled[c] += 1.0;
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double wscale = static_cast<double>(weighted.size()) / wsum;
  for (std::size_t i = 0; i < weighted.size(); ++i) pooled[weighted[i]] += weights[i] * wscale;

  // Merge sparse categories (in category order) into neighbouring bins.
  std::map<int, int> bin_of;
  int bin = 0;
  double acc = 0.0;
  for (const auto& [category, count] : pooled) {
    bin_of[category] = bin;
    acc += count;
    if (acc >= min_expected) {
      ++bin;
      acc = 0.0;
    }
  }
  int bins = acc > 0.0 ? bin + 1 : bin;
  if (acc > 0.0 && acc < min_expected && bins > 1) {
    // Fold the sparse final bin into its predecessor.
    for (auto& [category, b] : bin_of) {
      if (b == bins - 1) b = bins - 2;
    }
    --bins;
  }
  if (bins < 2) return {};

  auto one_hot = [&](int category) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(bins - 1);
    const int b = bin_of.at(category);
    if (b < bins - 1) v[b] = 1.0;
    return v;
  };
  std::vector<Eigen::VectorXd> rows_direct, rows_weighted;
  rows_direct.reserve(direct.size());
  rows_weighted.reserve(weighted.size());
  for (int c : direct) rows_direct.push_back(one_hot(c));
  for (int c : weighted) rows_weighted.push_back(one_hot(c));
  Eigen::VectorXd m1, m2;
  Eigen::MatrixXd c1, c2;
  mean_and_cov(rows_direct, {}, m1, c1);
  mean_and_cov(rows_weighted, weights, m2, c2);
  return quadratic_form_test(m1 - m2, c1 + c2);
}

ChiSquareTest compare_means(const std::vector<std::vector<double>>& direct,
                            const std::vector<std::vector<double>>& weighted,
                            std::span<const double> weights) {
  if (direct.empty() || weighted.empty()) throw InvalidArgument("compare_means: empty sample");
  if (weighted.size() != weights.size()) {
    throw InvalidArgument("compare_means: one weight per weighted sample required");
  }
  std::size_t dim = 0;
  for (const auto& r : direct) dim = std::max(dim, r.size());
  for (const auto& r : weighted) dim = std::max(dim, r.size());
  auto to_rows = [dim](const std::vector<std::vector<double>>& src) {
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(src.size());
    for (const auto& r : src) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (std::size_t k = 0; k < r.size(); ++k) v[static_cast<Eigen::Index>(k)] = r[k];
      rows.push_back(std::move(v));
    }
    return rows;
  };
  Eigen::VectorXd m1, m2;
  Eigen::MatrixXd c1, c2;
  mean_and_cov(to_rows(direct), {}, m1, c1);
  mean_and_cov(to_rows(weighted), weights, m2, c2);
  const Eigen::MatrixXd cov = c1 + c2;

  // Keep coordinates whose variance is resolvable; drop exact linear
  // dependencies by greedy Gram–Schmidt on the covariance.
  std::vector<Eigen::Index> keep;
  const double scale = cov.diagonal().maxCoeff();
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    if (cov(i, i) <= 1e-12 * scale) continue;
    std::vector<Eigen::Index> trial = keep;
    trial.push_back(i);
    Eigen::MatrixXd sub(trial.size(), trial.size());
    for (std::size_t a = 0; a < trial.size(); ++a)
      for (std::size_t b = 0; b < trial.size(); ++b) sub(a, b) = cov(trial[a], trial[b]);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub);
    if (eig.eigenvalues().minCoeff() > 1e-10 * eig.eigenvalues().maxCoeff()) keep = trial;
  }
  Eigen::VectorXd d(keep.size());
  Eigen::MatrixXd sub(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    d[a] = m1[keep[a]] - m2[keep[a]];
    for (std::size_t b = 0; b < keep.size(); ++b) sub(a, b) = cov(keep[a], keep[b]);
  }
  return quadratic_form_test(d, sub);
}

}  // namespace loopzeta
