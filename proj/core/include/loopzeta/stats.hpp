#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace loopzeta {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * x (at least 3 points).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Upper tail P[X >= statistic] for X ~ chi-square(dof).
double chi_square_sf(double statistic, double dof);

/// Richardson extrapolation of values computed at steps h, h/r, h/r^2, ...
/// assuming an error expansion sum_k c_k h^{p0 + k*dp}. Uses every value given.
double richardson_extrapolate(std::span<const double> values, double ratio, double leading_power,
                              double power_step = 1.0);

struct ChiSquareTest {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Two-sample comparison of a categorical statistic: unweighted draws from one
/// law against importance-weighted draws from another. Categories holding less
/// than `min_expected` pooled expected counts are merged into a tail bin; the
/// statistic is d' (S_direct + S_weighted)^{-1} d over the free bins.
ChiSquareTest compare_categorical(std::span<const int> direct, std::span<const int> weighted,
                                  std::span<const double> weights, double min_expected = 20.0);

/// Two-sample comparison of mean vectors (rows are samples) with the same
/// weighting convention; Hotelling-type chi-square over coordinates with
/// non-degenerate variance.
ChiSquareTest compare_means(const std::vector<std::vector<double>>& direct,
                            const std::vector<std::vector<double>>& weighted,
                            std::span<const double> weights);

/// Kish effective sample size (sum w)^2 / sum w^2.
double effective_sample_size(std::span<const double> weights);

}  // namespace loopzeta
