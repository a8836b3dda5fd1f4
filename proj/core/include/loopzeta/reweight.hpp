#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "loopzeta/gff_field.hpp"
#include "loopzeta/parallel.hpp"
#include "loopzeta/stats.hpp"
#include "loopzeta/subdivision.hpp"

namespace loopzeta {

/// Minimal-energy field with the square averages of the input on every
/// partition square.
struct ProjectionResult {
  GridField projected_field;
  std::vector<double> square_means;  // h_S per partition square
  double coefficient_energy = 0.0;   // sum_S x_S^2 = (2 pi)^-1-energy of the projection / Q^2
  double solver_residual = 0.0;      // max_S |mean_S(projection) - h_S|
};

/// Interior-vertex coefficients w_S with h_S = <w_S, h> (cells average their
/// four corners). Row-major over (2^k - 1)^2.
std::vector<double> average_weights(int level, const DyadicSquare& square);

/// Covariance of the square averages of a sampled field,
/// normalization() * w_S^T L^-1 w_T, via sine-transform solves.
Matrix average_covariance(int level, std::span<const DyadicSquare> squares);

/// Throws NumericalError when the constraint system is singular.
ProjectionResult project_onto_partition(const GridField& field, const DyadicPartition& partition, double Q);

struct WeightReport {
  double c = 0.0;
  double c_prime = 0.0;
  double c_new = 0.0;
  double Q = 0.0;
  double Q_new = 0.0;
  double log_weight = 0.0;
};

/// log weight (c'/12) sum x_S^2.
double det_weight(double coefficient_energy, double c_prime);

WeightReport weight_report(double c, double c_prime, double coefficient_energy);

/// Log density of x under the law with background charge Q: independent
/// N(0, Q^-2) coordinates.
double log_coefficient_density(double Q, std::span<const double> x);

/// log[w(x) nu_c(x)] - log nu_{c + c'}(x); independent of x.
double density_ratio_check(double c, double c_prime, std::span<const double> x);

/// C = (1/4) log n - (3/4) log Vol with Vol the discrete e^{2 h / Q}-area.
double normalization_constant(const GridField& field, double Q, std::size_t square_count);

struct ReweightConfig {
  int grid_size = 64;
  double epsilon = 0.0;  // <= 0: calibrate to target_mean_count
  double c = 0.0;
  double c_prime = -12.5;
  std::size_t samples = 10000;
  std::uint64_t seed = 11;
  double target_mean_count = 16.0;
  std::size_t calibration_samples = 400;
};

struct ReweightSample {
  int square_count = 0;
  std::vector<double> level_counts;
  std::uint64_t partition_hash = 0;
  double coefficient_energy = 0.0;  // weighted protocol only
  double log_weight = 0.0;          // weighted protocol only
  double normalization_constant = 0.0;
};

struct ReweightStats {
  ReweightConfig config;
  double epsilon = 0.0;
  double Q = 0.0;
  double Q_new = 0.0;
  std::vector<ReweightSample> direct;
  std::vector<ReweightSample> weighted;
  std::vector<double> weights;  // exp(log_weight - max), one per weighted sample
  ChiSquareTest count_test;
  ChiSquareTest level_test;
  int modal_count = 0;
  ChiSquareTest slice_test;
  double ess = 0.0;
  double slice_ess = 0.0;
  double mean_normalization_constant = 0.0;
  bool flagged = false;  // an effective sample size below 50
};

/// Epsilon whose mean square count under the charge-c law is close to
/// `target` (bisection in log epsilon over a fixed calibration sample).
double calibrate_epsilon(int grid_size, double c, double target, std::size_t samples, std::uint64_t seed,
                         const ParallelFor& parallel = serial_for);

/// Direct sampling at c + c' against reweighted sampling at c with weight
/// exp((c'/12) sum x^2) (Q_new / Q)^n. Requires c, c + c' <= 1 and
/// samples >= 1000.
ReweightStats reweighting_experiment(const ReweightConfig& config, const ParallelFor& parallel = serial_for);

}  // namespace loopzeta
