#pragma once

#include <cstdint>
#include <vector>

#include "loopzeta/graph_loops.hpp"
#include "loopzeta/random.hpp"

namespace loopzeta {

/// Rooted loop x_1, ..., x_k (the closing step x_k -> x_1 is implicit).
using RootedLoop = std::vector<int>;

struct LoopSoupSample {
  std::vector<RootedLoop> loops;
  double intensity = 0.0;
  int truncation_length = 0;
  /// Set when the discarded mass beyond truncation_length exceeds 1e-6 of the total.
  bool tail_warning = false;
};

/// Poisson sampler for the intensity-c random-walk loop soup on a killed graph,
/// truncated at loops of length max_len. Precomputes matrix powers once;
/// sample() is const and takes its randomness from the caller.
class LoopSoupSampler {
 public:
  LoopSoupSampler(const Graph& g, double intensity, int max_len);

  LoopSoupSample sample(RandomStream& rng) const;

  /// c * tr(P^k)/k for k = 1..max_len.
  const std::vector<double>& length_intensities() const { return length_intensities_; }
  /// sum_k tr(P^k)/k over k <= max_len (the truncated loop mass).
  double truncated_mass() const { return truncated_mass_; }
  bool tail_warning() const { return tail_warning_; }

 private:
  std::vector<int> interior_;
  std::vector<Matrix> powers_;  // powers_[m] = P^m, m = 0..max_len
  std::vector<double> length_intensities_;
  double intensity_;
  int max_len_;
  double truncated_mass_ = 0.0;
  bool tail_warning_ = false;
};

LoopSoupSample sample_loop_soup(const Graph& g, double intensity, int max_len, std::uint64_t seed);

/// Lexicographically least cyclic rotation: the canonical representative of
/// the unrooted loop.
RootedLoop canonical_rotation(const RootedLoop& loop);

}  // namespace loopzeta
