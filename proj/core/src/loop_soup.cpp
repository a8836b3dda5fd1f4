#include "loopzeta/loop_soup.hpp"

#include <algorithm>

#include "loopzeta/error.hpp"
#include "loopzeta/stats.hpp"

namespace loopzeta {

LoopSoupSampler::LoopSoupSampler(const Graph& g, double intensity, int max_len)
    : interior_(g.interior()), intensity_(intensity), max_len_(max_len) {
  if (!(intensity > 0.0)) throw InvalidArgument("loop soup: intensity must be positive");
  if (max_len < 1) throw InvalidArgument("loop soup: max_len must be >= 1");
  if (!g.is_killed()) throw InvalidArgument("loop soup: graph needs a boundary");
  const Matrix p = transition_matrix(g);
  const double exact = loop_mass_exact(g);

  powers_.reserve(static_cast<std::size_t>(max_len) + 1);
  powers_.push_back(Matrix::Identity(p.rows(), p.cols()));
  CompensatedSum mass;
  for (int k = 1; k <= max_len; ++k) {
    powers_.push_back(powers_.back() * p);
    const double term = powers_.back().trace() / k;
    mass.add(term);
    length_intensities_.push_back(intensity * term);
  }
  truncated_mass_ = mass.value();
  tail_warning_ = (exact - truncated_mass_) > 1e-6 * exact;
}

LoopSoupSample LoopSoupSampler::sample(RandomStream& rng) const {
  LoopSoupSample out;
  out.intensity = intensity_;
  out.truncation_length = max_len_;
  out.tail_warning = tail_warning_;
  const auto n = powers_.front().rows();
  std::vector<double> weights(static_cast<std::size_t>(n));

  for (int k = 1; k <= max_len_; ++k) {
    const std::uint64_t count = rng.poisson(length_intensities_[static_cast<std::size_t>(k - 1)]);
    const Matrix& pk = powers_[static_cast<std::size_t>(k)];
    const Matrix& p = powers_[1];
    for (std::uint64_t c = 0; c < count; ++c) {
      for (Eigen::Index x = 0; x < n; ++x) weights[static_cast<std::size_t>(x)] = pk(x, x);
      const auto root = static_cast<Eigen::Index>(rng.categorical(weights));
      RootedLoop loop;
      loop.reserve(static_cast<std::size_t>(k));
      Eigen::Index y = root;
      for (int j = 0; j < k; ++j) {
        loop.push_back(interior_[static_cast<std::size_t>(y)]);
        if (j == k - 1) break;
        // Bridge step: z with weight P(y,z) P^{k-1-j}(z, root).
        const Matrix& rest = powers_[static_cast<std::size_t>(k - 1 - j)];
        for (Eigen::Index z = 0; z < n; ++z) weights[static_cast<std::size_t>(z)] = p(y, z) * rest(z, root);
        y = static_cast<Eigen::Index>(rng.categorical(weights));
      }
      out.loops.push_back(std::move(loop));
    }
  }
  return out;
}

LoopSoupSample sample_loop_soup(const Graph& g, double intensity, int max_len, std::uint64_t seed) {
  const LoopSoupSampler sampler(g, intensity, max_len);
  RandomStream rng(seed, 0);
  return sampler.sample(rng);
}

RootedLoop canonical_rotation(const RootedLoop& loop) {
  RootedLoop best = loop;
  RootedLoop rotated = loop;
  for (std::size_t i = 1; i < loop.size(); ++i) {
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    if (rotated < best) best = rotated;
  }
  return best;
}

}  // namespace loopzeta
