#include "nlm/sampling.hpp"

#include "nlm/errors.hpp"

namespace nlm {

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t binomial_draw(std::mt19937_64& rng, std::uint64_t trials, double p) {
  std::uint64_t successes = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (uniform_unit(rng) < p) {
      ++successes;
    }
  }
  return successes;
}

std::vector<std::uint64_t> multinomial_draw(std::mt19937_64& rng, std::uint64_t trials,
                                            std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) {
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ProbabilityNotNormalizedError("cell probabilities do not sum to 1");
  }

  std::vector<double> cumulative(probs.size());
  double running = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    running += probs[i];
    cumulative[i] = running;
  }
  cumulative.back() = 1.0;  // guard against accumulated rounding

  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t shot = 0; shot < trials; ++shot) {
    const double u = uniform_unit(rng);
    std::size_t cell = 0;
    while (cell + 1 < cumulative.size() && u >= cumulative[cell]) {
      ++cell;
    }
    ++counts[cell];
  }
  return counts;
}

}  // namespace nlm
