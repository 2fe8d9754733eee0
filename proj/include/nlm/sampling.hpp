#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace nlm {

/// All stochastic output derives from std::mt19937_64 through this one
/// uniform: u = (next() >> 11) * 2^-53 in [0, 1). The raw engine output is
/// pinned by the standard, so identical seeds give identical samples on any
/// platform (std::*_distribution would not).
double uniform_unit(std::mt19937_64& rng);

std::uint64_t binomial_draw(std::mt19937_64& rng, std::uint64_t trials, double p);

/// One multinomial draw of `trials` events over `probs` (which must sum to 1
/// within 1e-9; ProbabilityNotNormalized otherwise).
std::vector<std::uint64_t> multinomial_draw(std::mt19937_64& rng, std::uint64_t trials,
                                            std::span<const double> probs);

}  // namespace nlm
