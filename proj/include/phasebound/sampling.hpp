#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "phasebound/phase.hpp"

namespace phasebound {

/// Bounds for randomly generated phase data.
struct SamplingBounds {
  std::vector<int> primes{2, 3};
  int max_m = 4;
  int max_rank = 2;
  std::uint32_t max_points = 256;
  int max_generators = 4;
};

TruncatedRing sample_ring(std::mt19937_64& rng, const SamplingBounds& bounds = {});
AdditiveCharacter sample_character(const TruncatedRing& ring, std::mt19937_64& rng);
RingElement sample_element(const TruncatedRing& ring, std::mt19937_64& rng, int min_depth = 0);
/// Random gram/linear/constant form; every coefficient is scaled into rad^min_depth.
QuadraticPhase sample_phase(const FiniteModule& module, std::mt19937_64& rng, int min_depth = 0);
PhaseGenerator sample_generator(const FiniteModule& module, std::mt19937_64& rng);
PhaseData sample_block_phase(const FiniteModule& module, const AdditiveCharacter& character, std::mt19937_64& rng,
                             const SamplingBounds& bounds = {});
PhaseData sample_phase_data(std::mt19937_64& rng, const SamplingBounds& bounds = {});
/// Rank-2 phase over F_2[u]/(u^4) generated by x -> u·x1·x2 and the
/// translations e1, e2, u·e1, u·e2, with character weights `weights`.
PhaseData radical_example(std::vector<int> weights = {0, 1, 0, 0});

/// A random relabeling: one automorphism per block and shuffled generators.
PhaseData random_relabeling(const PhaseData& data, std::mt19937_64& rng);

}  // namespace phasebound
