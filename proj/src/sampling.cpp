#include "phasebound/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace phasebound {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

TruncatedRing sample_ring(std::mt19937_64& rng, const SamplingBounds& bounds) {
  for (;;) {
    const int p = bounds.primes[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(bounds.primes.size()) - 1))];
    const int m = uniform(rng, 1, bounds.max_m);
    std::uint32_t size = 1;
    for (int i = 0; i < m; ++i) size *= static_cast<std::uint32_t>(p);
    if (size <= bounds.max_points) return TruncatedRing(p, m);
  }
}

AdditiveCharacter sample_character(const TruncatedRing& ring, std::mt19937_64& rng) {
  std::vector<int> w(static_cast<std::size_t>(ring.m()), 0);
  // Bias towards characters blind to a tail of layers.
  const int cut = uniform(rng, 0, ring.m());
  for (int j = 0; j < cut; ++j) w[static_cast<std::size_t>(j)] = uniform(rng, 0, ring.p() - 1);
  if (cut > 0 && uniform(rng, 0, 1) == 1) w[static_cast<std::size_t>(cut - 1)] = uniform(rng, 1, ring.p() - 1);
  return AdditiveCharacter(ring, std::move(w));
}

RingElement sample_element(const TruncatedRing& ring, std::mt19937_64& rng, int min_depth) {
  std::vector<int> c(static_cast<std::size_t>(ring.m()), 0);
  for (int j = std::max(min_depth, 0); j < ring.m(); ++j) c[static_cast<std::size_t>(j)] = uniform(rng, 0, ring.p() - 1);
  return ring.from_coeffs(c);
}

QuadraticPhase sample_phase(const FiniteModule& module, std::mt19937_64& rng, int min_depth) {
  const auto& ring = module.ring();
  const auto n = static_cast<std::size_t>(module.rank());
  StructuredForm form;
  for (std::size_t i = 0; i < n * n; ++i) {
    form.gram.push_back(uniform(rng, 0, 2) == 0 ? ring.zero() : sample_element(ring, rng, min_depth));
  }
  for (std::size_t i = 0; i < n; ++i) {
    form.linear.push_back(uniform(rng, 0, 2) == 0 ? ring.zero() : sample_element(ring, rng, min_depth));
  }
  form.constant = uniform(rng, 0, 1) == 0 ? ring.zero() : sample_element(ring, rng, min_depth);
  return QuadraticPhase::from_form(module, std::move(form));
}

PhaseGenerator sample_generator(const FiniteModule& module, std::mt19937_64& rng) {
  const int kind = uniform(rng, 0, 2);
  ModuleElement a{0};
  if (kind != 1) a.code = std::uniform_int_distribution<std::uint32_t>(0, module.size() - 1)(rng);
  if (kind == 0) return {a, QuadraticPhase::zero(module)};
  return {a, sample_phase(module, rng, uniform(rng, 0, module.ring().m() - 1))};
}

PhaseData sample_block_phase(const FiniteModule& module, const AdditiveCharacter& character, std::mt19937_64& rng,
                             const SamplingBounds& bounds) {
  std::vector<PhaseGenerator> gens;
  const int count = uniform(rng, 1, bounds.max_generators);
  for (int i = 0; i < count; ++i) gens.push_back(sample_generator(module, rng));
  return PhaseData(module, character, std::move(gens));
}

PhaseData sample_phase_data(std::mt19937_64& rng, const SamplingBounds& bounds) {
  for (;;) {
    const auto ring = sample_ring(rng, bounds);
    const int rank = uniform(rng, 1, bounds.max_rank);
    std::uint64_t size = 1;
    for (int i = 0; i < rank; ++i) size *= ring.size();
    if (size > bounds.max_points) continue;
    const FiniteModule module(ring, rank);
    return sample_block_phase(module, sample_character(ring, rng), rng, bounds);
  }
}

PhaseData radical_example(std::vector<int> weights) {
  const TruncatedRing ring(2, 4);
  const FiniteModule module(ring, 2);
  StructuredForm form{{ring.zero(), ring.monomial(1), ring.zero(), ring.zero()}, {ring.zero(), ring.zero()}, ring.zero()};
  std::vector<PhaseGenerator> gens{{ModuleElement{0}, QuadraticPhase::from_form(module, std::move(form))}};
  const auto u = ring.monomial(1).code;
  for (const auto& t : {std::vector<std::uint32_t>{1, 0}, {0, 1}, {u, 0}, {0, u}}) {
    gens.push_back({module.make_codes(t), QuadraticPhase::zero(module)});
  }
  return PhaseData(module, AdditiveCharacter(ring, std::move(weights)), std::move(gens));
}

PhaseData random_relabeling(const PhaseData& data, std::mt19937_64& rng) {
  std::vector<ModuleAutomorphism> autos;
  std::vector<std::vector<std::size_t>> order;
  for (const auto& b : data.blocks()) {
    autos.push_back(ModuleAutomorphism::random(b.module(), rng));
    std::vector<std::size_t> o(b.generators().size());
    std::iota(o.begin(), o.end(), 0);
    std::shuffle(o.begin(), o.end(), rng);
    order.push_back(std::move(o));
  }
  return relabel(data, autos, order);
}

}  // namespace phasebound
