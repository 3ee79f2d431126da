#include <gtest/gtest.h>

#include <random>

#include "phasebound/deformation.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/sampling.hpp"

using namespace phasebound;

TEST(Deformation, CountsOnReferencePhases) {
  const auto weak = enumerate_deformations(radical_example());
  EXPECT_EQ(weak.pattern_count, 4u);
  EXPECT_EQ(weak.raw_count, 4u);
  EXPECT_EQ(weak.bound, 9u);
  // Brute-force oracle: every subset of the two strata, one lift each over F_2.
  std::set<std::vector<bool>> patterns;
  for (const auto& d : weak.deformations) patterns.insert(d.activation);
  EXPECT_EQ(patterns.size(), 4u);

  const auto strong = enumerate_deformations(radical_example({0, 0, 0, 1}));
  ASSERT_EQ(strong.raw_count, 1u);
  EXPECT_EQ(strong.deformations[0].kind(), DeformationKind::trivial);

  const FiniteModule A(TruncatedRing(3, 2), 1);
  const auto zero = enumerate_deformations(PhaseData::zero_phase(A, AdditiveCharacter(A.ring(), {1, 0})));
  EXPECT_EQ(zero.raw_count, 1u);
}

TEST(Deformation, Trichotomy) {
  const auto set = enumerate_deformations(radical_example());
  std::map<DeformationKind, int> kinds;
  for (const auto& d : set.deformations) ++kinds[d.kind()];
  EXPECT_EQ(kinds[DeformationKind::trivial], 1);
  EXPECT_EQ(kinds[DeformationKind::boundary], 2);
  EXPECT_EQ(kinds[DeformationKind::combination], 1);
}

TEST(Deformation, ApplyKeepsIslandAndTouchesOnlyActivatedStrata) {
  const auto data = radical_example();
  const auto base = obstruction_strata(data);
  EXPECT_EQ(apply_deformation(data, deformation_from_pattern(data, "00")), data);
  const auto q = apply_deformation(data, deformation_from_pattern(data, "10"));
  EXPECT_EQ(island_phase(q), island_phase(data));
  const auto after = obstruction_strata(q);
  ASSERT_EQ(after.size(), 2u);
  EXPECT_NE(after[0], base[0]);
  EXPECT_EQ(after[1], base[1]);
  EXPECT_TRUE(after[0].activated());
  // Generator-by-generator identity on island members.
  const auto r = analyze(data, {.compute_signature = false, .run_detectors = false});
  const auto refs = data.generator_refs();
  for (std::size_t g = 0; g < refs.size(); ++g) {
    if (r.island.membership[g]) EXPECT_EQ(q.generator(refs[g]), data.generator(refs[g]));
  }
}

TEST(Deformation, Errors) {
  const auto data = radical_example();
  EXPECT_THROW(deformation_from_pattern(data, "1"), StructuralError);
  EXPECT_THROW(apply_deformation(data, deformation_from_pattern(data, "20")), StructuralError);
  const auto d = deformation_from_pattern(data, "10");
  EXPECT_THROW(apply_deformation(radical_example({0, 0, 0, 1}), d), StructuralError);
}

TEST(Deformation, RandomizedFiniteAndIslandPreserving) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const auto data = sample_phase_data(rng);
    const auto set = enumerate_deformations(data);
    ASSERT_LE(set.raw_count, set.bound);
    ASSERT_GE(set.raw_count, 1u);
    const auto island = island_phase(data);
    for (const auto& d : set.deformations) ASSERT_EQ(island_phase(apply_deformation(data, d)), island);
  }
}

TEST(Classification, IslandTriples) {
  const auto island = island_phase(radical_example());
  const auto triple = classify_island(island);
  EXPECT_EQ(triple.defect_rank, 2);
  EXPECT_EQ(triple.length, 3);
  EXPECT_THROW(classify_island(radical_example()), NotAnIslandError);

  const FiniteModule A(TruncatedRing(2, 4), 2);
  const auto zero = classify_island(PhaseData::zero_phase(A, AdditiveCharacter(A.ring(), {0, 1, 0, 0})));
  EXPECT_EQ(zero.defect_rank, 0);
  EXPECT_EQ(zero.length, 0);
  EXPECT_EQ(zero.signature.size, 1u);

  std::mt19937_64 rng(5);
  EXPECT_EQ(classify_island(random_relabeling(island, rng)), triple);
}

TEST(Moduli, ReferenceFamilies) {
  const std::vector<PhaseData> strong{radical_example({0, 0, 0, 1})};
  const auto g1 = moduli_groupoid(strong);
  EXPECT_EQ(g1.objects.size(), 1u);
  EXPECT_EQ(g1.class_count, 1u);

  const auto data = radical_example();
  std::vector<PhaseData> family;
  for (const auto& d : enumerate_deformations(data).deformations) family.push_back(apply_deformation(data, d));
  const auto g4 = moduli_groupoid(family);
  EXPECT_EQ(g4.objects.size(), 4u);
  EXPECT_LE(g4.class_count, 4u);
  for (const auto& m : g4.morphisms) {
    EXPECT_EQ(g4.objects[m.source].strata, g4.objects[m.target].strata);
  }
}

TEST(Moduli, RelabeledCopiesMerge) {
  std::mt19937_64 rng(9);
  const auto data = radical_example();
  const auto copy = random_relabeling(data, rng);
  const std::vector<PhaseData> family{data, copy};
  const auto g = moduli_groupoid(family);
  ASSERT_EQ(g.class_count, 1u);
  ASSERT_EQ(g.morphisms.size(), 1u);
  // Replay the witness: the stored matrix and bijection carry member 1 onto member 0.
  const auto& w = g.morphisms[0].witness;
  const ModuleAutomorphism alpha(data.block(0).module(), w.matrices[0]);
  const auto& src = family[g.morphisms[0].source].block(0).generators();
  const auto& dst = family[g.morphisms[0].target].block(0).generators();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto& t = dst[w.generator_map[0][i]];
    EXPECT_EQ(t.translation.code, alpha.apply(src[i].translation.code));
    EXPECT_EQ(t.phase, pullback(src[i].phase, alpha));
  }
}

TEST(Moduli, StableUnderDuplicates) {
  std::mt19937_64 rng(12);
  std::vector<PhaseData> family;
  for (int i = 0; i < 4; ++i) family.push_back(sample_phase_data(rng, {.primes = {2}, .max_m = 2, .max_rank = 2, .max_points = 16}));
  const auto base = moduli_groupoid(family).class_count;
  family.push_back(random_relabeling(family[1], rng));
  family.push_back(random_relabeling(family[3], rng));
  EXPECT_EQ(moduli_groupoid(family).class_count, base);
}

TEST(Moduli, SearchCaps) {
  const FiniteModule A(TruncatedRing(3, 3), 2);
  const auto z = PhaseData::zero_phase(A, AdditiveCharacter(A.ring(), {1, 0, 0}));
  EXPECT_THROW(find_relabeling(z, z), SizeCapError);
}
