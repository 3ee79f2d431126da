#include <gtest/gtest.h>

#include <random>

#include "phasebound/operators.hpp"
#include "phasebound/sampling.hpp"

using namespace phasebound;

namespace {

// Image of the basis function e_x as (point, exponent of ζ).
std::pair<std::uint32_t, int> on_basis(const MonomialOperator& X, std::pair<std::uint32_t, int> v) {
  return {X.perm[v.first], (v.second + X.diag[v.first]) % X.p};
}

}  // namespace

TEST(Operators, CompositionActsOnBasisFunctions) {
  std::mt19937_64 rng(0);
  for (int t = 0; t < 10; ++t) {
    const auto data = sample_phase_data(rng);
    const auto refs = data.generator_refs();
    const auto X = realize(data, refs.front()), Y = realize(data, refs.back());
    const auto XY = compose(X, Y);
    for (std::uint32_t a = 0; a < X.size(); ++a) {
      ASSERT_EQ(on_basis(XY, {a, 0}), on_basis(X, on_basis(Y, {a, 0})));
    }
  }
}

TEST(Operators, GroupLaws) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto data = sample_phase_data(rng);
    const auto refs = data.generator_refs();
    const auto X = realize(data, refs.front());
    const auto Y = realize(data, refs[refs.size() / 2]);
    const auto Z = realize(data, refs.back());
    EXPECT_EQ(compose(compose(X, Y), Z), compose(X, compose(Y, Z)));
    EXPECT_TRUE(compose(X, inverse(X)).is_identity());
    EXPECT_TRUE(commutator(X, X).is_identity());
    EXPECT_EQ(inverse(commutator(X, Y)), commutator(Y, X));
  }
}

TEST(Operators, RealizationIsHomomorphism) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 15; ++t) {
    const auto data = sample_phase_data(rng);
    const auto& block = data.block(0);
    for (const auto& g : block.generators()) {
      for (const auto& h : block.generators()) {
        const auto x = twisted_pair(g), y = twisted_pair(h);
        ASSERT_EQ(realize_pair(data, 0, twisted_compose(block.module(), x, y)),
                  compose(realize_pair(data, 0, x), realize_pair(data, 0, y)));
        ASSERT_EQ(realize_pair(data, 0, twisted_commutator(block.module(), x, y)),
                  commutator(realize_pair(data, 0, x), realize_pair(data, 0, y)));
      }
    }
  }
}

TEST(Operators, CommutatorWithTranslationIsDerivative) {
  const auto data = radical_example();
  const auto& A = data.block(0).module();
  const auto& chi = data.block(0).character();
  const auto& phi = data.block(0).generators().front().phase;
  for (std::uint32_t a = 0; a < A.size(); ++a) {
    const auto c = commutator(translation_operator(data, 0, a), multiplication_operator(data, 0, phi));
    ASSERT_TRUE(c.is_diagonal());
    for (std::uint32_t x = 0; x < A.size(); ++x) {
      const auto expect = chi.eval_code(A.ring().sub_code(phi.at_code(A.sub(x, a)), phi.at_code(x)));
      ASSERT_EQ(c.diag[x], expect);
    }
  }
}

TEST(Operators, ClosureOfExampleStabilizes) {
  const auto c = generated_closure(radical_example(), 16);
  ASSERT_TRUE(c.stabilization_index.has_value());
  EXPECT_GE(c.layers.size(), 2u);
  // Layer 0 holds the distinct realized generators: M_φ and four translations.
  EXPECT_EQ(c.layers.front().size(), 5u);
  std::size_t total = 0;
  for (const auto& l : c.layers) total += l.size();
  EXPECT_EQ(total, c.total);
}

TEST(Operators, ZeroPhaseClosureIsIdentity) {
  const FiniteModule A(TruncatedRing(2, 2), 1);
  const auto c = generated_closure(PhaseData::zero_phase(A, AdditiveCharacter(A.ring(), {1, 0})), 4);
  EXPECT_EQ(c.total, 1u);
  EXPECT_EQ(c.stabilization_index, 0);
}

TEST(Operators, SignatureInvariantUnderRelabeling) {
  std::mt19937_64 rng(4);
  SamplingBounds b;
  b.max_rank = 1;
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    const auto data = sample_phase_data(rng, b);
    InteractionSignature base;
    try {
      base = interaction_signature(data);
    } catch (const SignatureTooLarge&) {
      continue;
    }
    ++checked;
    for (int k = 0; k < 3; ++k) EXPECT_EQ(interaction_signature(random_relabeling(data, rng)), base);
  }
  EXPECT_GT(checked, 20);
}

TEST(Operators, SignatureSeparatesAbelianFromNot) {
  const auto weak = radical_example();
  const FiniteModule A(TruncatedRing(2, 4), 2);
  const auto translations_only = PhaseData(A, AdditiveCharacter(A.ring(), {0, 1, 0, 0}),
                                           {weak.block(0).generators().begin() + 1, weak.block(0).generators().end()});
  const auto s1 = interaction_signature(weak), s2 = interaction_signature(translations_only);
  EXPECT_NE(s1.fingerprint, s2.fingerprint);
  EXPECT_EQ(s2.size, 16u);
}

TEST(Operators, SignatureCap) {
  SignatureLimits tiny;
  tiny.max_group = 4;
  try {
    interaction_signature(radical_example(), tiny);
    FAIL() << "expected SignatureTooLarge";
  } catch (const SignatureTooLarge& e) {
    EXPECT_FALSE(e.partial_profile.empty());
  }
}
