#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/ring.hpp"

using namespace phasebound;

TEST(Ring, OnePlusUSquared) {
  const TruncatedRing r(2, 4);
  const auto x = r.from_coeffs(std::vector<int>{1, 1, 0, 0});
  EXPECT_EQ(r.mul(x, x), r.from_coeffs(std::vector<int>{1, 0, 1, 0}));
  EXPECT_EQ(r.to_string(r.mul(x, x)), "1 + u^2");
}

TEST(Ring, UToTheMIsZero) {
  for (int m = 2; m <= 5; ++m) {
    const TruncatedRing r(3, m);
    auto acc = r.one();
    for (int i = 0; i < m - 1; ++i) acc = r.mul(acc, r.monomial(1));
    EXPECT_EQ(acc, r.monomial(m - 1));
    EXPECT_EQ(r.mul(acc, r.monomial(1)), r.zero());
  }
}

TEST(Ring, MultiplicationMatchesConvolution) {
  for (auto [p, m] : {std::pair{2, 4}, {3, 3}, {5, 2}, {7, 2}, {2, 1}}) {
    const TruncatedRing r(p, m);
    for (std::uint32_t a = 0; a < r.size(); ++a) {
      for (std::uint32_t b = 0; b < r.size(); ++b) {
        const auto expect = oracle::encode(oracle::mul(oracle::decode(a, p, m), oracle::decode(b, p, m), p), p);
        ASSERT_EQ(r.mul_code(a, b), expect) << p << " " << m << " " << a << " " << b;
        ASSERT_EQ(r.add_code(a, b), oracle::encode(oracle::add(oracle::decode(a, p, m), oracle::decode(b, p, m), p), p));
      }
      ASSERT_EQ(r.radical_depth_code(a), oracle::depth(oracle::decode(a, p, m)));
    }
  }
}

TEST(Ring, MismatchedRingsThrow) {
  const TruncatedRing a(2, 4), b(2, 3), c(3, 4);
  EXPECT_THROW(ring_mul(a.one(), b.one()), StructuralError);
  EXPECT_THROW(ring_add(a.one(), c.one()), StructuralError);
  EXPECT_THROW(a.mul(a.one(), b.one()), StructuralError);
  EXPECT_THROW(TruncatedRing(4, 2), StructuralError);
  EXPECT_THROW(TruncatedRing(2, 17), SizeCapError);
}

TEST(Ring, RadicalDepthOfZeroIsM) {
  const TruncatedRing r(2, 4);
  EXPECT_EQ(radical_depth(r.zero()), 4);
  EXPECT_EQ(radical_depth(r.monomial(2)), 2);
}

TEST(Character, EvalAndThresholdMatchScan) {
  std::mt19937_64 rng(0);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = std::array{2, 3, 5}[trial % 3];
    const int m = 1 + trial % 4;
    std::vector<int> w(static_cast<std::size_t>(m));
    for (auto& x : w) x = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
    const TruncatedRing r(p, m);
    const AdditiveCharacter chi(r, w);
    for (std::uint32_t a = 0; a < r.size(); ++a) {
      ASSERT_EQ(chi.eval_code(a), oracle::character(oracle::decode(a, p, m), w, p));
    }
    ASSERT_EQ(invisible_threshold(chi), oracle::visibility_scan(w, p));
  }
}

TEST(Character, ExampleThresholds) {
  const TruncatedRing r(2, 4);
  EXPECT_EQ(AdditiveCharacter(r, {0, 1, 0, 0}).invisible_threshold(), 2);
  EXPECT_EQ(AdditiveCharacter(r, {0, 0, 0, 1}).invisible_threshold(), 4);
  EXPECT_EQ(AdditiveCharacter(r, {0, 0, 0, 0}).invisible_threshold(), 0);
  EXPECT_THROW(AdditiveCharacter(r, {0, 1, 0}), StructuralError);
  EXPECT_THROW(AdditiveCharacter(r, {0, 2, 0, 0}), StructuralError);
}

TEST(Module, ComponentsAndAddition) {
  const FiniteModule A(TruncatedRing(3, 2), 2);
  const oracle::Space sp{3, 2, 2};
  for (std::uint32_t x = 0; x < A.size(); x += 5) {
    for (std::uint32_t y = 0; y < A.size(); y += 7) {
      ASSERT_EQ(A.add(x, y), sp.add(x, y));
    }
    const auto pt = sp.point(x);
    ASSERT_EQ(A.component_code(x, 1), oracle::encode(pt[1], 3));
  }
  EXPECT_EQ(A.additive_generators().size(), 4u);
}

TEST(Module, AutomorphismIsLinearBijection) {
  std::mt19937_64 rng(0);
  const FiniteModule A(TruncatedRing(2, 3), 2);
  for (int t = 0; t < 20; ++t) {
    const auto alpha = ModuleAutomorphism::random(A, rng);
    std::set<std::uint32_t> image;
    for (std::uint32_t x = 0; x < A.size(); ++x) {
      image.insert(alpha.apply(x));
      ASSERT_EQ(alpha.apply_inverse(alpha.apply(x)), x);
      ASSERT_EQ(alpha.apply(A.add(x, 9)), A.add(alpha.apply(x), alpha.apply(9)));
    }
    ASSERT_EQ(image.size(), A.size());
  }
  // u * identity is not invertible
  const auto u = A.ring().monomial(1).code;
  EXPECT_FALSE(ModuleAutomorphism::invertible(A, std::vector<std::uint32_t>{u, 0, 0, u}));
  EXPECT_THROW(ModuleAutomorphism(A, {u, 0, 0, u}), StructuralError);
}

TEST(LayeredSubspace, MatchesBruteSpan) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const int p = t % 2 ? 3 : 2;
    const TruncatedRing r(p, 4);
    LayeredSubspace w(r);
    std::vector<std::uint32_t> gens;
    for (int k = 0; k < 3; ++k) gens.push_back(static_cast<std::uint32_t>(rng() % r.size()));
    for (auto g : gens) w.insert(g);
    // Brute span: all F_p combinations.
    std::set<std::uint32_t> span{0};
    for (auto g : gens) {
      std::set<std::uint32_t> next;
      for (auto s : span) {
        for (int c = 0; c < p; ++c) next.insert(r.add_code(s, r.codec().scale(c, g)));
      }
      span = next;
    }
    std::size_t expect = 1;
    for (int d = 0; d < w.dimension(); ++d) expect *= static_cast<std::size_t>(p);
    ASSERT_EQ(span.size(), expect);
    for (std::uint32_t v = 0; v < r.size(); ++v) ASSERT_EQ(w.contains(v), span.count(v) == 1);
    for (int j : w.pivots()) {
      const auto b = w.basis_vector(j);
      ASSERT_EQ(r.radical_depth_code(b), j);
      ASSERT_EQ(w.coordinate(b, j), 1);
      std::size_t deep = 0;
      for (auto s : span) deep += r.radical_depth_code(s) >= j ? 1 : 0;
      std::size_t pw = 1;
      for (int d = 0; d < w.dimension_from(j); ++d) pw *= static_cast<std::size_t>(p);
      ASSERT_EQ(deep, pw);
    }
  }
}
