#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/phase.hpp"
#include "phasebound/sampling.hpp"

using namespace phasebound;

namespace {

QuadraticPhase example_phase(const FiniteModule& A) {
  const auto& r = A.ring();
  return QuadraticPhase::from_form(A, {{r.zero(), r.monomial(1), r.zero(), r.zero()}, {r.zero(), r.zero()}, r.zero()});
}

}  // namespace

TEST(Phase, ExampleMatchesOracleEvaluation) {
  const FiniteModule A(TruncatedRing(2, 4), 2);
  const auto phi = example_phase(A);
  const oracle::Space sp{2, 4, 2};
  const oracle::Poly u{0, 1, 0, 0}, z{0, 0, 0, 0};
  for (std::uint32_t x = 0; x < A.size(); ++x) {
    const auto pt = sp.point(x);
    ASSERT_EQ(phi.at_code(x), oracle::encode(oracle::mul(u, oracle::mul(pt[0], pt[1], 2), 2), 2));
    ASSERT_EQ(phi.at_code(x), oracle::encode(oracle::eval_form(sp, {z, u, z, z}, {z, z}, z, pt), 2));
  }
}

TEST(Phase, ExampleFirstAndSecondDerivativesClosedForm) {
  const FiniteModule A(TruncatedRing(2, 4), 2);
  const auto phi = example_phase(A);
  const oracle::Space sp{2, 4, 2};
  const oracle::Poly u{0, 1, 0, 0};
  for (std::uint32_t h = 0; h < A.size(); ++h) {
    const auto d1 = derivative_table(A, phi.table(), h);
    const auto hh = sp.point(h);
    for (std::uint32_t x = 0; x < A.size(); ++x) {
      const auto xx = sp.point(x);
      // u(h1 x2 + x1 h2 + h1 h2)
      auto expect = oracle::add(oracle::add(oracle::mul(hh[0], xx[1], 2), oracle::mul(xx[0], hh[1], 2), 2),
                                oracle::mul(hh[0], hh[1], 2), 2);
      ASSERT_EQ(d1[x], oracle::encode(oracle::mul(u, expect, 2), 2));
    }
  }
  std::mt19937_64 rng(0);
  for (int t = 0; t < 64; ++t) {
    const auto h = static_cast<std::uint32_t>(rng() % A.size()), k = static_cast<std::uint32_t>(rng() % A.size());
    const auto d2 = derivative_table(A, derivative_table(A, phi.table(), h), k);
    const auto hh = sp.point(h), kk = sp.point(k);
    const auto expect = oracle::mul(u, oracle::add(oracle::mul(hh[0], kk[1], 2), oracle::mul(kk[0], hh[1], 2), 2), 2);
    for (auto v : d2) ASSERT_EQ(v, oracle::encode(expect, 2));
  }
  EXPECT_EQ(additive_degree(phi), 2);
}

TEST(Phase, GeneratorDegreeMatchesExhaustiveDegree) {
  std::mt19937_64 rng(3);
  SamplingBounds b;
  b.max_points = 27;
  for (int t = 0; t < 60; ++t) {
    const auto data = sample_phase_data(rng, b);
    const auto& A = data.block(0).module();
    const oracle::Space sp{A.ring().p(), A.ring().m(), A.rank()};
    for (const auto& g : data.block(0).generators()) {
      const std::vector<std::uint32_t> table(g.phase.table().begin(), g.phase.table().end());
      ASSERT_EQ(additive_degree(g.phase), oracle::exhaustive_degree(sp, table));
    }
  }
  // Non-quadratic tables too: x1 x2 x3 over F_2 has degree 3.
  const FiniteModule A(TruncatedRing(2, 1), 3);
  std::vector<std::uint32_t> cubic(A.size());
  for (std::uint32_t x = 0; x < A.size(); ++x) cubic[x] = (x == 7) ? 1 : 0;
  EXPECT_EQ(additive_degree(A, cubic), 3);
  EXPECT_EQ(oracle::exhaustive_degree({2, 1, 3}, cubic), 3);
}

TEST(Phase, FromTableRejectsCubicWithWitness) {
  const FiniteModule A(TruncatedRing(2, 1), 3);
  std::vector<std::uint32_t> cubic(A.size(), 0);
  cubic[7] = 1;
  EXPECT_THROW(QuadraticPhase::from_table(A, cubic), NotQuadraticError);
  const auto w = quadratic_violation(A, cubic);
  ASSERT_TRUE(w.has_value());
  // Check the witness by hand: third difference at x is nonzero.
  auto f = [&](std::uint32_t x) { return static_cast<int>(cubic[x]); };
  const auto h1 = w->h1.code, h2 = w->h2.code, h3 = w->h3.code, x = w->x.code;
  int s = 0;
  for (int mask = 0; mask < 8; ++mask) {
    std::uint32_t pt = x;
    if (mask & 1) pt = A.add(pt, h1);
    if (mask & 2) pt = A.add(pt, h2);
    if (mask & 4) pt = A.add(pt, h3);
    s += f(pt);
  }
  EXPECT_EQ(s % 2, 1);
  EXPECT_THROW(polarize(A, cubic), NotQuadraticError);
}

TEST(Phase, PolarizationIdentity) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto data = sample_phase_data(rng);
    const auto& phi = data.block(0).generators().front().phase;
    const auto& A = phi.module();
    const auto& r = A.ring();
    const oracle::Space sp{r.p(), r.m(), A.rank()};
    const auto b = polarize(phi);
    EXPECT_TRUE(b.biadditive());
    for (int k = 0; k < 50; ++k) {
      const auto x = static_cast<std::uint32_t>(rng() % A.size()), y = static_cast<std::uint32_t>(rng() % A.size());
      auto dec = [&](std::uint32_t c) { return oracle::decode(c, r.p(), r.m()); };
      // Δ_y φ(x) − Δ_y φ(0)
      const auto expect = oracle::sub(oracle::sub(dec(phi.at_code(sp.add(x, y))), dec(phi.at_code(x)), r.p()),
                                      oracle::sub(dec(phi.at_code(y)), dec(phi.at_code(0)), r.p()), r.p());
      ASSERT_EQ(b.at_code(x, y), oracle::encode(expect, r.p()));
      ASSERT_EQ(b.at_code(x, y), b.at_code(y, x));
    }
  }
}

TEST(Phase, PullbackAndTranslate) {
  std::mt19937_64 rng(7);
  const auto data = sample_phase_data(rng);
  const auto& phi = data.block(0).generators().front().phase;
  const auto& A = phi.module();
  const auto alpha = ModuleAutomorphism::random(A, rng);
  const auto psi = pullback(phi, alpha);
  const auto tr = translate(phi, 3 % A.size());
  for (std::uint32_t x = 0; x < A.size(); ++x) {
    ASSERT_EQ(psi.at_code(alpha.apply(x)), phi.at_code(x));
    ASSERT_EQ(tr.at_code(x), phi.at_code(A.add(x, 3 % A.size())));
  }
  EXPECT_EQ(additive_degree(psi), additive_degree(phi));
}

TEST(Phase, StructuralChecks) {
  const TruncatedRing r2(2, 2), r3(3, 1);
  const FiniteModule A(r2, 1), B(r3, 1);
  const AdditiveCharacter chi(r2, {1, 0});
  const auto good = PhaseData(A, chi, {{ModuleElement{1}, QuadraticPhase::zero(A)}});
  const auto other = PhaseData(B, AdditiveCharacter(r3, {1}), {{ModuleElement{1}, QuadraticPhase::zero(B)}});
  EXPECT_THROW(direct_sum(good, other), StructuralError);
  EXPECT_THROW(PhaseData(A, chi, {{ModuleElement{1}, QuadraticPhase::zero(FiniteModule(r2, 2))}}), StructuralError);
  EXPECT_THROW(PhaseData(A, AdditiveCharacter(r3, {1}), {}), StructuralError);
  EXPECT_EQ(direct_sum(good, good).block_count(), 2u);
  EXPECT_TRUE(PhaseData::zero_phase(A, chi).is_zero());
  EXPECT_EQ(defect_rank(PhaseData::zero_phase(A, chi)), 0);
}

TEST(Phase, TableAndFormAgree) {
  const FiniteModule A(TruncatedRing(3, 2), 1);
  const auto& r = A.ring();
  const auto phi = QuadraticPhase::from_form(A, {{r.monomial(1)}, {r.one()}, r.monomial(1, 2)});
  const auto psi = QuadraticPhase::from_table(A, std::vector<std::uint32_t>(phi.table().begin(), phi.table().end()));
  EXPECT_EQ(phi, psi);
  EXPECT_FALSE(psi.form().has_value());
  EXPECT_EQ(additive_degree(phi), 2);
}
