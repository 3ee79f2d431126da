#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace phasebound {

/// Largest p^(m n) accepted anywhere in the engine.
inline constexpr std::uint32_t kMaxModuleSize = 65536;
/// Largest truncation order that can fit under kMaxModuleSize (p = 2).
inline constexpr int kMaxDigits = 16;

bool is_small_prime(int p);

/// Base-p digit arithmetic on packed codes. A code stores `len` residues mod p,
/// digit i having weight p^i. Addition is digitwise, so the codes form (Z_p)^len.
class DigitCodec {
 public:
  DigitCodec() = default;
  DigitCodec(int p, int len);

  int p() const { return p_; }
  int len() const { return len_; }
  std::uint32_t size() const { return pow_[len_]; }
  std::uint32_t weight(int i) const { return pow_[i]; }

  int digit(std::uint32_t code, int i) const {
    return static_cast<int>((code / pow_[i]) % static_cast<std::uint32_t>(p_));
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t scale(int c, std::uint32_t a) const;

  std::vector<int> digits(std::uint32_t code) const;
  std::uint32_t pack(std::span<const int> digits) const;

 private:
  int p_ = 2;
  int len_ = 0;
  std::array<std::uint32_t, kMaxDigits + 1> pow_{};
};

/// Element of F_p[u]/(u^m). Carries its ring's (p, m) so mixed-ring
/// arithmetic is caught instead of silently reinterpreted.
struct RingElement {
  std::uint8_t p = 2;
  std::uint8_t m = 1;
  std::uint32_t code = 0;

  friend bool operator==(const RingElement&, const RingElement&) = default;
  friend auto operator<=>(const RingElement&, const RingElement&) = default;
};

/// F_p[u]/(u^m) with p prime, p <= 7.
class TruncatedRing {
 public:
  TruncatedRing(int p, int m);

  int p() const { return codec_.p(); }
  int m() const { return codec_.len(); }
  std::uint32_t size() const { return codec_.size(); }
  const DigitCodec& codec() const { return codec_; }

  RingElement element(std::uint32_t code) const;
  RingElement from_coeffs(std::span<const int> coeffs) const;
  RingElement zero() const { return element(0); }
  RingElement one() const { return element(1); }
  /// c * u^j
  RingElement monomial(int j, int c = 1) const;
  std::vector<int> coeffs(const RingElement& x) const;
  int coeff(const RingElement& x, int j) const;

  RingElement add(const RingElement& x, const RingElement& y) const;
  RingElement sub(const RingElement& x, const RingElement& y) const;
  RingElement neg(const RingElement& x) const;
  RingElement mul(const RingElement& x, const RingElement& y) const;

  // Unchecked code-level arithmetic for inner loops.
  std::uint32_t add_code(std::uint32_t a, std::uint32_t b) const { return codec_.add(a, b); }
  std::uint32_t sub_code(std::uint32_t a, std::uint32_t b) const { return codec_.sub(a, b); }
  std::uint32_t mul_code(std::uint32_t a, std::uint32_t b) const;

  /// Smallest j with coefficient j nonzero; m for zero.
  int radical_depth(const RingElement& x) const;
  int radical_depth_code(std::uint32_t a) const;
  /// Keeps the coefficients of u^0 .. u^(s-1).
  std::uint32_t truncate_code(std::uint32_t a, int s) const;

  bool contains(const RingElement& x) const { return x.p == p() && x.m == m(); }
  std::string to_string(const RingElement& x) const;

  friend bool operator==(const TruncatedRing& a, const TruncatedRing& b) {
    return a.p() == b.p() && a.m() == b.m();
  }

 private:
  void check(const RingElement& x) const;
  DigitCodec codec_;
};

/// Free-standing truncated product; throws StructuralError on mismatched rings.
RingElement ring_mul(const RingElement& x, const RingElement& y);
RingElement ring_add(const RingElement& x, const RingElement& y);
int radical_depth(const RingElement& x);

/// chi(x) = zeta_p^(sum_j weights[j] * coeff_j(x)). Values are kept as exponents.
class AdditiveCharacter {
 public:
  AdditiveCharacter(const TruncatedRing& ring, std::vector<int> weights);

  const std::vector<int>& weights() const { return weights_; }
  int p() const { return p_; }

  int eval(const RingElement& x) const;
  int eval_code(std::uint32_t a) const { return table_[a]; }
  /// Smallest s with rad^s(R) inside ker chi.
  int invisible_threshold() const { return threshold_; }

  friend bool operator==(const AdditiveCharacter& a, const AdditiveCharacter& b) {
    return a.p_ == b.p_ && a.weights_ == b.weights_;
  }

 private:
  int p_;
  std::vector<int> weights_;
  std::vector<std::uint8_t> table_;
  int threshold_;
};

int char_eval(const AdditiveCharacter& chi, const RingElement& x);
int invisible_threshold(const AdditiveCharacter& chi);

/// Element of A = R^n, packed: component i occupies digits [i m, (i+1) m).
struct ModuleElement {
  std::uint32_t code = 0;
  friend bool operator==(const ModuleElement&, const ModuleElement&) = default;
  friend auto operator<=>(const ModuleElement&, const ModuleElement&) = default;
};

class FiniteModule {
 public:
  FiniteModule(TruncatedRing ring, int rank);

  const TruncatedRing& ring() const { return ring_; }
  int rank() const { return rank_; }
  std::uint32_t size() const { return codec_.size(); }

  ModuleElement make(std::span<const RingElement> components) const;
  ModuleElement make_codes(std::span<const std::uint32_t> components) const;
  RingElement component(ModuleElement x, int i) const;
  std::uint32_t component_code(std::uint32_t x, int i) const;

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return codec_.add(a, b); }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return codec_.sub(a, b); }
  std::uint32_t neg(std::uint32_t a) const { return codec_.neg(a); }
  ModuleElement add(ModuleElement a, ModuleElement b) const { return {codec_.add(a.code, b.code)}; }

  /// Additive generators u^j e_i; they generate (A, +) as a Z_p-space.
  std::vector<std::uint32_t> additive_generators() const;
  std::string to_string(ModuleElement x) const;

  friend bool operator==(const FiniteModule& a, const FiniteModule& b) {
    return a.ring_ == b.ring_ && a.rank_ == b.rank_;
  }

 private:
  TruncatedRing ring_;
  int rank_;
  DigitCodec codec_;
};

/// R-linear automorphism x -> M x of R^n, with its permutation table on A.
class ModuleAutomorphism {
 public:
  /// `matrix` is row-major n x n of ring codes; throws StructuralError if singular.
  ModuleAutomorphism(const FiniteModule& module, std::vector<std::uint32_t> matrix);

  static ModuleAutomorphism identity(const FiniteModule& module);
  /// Uniform over GL_n(R) by rejection sampling.
  static ModuleAutomorphism random(const FiniteModule& module, std::mt19937_64& rng);
  /// Whether the reduction mod u of `matrix` is invertible over F_p.
  static bool invertible(const FiniteModule& module, std::span<const std::uint32_t> matrix);

  const std::vector<std::uint32_t>& matrix() const { return matrix_; }
  std::uint32_t apply(std::uint32_t x) const { return forward_[x]; }
  std::uint32_t apply_inverse(std::uint32_t x) const { return backward_[x]; }

 private:
  std::vector<std::uint32_t> matrix_;
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> backward_;
};

/// F_p-subspace of the coefficient space F_p^m of a truncated ring, kept in
/// reduced row echelon form. Each basis vector's pivot is its first nonzero
/// coefficient, so V ∩ rad^j is spanned by the basis vectors with pivot >= j.
class LayeredSubspace {
 public:
  explicit LayeredSubspace(const TruncatedRing& ring);

  /// Returns true when v was not already in the span.
  bool insert(std::uint32_t v);
  bool contains(std::uint32_t v) const;
  int dimension() const { return static_cast<int>(basis_.size()); }
  bool empty() const { return basis_.empty(); }

  /// Pivots in increasing order.
  std::vector<int> pivots() const;
  bool has_pivot(int j) const;
  /// Basis vector whose pivot is j.
  std::uint32_t basis_vector(int j) const;
  /// Coefficient of basis_vector(j) in the expansion of v; v must lie in the span.
  int coordinate(std::uint32_t v, int j) const;
  /// dim(V ∩ rad^j)
  int dimension_from(int j) const;

 private:
  std::vector<int> reduce(std::vector<int> v) const;
  int p_;
  int m_;
  DigitCodec codec_;
  // Sorted by pivot; each entry is (pivot, coefficient vector with leading 1).
  std::vector<std::pair<int, std::vector<int>>> basis_;
};

int mod_inverse(int a, int p);

}  // namespace phasebound
