#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasebound/errors.hpp"
#include "phasebound/phase.hpp"

namespace phasebound {

/// The point set A_1 × ... × A_k on which the operators of a (possibly
/// direct-sum) phase act, with mixed-radix point codes.
class PointSpace {
 public:
  explicit PointSpace(const PhaseData& data);

  std::uint32_t size() const { return size_; }
  std::uint32_t coordinate(std::uint32_t point, std::size_t block) const {
    return (point / strides_[block]) % modules_[block].size();
  }
  std::uint32_t replace(std::uint32_t point, std::size_t block, std::uint32_t coord) const;

 private:
  std::vector<FiniteModule> modules_;
  std::vector<std::uint32_t> strides_;
  std::uint32_t size_ = 1;
};

/// Monomial operator (σ, δ) on Fun(A, C) sending the basis function e_x to
/// ζ_p^δ(x) e_σ(x). Composition follows (σ₁,δ₁)∘(σ₂,δ₂) = (σ₁∘σ₂, x -> δ₂(x) + δ₁(σ₂ x)).
struct MonomialOperator {
  int p = 2;
  std::vector<std::uint32_t> perm;
  std::vector<std::uint8_t> diag;

  static MonomialOperator identity(std::uint32_t size, int p);
  std::uint32_t size() const { return static_cast<std::uint32_t>(perm.size()); }
  bool is_identity() const;
  bool is_diagonal() const;

  friend bool operator==(const MonomialOperator&, const MonomialOperator&) = default;
  friend auto operator<=>(const MonomialOperator&, const MonomialOperator&) = default;
};

struct MonomialOperatorHash {
  std::size_t operator()(const MonomialOperator& op) const;
};

MonomialOperator compose(const MonomialOperator& x, const MonomialOperator& y);
MonomialOperator inverse(const MonomialOperator& x);
/// Group commutator X∘Y∘X⁻¹∘Y⁻¹.
MonomialOperator commutator(const MonomialOperator& x, const MonomialOperator& y);

MonomialOperator translation_operator(const PhaseData& data, std::size_t block, std::uint32_t a);
MonomialOperator multiplication_operator(const PhaseData& data, std::size_t block, const QuadraticPhase& phi);
/// T_a ∘ M_φ for the referenced generator.
MonomialOperator realize(const PhaseData& data, GeneratorRef ref);

/// A (translation, phase table) pair inside one block, composed by
/// (a, φ)∘(b, ψ) = (a + b, φ(· + b) + ψ). realize() is a homomorphism from
/// these pairs to monomial operators; the pairs keep ring values that the
/// character may erase.
struct TwistedPair {
  std::uint32_t translation = 0;
  std::vector<std::uint32_t> values;

  friend bool operator==(const TwistedPair&, const TwistedPair&) = default;
};

TwistedPair twisted_pair(const PhaseGenerator& g);
TwistedPair twisted_compose(const FiniteModule& module, const TwistedPair& x, const TwistedPair& y);
TwistedPair twisted_inverse(const FiniteModule& module, const TwistedPair& x);
TwistedPair twisted_commutator(const FiniteModule& module, const TwistedPair& x, const TwistedPair& y);
MonomialOperator realize_pair(const PhaseData& data, std::size_t block, const TwistedPair& x);

struct ClosureResult {
  /// layers[0] are the realized generators (or {identity} for the zero phase).
  std::vector<std::vector<MonomialOperator>> layers;
  /// Last nonempty layer when the closure completed within the depth limit.
  std::optional<int> stabilization_index;
  std::size_t total = 0;
};

/// Layer t holds operators first produced as X∘g or [X, g] with X in layer t−1.
/// Throws SizeCapError past `max_operators`.
ClosureResult generated_closure(const PhaseData& data, int depth_limit, std::size_t max_operators = 1u << 16);

struct InteractionSignature {
  std::uint64_t fingerprint = 0;
  /// (element order, minimal word length) -> multiplicity
  std::map<std::pair<int, int>, int> order_profile;
  std::size_t size = 0;

  std::string hex() const;
  friend bool operator==(const InteractionSignature&, const InteractionSignature&) = default;
};

class SignatureTooLarge : public SizeCapError {
 public:
  SignatureTooLarge(const std::string& what, std::map<std::pair<int, int>, int> partial)
      : SizeCapError(what), partial_profile(std::move(partial)) {}
  std::map<std::pair<int, int>, int> partial_profile;
};

struct SignatureLimits {
  std::size_t max_group = 1u << 16;
  std::size_t max_generators = 8;
  /// Bound on group size × |points| held in memory.
  std::size_t max_cells = std::size_t{1} << 26;
};

/// Canonical fingerprint of the group generated by the distinct non-identity
/// realized generators: the Cayley table in breadth-first discovery order,
/// minimised over all orderings of the generators, then hashed with the
/// order profile.
InteractionSignature interaction_signature(const PhaseData& data, const SignatureLimits& limits = {});

}  // namespace phasebound
