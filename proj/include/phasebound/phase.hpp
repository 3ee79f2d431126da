#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phasebound/ring.hpp"

namespace phasebound {

/// x -> x^T gram x + linear . x + constant, gram row-major n x n.
struct StructuredForm {
  std::vector<RingElement> gram;
  std::vector<RingElement> linear;
  RingElement constant;

  friend bool operator==(const StructuredForm&, const StructuredForm&) = default;
};

/// Directions (h1, h2, h3) and base point x with Δ_{h1,h2,h3} φ(x) != 0.
struct QuadraticityWitness {
  ModuleElement h1, h2, h3, x;
};

/// A function A -> R whose third additive derivatives vanish identically.
/// The value table is canonical; a structured form is kept only as provenance.
class QuadraticPhase {
 public:
  static QuadraticPhase zero(const FiniteModule& module);
  static QuadraticPhase from_form(const FiniteModule& module, StructuredForm form);
  /// Validated; throws NotQuadraticError with a witness in the message.
  static QuadraticPhase from_table(const FiniteModule& module, std::vector<std::uint32_t> codes);
  static QuadraticPhase from_values(const FiniteModule& module, std::span<const RingElement> values);

  const FiniteModule& module() const { return module_; }
  RingElement at(ModuleElement x) const { return module_.ring().element(table_[x.code]); }
  std::uint32_t at_code(std::uint32_t x) const { return table_[x]; }
  std::span<const std::uint32_t> table() const { return table_; }
  const std::optional<StructuredForm>& form() const { return form_; }
  bool is_zero() const;

  /// Tables compare; structured provenance does not.
  friend bool operator==(const QuadraticPhase& a, const QuadraticPhase& b) {
    return a.module_ == b.module_ && a.table_ == b.table_;
  }

  // Only for tables already known to have degree <= 2 (derivatives, truncations,
  // relabelings and constant shifts of valid phases).
  static QuadraticPhase trusted(const FiniteModule& module, std::vector<std::uint32_t> codes);

 private:
  QuadraticPhase(FiniteModule module, std::vector<std::uint32_t> table, std::optional<StructuredForm> form);
  FiniteModule module_;
  std::vector<std::uint32_t> table_;
  std::optional<StructuredForm> form_;
};

std::optional<QuadraticityWitness> quadratic_violation(const FiniteModule& module,
                                                       std::span<const std::uint32_t> table);

/// B(x, y) = φ(x+y) − φ(x) − φ(y) + φ(0), evaluated on demand from the table.
class Polarization {
 public:
  const FiniteModule& module() const { return module_; }
  RingElement at(ModuleElement x, ModuleElement y) const;
  std::uint32_t at_code(std::uint32_t x, std::uint32_t y) const;
  bool biadditive() const { return biadditive_; }

 private:
  friend Polarization polarize(const FiniteModule&, std::span<const std::uint32_t>);
  Polarization(FiniteModule module, std::vector<std::uint32_t> table, bool biadditive);
  FiniteModule module_;
  std::vector<std::uint32_t> table_;
  bool biadditive_;
};

/// Throws NotQuadraticError naming a triple (x, x', y) with
/// B(x+x', y) != B(x, y) + B(x', y) when the table is not quadratic.
Polarization polarize(const FiniteModule& module, std::span<const std::uint32_t> table);
Polarization polarize(const QuadraticPhase& phi);

/// x -> φ(x + h) − φ(x)
QuadraticPhase additive_derivative(const QuadraticPhase& phi, ModuleElement h);
std::vector<std::uint32_t> derivative_table(const FiniteModule& module, std::span<const std::uint32_t> table,
                                            std::uint32_t h);

/// Smallest d >= 0 with every (d+1)-fold additive derivative identically zero.
/// Directions range over the additive generators u^j e_i, which is enough:
/// the augmentation ideal of Z[A] is generated by (τ_s − 1) for generators s.
int additive_degree(const FiniteModule& module, std::span<const std::uint32_t> table);
int additive_degree(const QuadraticPhase& phi);

/// φ∘α^{-1}, the phase carried along the relabeling x -> α x.
QuadraticPhase pullback(const QuadraticPhase& phi, const ModuleAutomorphism& alpha);
/// x -> φ(x + b)
QuadraticPhase translate(const QuadraticPhase& phi, std::uint32_t b);
/// x -> φ(x) + c
QuadraticPhase shift(const QuadraticPhase& phi, std::uint32_t c);

struct PhaseGenerator {
  ModuleElement translation;
  QuadraticPhase phase;

  bool is_trivial() const { return translation.code == 0 && phase.is_zero(); }
  friend bool operator==(const PhaseGenerator&, const PhaseGenerator&) = default;
};

/// One summand: a module A = R^n, a character on R and generators over A.
class PhaseBlock {
 public:
  PhaseBlock(FiniteModule module, AdditiveCharacter character, std::vector<PhaseGenerator> generators);

  const FiniteModule& module() const { return module_; }
  const TruncatedRing& ring() const { return module_.ring(); }
  const AdditiveCharacter& character() const { return character_; }
  const std::vector<PhaseGenerator>& generators() const { return generators_; }
  bool is_zero() const;

  friend bool operator==(const PhaseBlock& a, const PhaseBlock& b) {
    return a.module_ == b.module_ && a.character_ == b.character_ && a.generators_ == b.generators_;
  }

 private:
  FiniteModule module_;
  AdditiveCharacter character_;
  std::vector<PhaseGenerator> generators_;
};

struct GeneratorRef {
  std::size_t block = 0;
  std::size_t index = 0;
  friend bool operator==(const GeneratorRef&, const GeneratorRef&) = default;
  friend auto operator<=>(const GeneratorRef&, const GeneratorRef&) = default;
};

/// Phase data: one block for an ordinary phase, several after a direct sum.
class PhaseData {
 public:
  explicit PhaseData(std::vector<PhaseBlock> blocks);
  PhaseData(FiniteModule module, AdditiveCharacter character, std::vector<PhaseGenerator> generators);
  static PhaseData zero_phase(FiniteModule module, AdditiveCharacter character);

  const std::vector<PhaseBlock>& blocks() const { return blocks_; }
  const PhaseBlock& block(std::size_t i) const { return blocks_.at(i); }
  std::size_t block_count() const { return blocks_.size(); }
  int p() const { return blocks_.front().ring().p(); }

  std::vector<GeneratorRef> generator_refs() const;
  std::size_t generator_count() const;
  const PhaseGenerator& generator(GeneratorRef ref) const;
  bool is_zero() const;

  friend bool operator==(const PhaseData&, const PhaseData&) = default;

 private:
  std::vector<PhaseBlock> blocks_;
};

int defect_rank(const PhaseData& data);
int defect_rank(const PhaseBlock& block);

/// Block-diagonal sum; every summand must share p.
PhaseData direct_sum(std::span<const PhaseData> parts);
PhaseData direct_sum(const PhaseData& a, const PhaseData& b);

/// Applies one automorphism per block and reorders each block's generators:
/// new generator i is old generator order[b][i], carried by α_b.
PhaseData relabel(const PhaseData& data, std::span<const ModuleAutomorphism> automorphisms,
                  const std::vector<std::vector<std::size_t>>& order);

}  // namespace phasebound
