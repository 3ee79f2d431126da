#include "phasebound/phase.hpp"

#include <algorithm>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

bool all_zero(std::span<const std::uint32_t> t) {
  return std::all_of(t.begin(), t.end(), [](std::uint32_t v) { return v == 0; });
}

// Δ_{dirs[0]} ... Δ_{dirs[k-1]} of `table`, all directions from `gens`,
// nondecreasing index sequences only (derivatives commute).
bool all_derivatives_vanish(const FiniteModule& module, const std::vector<std::uint32_t>& table,
                            const std::vector<std::uint32_t>& gens, int order, std::size_t first) {
  if (order == 0) return all_zero(table);
  for (std::size_t i = first; i < gens.size(); ++i) {
    const auto next = derivative_table(module, table, gens[i]);
    if (!all_derivatives_vanish(module, next, gens, order - 1, i)) return false;
  }
  return true;
}

std::uint32_t eval_form(const FiniteModule& module, const StructuredForm& form, std::uint32_t x) {
  const auto& ring = module.ring();
  const int n = module.rank();
  std::uint32_t acc = form.constant.code;
  for (int i = 0; i < n; ++i) {
    const auto xi = module.component_code(x, i);
    acc = ring.add_code(acc, ring.mul_code(form.linear[static_cast<std::size_t>(i)].code, xi));
    for (int j = 0; j < n; ++j) {
      const auto g = form.gram[static_cast<std::size_t>(i * n + j)].code;
      if (g == 0) continue;
      const auto xj = module.component_code(x, j);
      acc = ring.add_code(acc, ring.mul_code(ring.mul_code(xi, g), xj));
    }
  }
  return acc;
}

std::string describe(const FiniteModule& module, const QuadraticityWitness& w) {
  std::ostringstream os;
  os << "third derivative nonzero: h1=" << module.to_string(w.h1) << " h2=" << module.to_string(w.h2)
     << " h3=" << module.to_string(w.h3) << " at x=" << module.to_string(w.x);
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadraticPhase

QuadraticPhase::QuadraticPhase(FiniteModule module, std::vector<std::uint32_t> table,
                               std::optional<StructuredForm> form)
    : module_(std::move(module)), table_(std::move(table)), form_(std::move(form)) {
  if (table_.size() != module_.size()) throw StructuralError("phase table size does not match |A|");
  for (auto v : table_) {
    if (v >= module_.ring().size()) throw StructuralError("phase value out of range");
  }
}

QuadraticPhase QuadraticPhase::zero(const FiniteModule& module) {
  return QuadraticPhase(module, std::vector<std::uint32_t>(module.size(), 0), std::nullopt);
}

QuadraticPhase QuadraticPhase::trusted(const FiniteModule& module, std::vector<std::uint32_t> codes) {
  return QuadraticPhase(module, std::move(codes), std::nullopt);
}

QuadraticPhase QuadraticPhase::from_form(const FiniteModule& module, StructuredForm form) {
  const auto n = static_cast<std::size_t>(module.rank());
  if (form.gram.size() != n * n) throw StructuralError("gram matrix must be n x n");
  if (form.linear.size() != n) throw StructuralError("linear part must have length n");
  const auto& ring = module.ring();
  for (const auto& e : form.gram) {
    if (!ring.contains(e)) throw StructuralError("gram entry from a different ring");
  }
  for (const auto& e : form.linear) {
    if (!ring.contains(e)) throw StructuralError("linear entry from a different ring");
  }
  if (!ring.contains(form.constant)) throw StructuralError("constant from a different ring");
  std::vector<std::uint32_t> table(module.size());
  for (std::uint32_t x = 0; x < module.size(); ++x) table[x] = eval_form(module, form, x);
  if (auto w = quadratic_violation(module, table)) throw NotQuadraticError(describe(module, *w));
  return QuadraticPhase(module, std::move(table), std::move(form));
}

QuadraticPhase QuadraticPhase::from_table(const FiniteModule& module, std::vector<std::uint32_t> codes) {
  QuadraticPhase phi(module, std::move(codes), std::nullopt);
  if (auto w = quadratic_violation(module, phi.table_)) throw NotQuadraticError(describe(module, *w));
  return phi;
}

QuadraticPhase QuadraticPhase::from_values(const FiniteModule& module, std::span<const RingElement> values) {
  std::vector<std::uint32_t> codes;
  codes.reserve(values.size());
  for (const auto& v : values) {
    if (!module.ring().contains(v)) throw StructuralError("phase value from a different ring");
    codes.push_back(v.code);
  }
  return from_table(module, std::move(codes));
}

bool QuadraticPhase::is_zero() const { return all_zero(table_); }

std::optional<QuadraticityWitness> quadratic_violation(const FiniteModule& module,
                                                       std::span<const std::uint32_t> table) {
  // Degree <= 2 iff Δ_{a,b}φ is constant for all generator directions a, b.
  const auto gens = module.additive_generators();
  const std::vector<std::uint32_t> base(table.begin(), table.end());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto da = derivative_table(module, base, gens[i]);
    for (std::size_t j = i; j < gens.size(); ++j) {
      const auto dab = derivative_table(module, da, gens[j]);
      for (std::uint32_t x = 0; x < module.size(); ++x) {
        if (dab[x] != dab[0]) return QuadraticityWitness{{gens[i]}, {gens[j]}, {x}, {0}};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Polarization

Polarization::Polarization(FiniteModule module, std::vector<std::uint32_t> table, bool biadditive)
    : module_(std::move(module)), table_(std::move(table)), biadditive_(biadditive) {}

std::uint32_t Polarization::at_code(std::uint32_t x, std::uint32_t y) const {
  const auto& ring = module_.ring();
  const auto xy = module_.add(x, y);
  return ring.add_code(ring.sub_code(ring.sub_code(table_[xy], table_[x]), table_[y]), table_[0]);
}

RingElement Polarization::at(ModuleElement x, ModuleElement y) const {
  return module_.ring().element(at_code(x.code, y.code));
}

Polarization polarize(const FiniteModule& module, std::span<const std::uint32_t> table) {
  if (table.size() != module.size()) throw StructuralError("phase table size does not match |A|");
  const bool ok = !quadratic_violation(module, table).has_value();
  Polarization b(module, std::vector<std::uint32_t>(table.begin(), table.end()), ok);
  if (!ok) {
    const auto& ring = module.ring();
    for (std::uint32_t x = 0; x < module.size(); ++x) {
      for (auto e : module.additive_generators()) {
        for (std::uint32_t y = 0; y < module.size(); ++y) {
          const auto lhs = b.at_code(module.add(x, e), y);
          const auto rhs = ring.add_code(b.at_code(x, y), b.at_code(e, y));
          if (lhs != rhs) {
            std::ostringstream os;
            os << "polarization not biadditive: x=" << module.to_string({x}) << " x'=" << module.to_string({e})
               << " y=" << module.to_string({y});
            throw NotQuadraticError(os.str());
          }
        }
      }
    }
  }
  return b;
}

Polarization polarize(const QuadraticPhase& phi) { return polarize(phi.module(), phi.table()); }

// ---------------------------------------------------------------------------
// Derivative calculus

std::vector<std::uint32_t> derivative_table(const FiniteModule& module, std::span<const std::uint32_t> table,
                                            std::uint32_t h) {
  const auto& ring = module.ring();
  std::vector<std::uint32_t> out(module.size());
  for (std::uint32_t x = 0; x < module.size(); ++x) out[x] = ring.sub_code(table[module.add(x, h)], table[x]);
  return out;
}

QuadraticPhase additive_derivative(const QuadraticPhase& phi, ModuleElement h) {
  if (h.code >= phi.module().size()) throw StructuralError("direction outside A");
  return QuadraticPhase::trusted(phi.module(), derivative_table(phi.module(), phi.table(), h.code));
}

int additive_degree(const FiniteModule& module, std::span<const std::uint32_t> table) {
  const auto gens = module.additive_generators();
  const std::vector<std::uint32_t> base(table.begin(), table.end());
  // A function on (Z_p)^N has additive degree at most N (p − 1).
  const int bound = static_cast<int>(gens.size()) * (module.ring().p() - 1);
  for (int d = 0; d < bound; ++d) {
    if (all_derivatives_vanish(module, base, gens, d + 1, 0)) return d;
  }
  return bound;
}

int additive_degree(const QuadraticPhase& phi) { return additive_degree(phi.module(), phi.table()); }

QuadraticPhase pullback(const QuadraticPhase& phi, const ModuleAutomorphism& alpha) {
  std::vector<std::uint32_t> out(phi.module().size());
  for (std::uint32_t x = 0; x < out.size(); ++x) out[x] = phi.at_code(alpha.apply_inverse(x));
  return QuadraticPhase::trusted(phi.module(), std::move(out));
}

QuadraticPhase translate(const QuadraticPhase& phi, std::uint32_t b) {
  const auto& module = phi.module();
  std::vector<std::uint32_t> out(module.size());
  for (std::uint32_t x = 0; x < out.size(); ++x) out[x] = phi.at_code(module.add(x, b));
  return QuadraticPhase::trusted(module, std::move(out));
}

QuadraticPhase shift(const QuadraticPhase& phi, std::uint32_t c) {
  const auto& ring = phi.module().ring();
  std::vector<std::uint32_t> out(phi.table().begin(), phi.table().end());
  for (auto& v : out) v = ring.add_code(v, c);
  if (phi.form()) {
    auto form = *phi.form();
    form.constant = ring.element(ring.add_code(form.constant.code, c));
    return QuadraticPhase::from_form(phi.module(), std::move(form));
  }
  return QuadraticPhase::trusted(phi.module(), std::move(out));
}

// ---------------------------------------------------------------------------
// Phase data

PhaseBlock::PhaseBlock(FiniteModule module, AdditiveCharacter character, std::vector<PhaseGenerator> generators)
    : module_(std::move(module)), character_(std::move(character)), generators_(std::move(generators)) {
  if (character_.p() != module_.ring().p() || static_cast<int>(character_.weights().size()) != module_.ring().m()) {
    throw StructuralError("character does not belong to the block ring");
  }
  for (const auto& g : generators_) {
    if (!(g.phase.module() == module_)) throw StructuralError("generator phase over a different module");
    if (g.translation.code >= module_.size()) throw StructuralError("generator translation outside A");
  }
}

bool PhaseBlock::is_zero() const {
  return std::all_of(generators_.begin(), generators_.end(), [](const auto& g) { return g.is_trivial(); });
}

PhaseData::PhaseData(std::vector<PhaseBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw StructuralError("phase data needs at least one block");
  for (const auto& b : blocks_) {
    if (b.ring().p() != blocks_.front().ring().p()) throw StructuralError("blocks must share the prime p");
  }
}

PhaseData::PhaseData(FiniteModule module, AdditiveCharacter character, std::vector<PhaseGenerator> generators)
    : PhaseData(std::vector<PhaseBlock>{PhaseBlock(std::move(module), std::move(character), std::move(generators))}) {}

PhaseData PhaseData::zero_phase(FiniteModule module, AdditiveCharacter character) {
  return PhaseData(std::move(module), std::move(character), {});
}

std::vector<GeneratorRef> PhaseData::generator_refs() const {
  std::vector<GeneratorRef> out;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t i = 0; i < blocks_[b].generators().size(); ++i) out.push_back({b, i});
  }
  return out;
}

std::size_t PhaseData::generator_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.generators().size();
  return n;
}

const PhaseGenerator& PhaseData::generator(GeneratorRef ref) const {
  return blocks_.at(ref.block).generators().at(ref.index);
}

bool PhaseData::is_zero() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.is_zero(); });
}

int defect_rank(const PhaseBlock& block) {
  int d = 0;
  for (const auto& g : block.generators()) d = std::max(d, additive_degree(g.phase));
  return d;
}

int defect_rank(const PhaseData& data) {
  int d = 0;
  for (const auto& b : data.blocks()) d = std::max(d, defect_rank(b));
  return d;
}

PhaseData direct_sum(std::span<const PhaseData> parts) {
  if (parts.empty()) throw StructuralError("direct sum of nothing");
  std::vector<PhaseBlock> blocks;
  const int p = parts.front().p();
  for (const auto& part : parts) {
    if (part.p() != p) {
      throw StructuralError("direct sum needs a common prime, got " + std::to_string(p) + " and " +
                            std::to_string(part.p()));
    }
    blocks.insert(blocks.end(), part.blocks().begin(), part.blocks().end());
  }
  return PhaseData(std::move(blocks));
}

PhaseData direct_sum(const PhaseData& a, const PhaseData& b) {
  const std::array<PhaseData, 2> parts{a, b};
  return direct_sum(std::span<const PhaseData>(parts));
}

PhaseData relabel(const PhaseData& data, std::span<const ModuleAutomorphism> automorphisms,
                  const std::vector<std::vector<std::size_t>>& order) {
  if (automorphisms.size() != data.block_count() || order.size() != data.block_count()) {
    throw StructuralError("relabel needs one automorphism and one ordering per block");
  }
  std::vector<PhaseBlock> blocks;
  for (std::size_t b = 0; b < data.block_count(); ++b) {
    const auto& block = data.block(b);
    const auto& alpha = automorphisms[b];
    const auto& perm = order[b];
    if (perm.size() != block.generators().size()) throw StructuralError("ordering has wrong length");
    std::vector<bool> seen(perm.size(), false);
    std::vector<PhaseGenerator> gens;
    for (auto i : perm) {
      if (i >= perm.size() || seen[i]) throw StructuralError("ordering is not a permutation");
      seen[i] = true;
      const auto& g = block.generators()[i];
      gens.push_back({{alpha.apply(g.translation.code)}, pullback(g.phase, alpha)});
    }
    blocks.emplace_back(block.module(), block.character(), std::move(gens));
  }
  return PhaseData(std::move(blocks));
}

}  // namespace phasebound
