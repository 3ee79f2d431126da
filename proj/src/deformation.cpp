#include "phasebound/deformation.hpp"

#include <algorithm>

#include "phasebound/errors.hpp"

namespace phasebound {

std::uint64_t phase_digest(const PhaseData& data) {
  std::vector<std::uint32_t> words;
  for (const auto& b : data.blocks()) {
    words.push_back(static_cast<std::uint32_t>(b.ring().p()));
    words.push_back(static_cast<std::uint32_t>(b.ring().m()));
    words.push_back(static_cast<std::uint32_t>(b.module().rank()));
    for (int w : b.character().weights()) words.push_back(static_cast<std::uint32_t>(w));
    words.push_back(static_cast<std::uint32_t>(b.generators().size()));
    for (const auto& g : b.generators()) {
      words.push_back(g.translation.code);
      words.insert(words.end(), g.phase.table().begin(), g.phase.table().end());
    }
  }
  return fnv_digest(words);
}

const char* to_string(DeformationKind kind) {
  switch (kind) {
    case DeformationKind::trivial:
      return "trivial";
    case DeformationKind::boundary:
      return "boundary";
    case DeformationKind::combination:
      return "combination";
  }
  return "?";
}

DeformationKind Deformation::kind() const {
  const auto active = std::count(activation.begin(), activation.end(), true);
  if (active == 0) return DeformationKind::trivial;
  if (active == 1) return DeformationKind::boundary;
  return DeformationKind::combination;
}

std::string Deformation::pattern() const {
  std::string out;
  for (std::size_t i = 0; i < activation.size(); ++i) out.push_back(activation[i] ? static_cast<char>('0' + lifts[i]) : '0');
  return out;
}

DeformationSet enumerate_deformations(const PhaseData& data, std::size_t max_listed, const AxiomTable& table) {
  DeformationSet set;
  set.strata = obstruction_strata(data, table);
  const std::size_t n = set.strata.size();
  if (n >= 63) throw SizeCapError("too many strata to enumerate activation patterns");
  const auto digest = phase_digest(data);
  for (const auto& s : set.strata) set.bound *= static_cast<std::size_t>(1 + s.ambiguity_count);
  set.pattern_count = std::size_t{1} << n;

  // Odometer over lifts: digit i in [0, ambiguity_i), 0 meaning inactive.
  std::vector<int> digits(n, 0);
  for (;;) {
    if (set.deformations.size() >= max_listed) throw SizeCapError("deformation enumeration exceeds cap");
    Deformation d;
    d.base_digest = digest;
    for (std::size_t i = 0; i < n; ++i) {
      d.activation.push_back(digits[i] != 0);
      d.lifts.push_back(digits[i]);
    }
    set.deformations.push_back(std::move(d));
    std::size_t i = 0;
    while (i < n && ++digits[i] == set.strata[i].ambiguity_count) digits[i++] = 0;
    if (i == n) break;
  }
  set.raw_count = set.deformations.size();
  return set;
}

Deformation deformation_from_pattern(const PhaseData& data, std::string_view pattern, const AxiomTable& table) {
  const auto strata = obstruction_strata(data, table);
  if (pattern.size() != strata.size()) {
    throw StructuralError("pattern has " + std::to_string(pattern.size()) + " digits but the phase has " +
                          std::to_string(strata.size()) + " strata");
  }
  Deformation d;
  d.base_digest = phase_digest(data);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char ch = pattern[i];
    if (ch < '0' || ch > '9') throw StructuralError("pattern digits must be 0-9");
    const int c = ch - '0';
    d.activation.push_back(c != 0);
    d.lifts.push_back(c);
  }
  return d;
}

PhaseData apply_deformation(const PhaseData& data, const Deformation& deformation, const AxiomTable& table) {
  if (deformation.base_digest != phase_digest(data)) throw StructuralError("deformation belongs to a different phase");
  const auto strata = obstruction_strata(data, table);
  if (deformation.activation.size() != strata.size() || deformation.lifts.size() != strata.size()) {
    throw StructuralError("activation pattern length does not match the stratum count");
  }
  std::vector<std::vector<PhaseGenerator>> gens;
  std::vector<BlockProfile> profiles;
  for (const auto& b : data.blocks()) {
    gens.push_back(b.generators());
    profiles.push_back(profile_block(b));
  }
  for (std::size_t i = 0; i < strata.size(); ++i) {
    if (!deformation.activation[i]) continue;
    const auto& s = strata[i];
    const int c = deformation.lifts[i];
    if (c < 1 || c >= s.ambiguity_count) {
      throw StructuralError("lift " + std::to_string(c) + " out of range for stratum at depth " + std::to_string(s.depth));
    }
    const auto& prof = profiles[s.block];
    const auto& ring = data.block(s.block).ring();
    const auto offset = ring.codec().scale(c, prof.invisible_span.basis_vector(s.layer));
    for (std::size_t g = 0; g < gens[s.block].size(); ++g) {
      const auto& layers = prof.generator_layers[g];
      if (std::find(layers.begin(), layers.end(), s.layer) == layers.end()) continue;
      gens[s.block][g].phase = shift(gens[s.block][g].phase, offset);
    }
  }
  std::vector<PhaseBlock> blocks;
  for (std::size_t b = 0; b < data.block_count(); ++b) {
    blocks.emplace_back(data.block(b).module(), data.block(b).character(), std::move(gens[b]));
  }
  return PhaseData(std::move(blocks));
}

IslandTriple classify_island(const PhaseData& island, const SignatureLimits& limits) {
  const auto strata = obstruction_strata(island);
  if (!strata.empty()) {
    throw NotAnIslandError("phase has " + std::to_string(strata.size()) + " obstruction strata; not an island");
  }
  return {defect_rank(island), build_filtration(island).length(), interaction_signature(island, limits)};
}

// ---------------------------------------------------------------------------
// Relabeling search

namespace {

std::optional<std::pair<std::vector<std::uint32_t>, std::vector<std::size_t>>> match_block(
    const PhaseBlock& from, const PhaseBlock& to, const EquivalenceLimits& limits) {
  if (!(from.module() == to.module()) || !(from.character() == to.character()) ||
      from.generators().size() != to.generators().size()) {
    return std::nullopt;
  }
  const auto& module = from.module();
  const auto& ring = module.ring();
  if (module.size() > limits.max_points) throw SizeCapError("relabeling search: |A| over cap");
  if (from.generators().size() > limits.max_generators) throw SizeCapError("relabeling search: too many generators");
  const int n = module.rank();
  const auto cells = static_cast<std::size_t>(n * n);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    total *= ring.size();
    if (total > limits.max_matrices) throw SizeCapError("relabeling search: matrix space over cap");
  }

  std::vector<std::uint32_t> target_translations;
  for (const auto& g : to.generators()) target_translations.push_back(g.translation.code);
  std::sort(target_translations.begin(), target_translations.end());

  auto apply = [&](const std::vector<std::uint32_t>& mat, std::uint32_t x) {
    std::vector<std::uint32_t> ys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::uint32_t acc = 0;
      for (int j = 0; j < n; ++j) {
        acc = ring.add_code(acc, ring.mul_code(mat[static_cast<std::size_t>(i * n + j)], module.component_code(x, j)));
      }
      ys[static_cast<std::size_t>(i)] = acc;
    }
    return module.make_codes(ys).code;
  };

  std::vector<std::uint32_t> mat(cells, 0);
  for (std::uint64_t counter = 0; counter < total; ++counter) {
    std::uint64_t c = counter;
    for (auto& e : mat) {
      e = static_cast<std::uint32_t>(c % ring.size());
      c /= ring.size();
    }
    if (!ModuleAutomorphism::invertible(module, mat)) continue;
    std::vector<std::uint32_t> moved;
    for (const auto& g : from.generators()) moved.push_back(apply(mat, g.translation.code));
    std::sort(moved.begin(), moved.end());
    if (moved != target_translations) continue;

    const ModuleAutomorphism alpha(module, mat);
    std::vector<std::size_t> assignment;
    std::vector<bool> used(to.generators().size(), false);
    bool ok = true;
    for (const auto& g : from.generators()) {
      const PhaseGenerator image{{alpha.apply(g.translation.code)}, pullback(g.phase, alpha)};
      bool found = false;
      for (std::size_t t = 0; t < to.generators().size(); ++t) {
        if (!used[t] && to.generators()[t] == image) {
          used[t] = true;
          assignment.push_back(t);
          found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (ok) return std::make_pair(mat, assignment);
  }
  return std::nullopt;
}

}  // namespace

std::optional<Relabeling> find_relabeling(const PhaseData& from, const PhaseData& to, const EquivalenceLimits& limits) {
  if (from.block_count() != to.block_count()) return std::nullopt;
  Relabeling r;
  for (std::size_t b = 0; b < from.block_count(); ++b) {
    auto m = match_block(from.block(b), to.block(b), limits);
    if (!m) return std::nullopt;
    r.matrices.push_back(std::move(m->first));
    r.generator_map.push_back(std::move(m->second));
  }
  return r;
}

std::size_t reduced_deformation_count(const PhaseData& data, const DeformationSet& set, const EquivalenceLimits& limits) {
  std::vector<PhaseData> reps;
  for (const auto& d : set.deformations) {
    auto q = apply_deformation(data, d);
    bool merged = false;
    for (const auto& r : reps) {
      if (find_relabeling(q, r, limits)) {
        merged = true;
        break;
      }
    }
    if (!merged) reps.push_back(std::move(q));
  }
  return reps.size();
}

ModuliGroupoid moduli_groupoid(std::span<const PhaseData> family, const SignatureLimits& signature_limits,
                               const EquivalenceLimits& limits) {
  ModuliGroupoid g;
  AnalysisOptions light;
  light.compute_signature = false;
  light.run_detectors = false;
  for (std::size_t i = 0; i < family.size(); ++i) {
    ModuliObject obj;
    obj.member = i;
    obj.triple = classify_island(island_phase(family[i]), signature_limits);
    for (const auto& s : obstruction_strata(family[i])) {
      obj.pattern.push_back(s.activated());
      obj.strata.emplace_back(s.depth, s.axiom_type);
    }
    g.objects.push_back(std::move(obj));
  }
  // Each object joins the first earlier class representative it is connected to.
  std::vector<std::size_t> representatives;
  g.class_of.assign(g.objects.size(), 0);
  for (std::size_t i = 0; i < g.objects.size(); ++i) {
    const auto& oi = g.objects[i];
    bool joined = false;
    for (std::size_t c = 0; c < representatives.size() && !joined; ++c) {
      const auto& oj = g.objects[representatives[c]];
      if (!(oi.triple == oj.triple) || oi.pattern != oj.pattern || oi.strata != oj.strata) continue;
      if (auto w = find_relabeling(family[i], family[representatives[c]], limits)) {
        g.morphisms.push_back({i, representatives[c], std::move(*w)});
        g.class_of[i] = c;
        joined = true;
      }
    }
    if (!joined) {
      g.class_of[i] = representatives.size();
      representatives.push_back(i);
    }
  }
  g.class_count = representatives.size();
  return g;
}

}  // namespace phasebound
