#include "phasebound/boundary.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

constexpr std::size_t kMaxCommutatorsPerLevel = 64;

bool is_zero_table(std::span<const std::uint32_t> t) {
  return std::all_of(t.begin(), t.end(), [](std::uint32_t v) { return v == 0; });
}

std::vector<BlockProfile> profile_all(const PhaseData& data) {
  std::vector<BlockProfile> out;
  for (const auto& b : data.blocks()) out.push_back(profile_block(b));
  return out;
}

BlockLevel block_level(const PhaseBlock& block, const BlockProfile& prof, int t) {
  BlockLevel lvl;
  if (t <= prof.defect_rank) {
    lvl.kind = LevelKind::derivative_order;
    lvl.index = t;
    for (std::size_t i = 0; i < block.generators().size(); ++i) {
      const bool in = t == 0 ? !block.generators()[i].is_trivial() : prof.generator_degrees[i] >= t;
      lvl.size += in ? 1 : 0;
    }
  } else {
    lvl.kind = LevelKind::value_layer;
    lvl.index = prof.layer_of_depth(t);
    lvl.size = prof.invisible_span.dimension_from(lvl.index + 1);
  }
  lvl.nonzero = lvl.size > 0;
  return lvl;
}

int block_length(const PhaseBlock& block, const BlockProfile& prof) {
  int t = 0;
  while (block_level(block, prof, t).nonzero) ++t;
  return t;
}

std::vector<ObstructionStratum> block_strata(const PhaseBlock& block, std::size_t b, const BlockProfile& prof,
                                             const AxiomTable& table) {
  std::vector<ObstructionStratum> out;
  const auto& ring = block.ring();
  for (int j : prof.invisible_span.pivots()) {
    ObstructionStratum s;
    s.block = b;
    s.layer = j;
    s.depth = prof.depth_of_layer(j);
    s.axiom_type = table[static_cast<std::size_t>((s.depth - prof.defect_rank - 1) % 5)];
    s.ambiguity_count = ring.p();
    s.witness.offset = prof.invisible_span.basis_vector(j);
    bool found = false;
    for (std::size_t i = 0; i < block.generators().size(); ++i) {
      const auto& layers = prof.generator_layers[i];
      if (!found && std::find(layers.begin(), layers.end(), j) != layers.end()) {
        s.witness.generator = {b, i};
        found = true;
      }
      const auto r0 = invisible_remainder(prof, ring, block.generators()[i].phase.at_code(0));
      s.base_classes.push_back(prof.invisible_span.coordinate(r0, j));
    }
    if (!found) throw InvariantBreach("pivot layer without a generator image");
    out.push_back(std::move(s));
  }
  return out;
}

int block_boundary_depth(const BlockProfile& prof) {
  const auto piv = prof.invisible_span.pivots();
  if (piv.empty()) return prof.defect_rank;
  return std::max(prof.defect_rank, prof.depth_of_layer(piv.back()));
}

std::vector<int> image_layer_table(const BlockProfile& prof, const PhaseBlock& block, std::size_t gen, int j) {
  const auto& ring = block.ring();
  const auto& phi = block.generators()[gen].phase;
  std::vector<int> out(block.module().size());
  for (std::uint32_t x = 0; x < out.size(); ++x) {
    out[x] = prof.invisible_span.coordinate(invisible_remainder(prof, ring, phi.at_code(x)), j);
  }
  return out;
}

// -- detectors --------------------------------------------------------------

std::optional<int> defect_proliferation(const PhaseBlock& block, const BlockProfile& prof) {
  const auto& module = block.module();
  const auto& ring = block.ring();
  const auto dirs = module.additive_generators();
  LayeredSubspace seen(ring);
  std::vector<bool> inserted(ring.size(), false);
  auto absorb = [&](const std::vector<std::uint32_t>& t) {
    for (auto v : t) {
      const auto r = invisible_remainder(prof, ring, v);
      if (r != 0 && !inserted[r]) {
        inserted[r] = true;
        seen.insert(r);
      }
    }
  };
  for (const auto& g : block.generators()) {
    const std::vector<std::uint32_t> base(g.phase.table().begin(), g.phase.table().end());
    std::vector<std::vector<std::uint32_t>> frontier{base};
    std::vector<std::size_t> start{0};
    for (int order = 1; order <= prof.defect_rank; ++order) {
      std::vector<std::vector<std::uint32_t>> next;
      std::vector<std::size_t> next_start;
      for (std::size_t f = 0; f < frontier.size(); ++f) {
        for (std::size_t i = start[f]; i < dirs.size(); ++i) {
          auto d = derivative_table(module, frontier[f], dirs[i]);
          absorb(d);
          next.push_back(std::move(d));
          next_start.push_back(i);
        }
      }
      frontier = std::move(next);
      start = std::move(next_start);
    }
  }
  if (seen.empty()) return std::nullopt;
  return prof.depth_of_layer(seen.pivots().front());
}

std::optional<std::pair<int, int>> commutator_growth(const PhaseBlock& block, const BlockProfile& prof) {
  const auto& module = block.module();
  const auto& ring = block.ring();
  const auto& chi = block.character();
  std::vector<TwistedPair> gens;
  for (const auto& g : block.generators()) gens.push_back(twisted_pair(g));
  LayeredSubspace invisible(ring);
  std::optional<int> first_level;
  std::vector<TwistedPair> level = gens;
  for (int l = 1; l <= prof.defect_rank + 1 && !level.empty(); ++l) {
    std::vector<TwistedPair> next;
    for (const auto& x : level) {
      for (const auto& g : gens) {
        auto theta = twisted_commutator(module, x, g);
        if (is_zero_table(theta.values)) continue;
        if (std::find(next.begin(), next.end(), theta) != next.end()) continue;
        const bool erased =
            std::all_of(theta.values.begin(), theta.values.end(), [&](std::uint32_t v) { return chi.eval_code(v) == 0; });
        if (erased) {
          for (auto v : theta.values) {
            const auto r = invisible_remainder(prof, ring, v);
            if (r != 0) invisible.insert(r);
          }
          if (!invisible.empty() && !first_level) first_level = l;
        }
        if (next.size() < kMaxCommutatorsPerLevel) next.push_back(std::move(theta));
      }
    }
    level = std::move(next);
  }
  if (invisible.empty()) return std::nullopt;
  return std::make_pair(prof.depth_of_layer(invisible.pivots().front()), *first_level);
}

std::optional<int> filtration_stability(const PhaseBlock& block, std::size_t b, const BlockProfile& prof,
                                        std::mt19937_64& rng, const AxiomTable& table) {
  const auto alpha = ModuleAutomorphism::random(block.module(), rng);
  std::vector<PhaseGenerator> gens;
  for (const auto& g : block.generators()) gens.push_back({{alpha.apply(g.translation.code)}, pullback(g.phase, alpha)});
  const PhaseBlock moved(block.module(), block.character(), std::move(gens));
  const auto mprof = profile_block(moved);
  const auto strata = block_strata(block, b, prof, table);
  const auto mstrata = block_strata(moved, b, mprof, table);
  const int len = std::max(block_length(block, prof), block_length(moved, mprof));
  for (int t = 0; t <= len; ++t) {
    if (!(block_level(block, prof, t) == block_level(moved, mprof, t))) return t;
    auto at = [t](const std::vector<ObstructionStratum>& v) {
      std::vector<std::pair<int, int>> out;
      for (const auto& s : v) {
        if (s.depth == t) out.emplace_back(s.axiom_type, s.ambiguity_count);
      }
      return out;
    };
    if (at(strata) != at(mstrata)) return t;
  }
  return std::nullopt;
}

}  // namespace

std::uint64_t fnv_digest(std::span<const std::uint32_t> values) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto v : values) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Profiles

std::uint32_t invisible_remainder(const BlockProfile& profile, const TruncatedRing& ring, std::uint32_t value) {
  return ring.sub_code(value, ring.truncate_code(value, profile.boundary_threshold));
}

BlockProfile profile_block(const PhaseBlock& block) {
  const auto& ring = block.ring();
  BlockProfile prof{0, 0, 1, {}, LayeredSubspace(ring), {}};
  for (const auto& g : block.generators()) {
    prof.generator_degrees.push_back(additive_degree(g.phase));
    prof.defect_rank = std::max(prof.defect_rank, prof.generator_degrees.back());
  }
  prof.invisible_threshold = block.character().invisible_threshold();
  // rad^0 = R is not a radical layer; an invisible unit layer is not a boundary.
  prof.boundary_threshold = std::max(prof.invisible_threshold, 1);
  std::vector<bool> inserted(ring.size(), false);
  for (const auto& g : block.generators()) {
    for (auto v : g.phase.table()) {
      const auto r = invisible_remainder(prof, ring, v);
      if (r != 0 && !inserted[r]) {
        inserted[r] = true;
        prof.invisible_span.insert(r);
      }
    }
  }
  const auto pivots = prof.invisible_span.pivots();
  for (const auto& g : block.generators()) {
    std::vector<int> layers;
    for (int j : pivots) {
      for (auto v : g.phase.table()) {
        if (prof.invisible_span.coordinate(invisible_remainder(prof, ring, v), j) != 0) {
          layers.push_back(j);
          break;
        }
      }
    }
    prof.generator_layers.push_back(std::move(layers));
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Filtration

Filtration::Filtration(std::vector<FiltrationLevel> levels, std::vector<BlockProfile> profiles)
    : levels_(std::move(levels)), profiles_(std::move(profiles)) {}

bool Filtration::member(GeneratorRef ref, int depth) const {
  if (depth < 0 || depth >= static_cast<int>(levels_.size())) return false;
  const auto& prof = profiles_.at(ref.block);
  const auto& lvl = levels_[static_cast<std::size_t>(depth)].blocks.at(ref.block);
  if (lvl.kind == LevelKind::derivative_order) {
    return depth == 0 ? true : prof.generator_degrees.at(ref.index) >= depth;
  }
  const auto& layers = prof.generator_layers.at(ref.index);
  return std::any_of(layers.begin(), layers.end(), [&](int j) { return j > lvl.index; });
}

Filtration build_filtration(const PhaseData& data) {
  auto profiles = profile_all(data);
  int length = 0;
  for (std::size_t b = 0; b < data.block_count(); ++b) length = std::max(length, block_length(data.block(b), profiles[b]));
  std::vector<FiltrationLevel> levels;
  for (int t = 0; t <= length; ++t) {
    FiltrationLevel lvl;
    lvl.depth = t;
    for (std::size_t b = 0; b < data.block_count(); ++b) {
      lvl.blocks.push_back(block_level(data.block(b), profiles[b], t));
      lvl.nonzero = lvl.nonzero || lvl.blocks.back().nonzero;
    }
    levels.push_back(std::move(lvl));
  }
  return Filtration(std::move(levels), std::move(profiles));
}

// ---------------------------------------------------------------------------
// Strata and depth

bool ObstructionStratum::activated() const {
  return std::any_of(base_classes.begin(), base_classes.end(), [](int c) { return c != 0; });
}

std::optional<ObstructionStratum> detect_stratum(const PhaseData& data, std::size_t block, int depth,
                                                 const AxiomTable& table) {
  const auto& blk = data.block(block);
  const auto prof = profile_block(blk);
  if (depth <= prof.defect_rank) return std::nullopt;
  const int j = prof.layer_of_depth(depth);
  if (j >= blk.ring().m() || !prof.invisible_span.has_pivot(j)) return std::nullopt;
  for (auto& s : block_strata(blk, block, prof, table)) {
    if (s.layer == j) return s;
  }
  return std::nullopt;
}

std::optional<ObstructionStratum> detect_stratum(const PhaseData& data, int depth, const AxiomTable& table) {
  if (data.block_count() != 1) throw StructuralError("detect_stratum: name a block for direct sums");
  return detect_stratum(data, 0, depth, table);
}

std::vector<ObstructionStratum> obstruction_strata(const PhaseData& data, const AxiomTable& table) {
  std::vector<ObstructionStratum> out;
  for (std::size_t b = 0; b < data.block_count(); ++b) {
    auto s = block_strata(data.block(b), b, profile_block(data.block(b)), table);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

DepthPair boundary_depth(const PhaseData& data) {
  int d = 0;
  int k = 0;
  for (const auto& b : data.blocks()) {
    const auto prof = profile_block(b);
    d = std::max(d, prof.defect_rank);
    k = std::max(k, block_boundary_depth(prof));
  }
  return {k, k - d};
}

// ---------------------------------------------------------------------------
// Detectors

std::vector<DetectorResult> run_detectors(const PhaseData& data, const AnalysisOptions& options) {
  std::vector<DetectorResult> out;
  for (const auto* name : kDetectorNames) out.push_back({name, std::nullopt, ""});
  auto lower = [](std::optional<int>& slot, int v) {
    if (!slot || v < *slot) slot = v;
  };
  std::mt19937_64 rng(options.seed);
  for (std::size_t b = 0; b < data.block_count(); ++b) {
    const auto& block = data.block(b);
    const auto prof = profile_block(block);
    if (auto cg = commutator_growth(block, prof)) {
      const auto before = out[0].depth;
      lower(out[0].depth, cg->first);
      if (out[0].depth != before) {
        out[0].detail = "block " + std::to_string(b) + ": character-erased commutator at nesting level " +
                        std::to_string(cg->second);
      }
    }
    if (auto dp = defect_proliferation(block, prof)) {
      const auto before = out[1].depth;
      lower(out[1].depth, *dp);
      if (out[1].depth != before) out[1].detail = "block " + std::to_string(b) + ": invisible derivative data";
    }
    if (auto fs = filtration_stability(block, b, prof, rng, options.axiom_table)) {
      lower(out[2].depth, *fs);
      out[2].detail = "block " + std::to_string(b) + ": level changed under a module automorphism";
    }
    for (const auto& s : block_strata(block, b, prof, options.axiom_table)) {
      const auto before = out[3].depth;
      lower(out[3].depth, s.depth);
      if (out[3].depth != before) {
        out[3].detail = "block " + std::to_string(b) + ": " + std::to_string(s.ambiguity_count) +
                        " indistinguishable lifts in layer " + std::to_string(s.layer);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Island and quotient

PhaseData island_phase(const PhaseData& data) {
  std::vector<PhaseBlock> blocks;
  for (const auto& block : data.blocks()) {
    const auto& ring = block.ring();
    const int s = std::max(block.character().invisible_threshold(), 1);
    std::vector<PhaseGenerator> gens;
    for (const auto& g : block.generators()) {
      std::vector<std::uint32_t> t(g.phase.table().begin(), g.phase.table().end());
      for (auto& v : t) v = ring.truncate_code(v, s);
      gens.push_back({g.translation, QuadraticPhase::trusted(block.module(), std::move(t))});
    }
    blocks.emplace_back(block.module(), block.character(), std::move(gens));
  }
  return PhaseData(std::move(blocks));
}

std::pair<PhaseData, IslandSummary> rigidity_island(const PhaseData& data, const AnalysisOptions& options) {
  auto island = island_phase(data);
  IslandSummary summary;
  for (const auto& b : data.blocks()) summary.visible_threshold.push_back(std::max(b.character().invisible_threshold(), 1));
  bool dropped = false;
  for (const auto& ref : data.generator_refs()) {
    bool member = island.generator(ref).phase == data.generator(ref).phase;
    if (!member && options.fault == Fault::island_kernel && !dropped) {
      member = true;
      dropped = true;
    }
    summary.membership.push_back(member);
  }
  summary.invariants.defect_rank = defect_rank(island);
  summary.invariants.length = build_filtration(island).length();
  summary.island_is_strong = obstruction_strata(island).empty();
  if (options.compute_signature) {
    try {
      summary.invariants.signature = interaction_signature(island, options.signature_limits);
    } catch (const SizeCapError& e) {
      summary.invariants.signature_error = e.what();
    }
  }
  return {std::move(island), std::move(summary)};
}

std::vector<QuotientComponent> boundary_quotient(const PhaseData& data, const AxiomTable& table) {
  std::vector<QuotientComponent> out;
  for (std::size_t b = 0; b < data.block_count(); ++b) {
    const auto& block = data.block(b);
    const auto prof = profile_block(block);
    for (auto& s : block_strata(block, b, prof, table)) {
      QuotientComponent q;
      const auto w = prof.invisible_span.basis_vector(s.layer);
      for (int c = 0; c < block.ring().p(); ++c) q.classes.push_back(block.ring().codec().scale(c, w));
      for (std::size_t i = 0; i < block.generators().size(); ++i) {
        const auto img = image_layer_table(prof, block, i, s.layer);
        q.image_nonzero.push_back(std::any_of(img.begin(), img.end(), [](int v) { return v != 0; }));
        const std::vector<std::uint32_t> as_u(img.begin(), img.end());
        q.image_digest.push_back(fnv_digest(as_u));
      }
      q.stratum = std::move(s);
      out.push_back(std::move(q));
    }
  }
  return out;
}

namespace {

bool kernel_matches(const PhaseData& data, const IslandSummary& island, const std::vector<QuotientComponent>& quotient) {
  const auto refs = data.generator_refs();
  for (std::size_t g = 0; g < refs.size(); ++g) {
    bool zero_image = true;
    for (const auto& q : quotient) {
      if (q.stratum.block == refs[g].block && q.image_nonzero[refs[g].index]) zero_image = false;
    }
    if (zero_image != island.membership[g]) return false;
  }
  return true;
}

}  // namespace

bool kernel_identity_holds(const PhaseData& data, const AnalysisOptions& options) {
  AnalysisOptions light = options;
  light.compute_signature = false;
  const auto [island, summary] = rigidity_island(data, light);
  return kernel_matches(data, summary, boundary_quotient(data, options.axiom_table));
}

// ---------------------------------------------------------------------------
// Pipeline

BoundaryReport analyze(const PhaseData& data, const AnalysisOptions& options) {
  BoundaryReport r;
  const auto profiles = profile_all(data);
  for (std::size_t b = 0; b < data.block_count(); ++b) {
    const auto& prof = profiles[b];
    r.blocks.push_back({prof.defect_rank, prof.invisible_threshold, block_boundary_depth(prof)});
    r.defect_rank = std::max(r.defect_rank, prof.defect_rank);
    r.boundary_depth = std::max(r.boundary_depth, r.blocks.back().boundary_depth);
  }
  r.weak_extension_depth = r.boundary_depth - r.defect_rank;
  r.filtration = build_filtration(data);
  r.quotient = boundary_quotient(data, options.axiom_table);
  for (const auto& q : r.quotient) r.strata.push_back(q.stratum);
  r.admissibility = r.strata.empty() ? Admissibility::strong : Admissibility::weak;
  r.island = rigidity_island(data, options).second;
  r.kernel_identity = kernel_matches(data, r.island, r.quotient);
  if (options.run_detectors) {
    r.detectors = run_detectors(data, options);
    for (const auto& d : r.detectors) {
      if (d.depth && (!r.first_trigger || *d.depth < *r.first_trigger)) r.first_trigger = d.depth;
    }
  }
  return r;
}

}  // namespace phasebound
