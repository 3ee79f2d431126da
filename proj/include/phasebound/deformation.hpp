#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasebound/boundary.hpp"
#include "phasebound/phase.hpp"

namespace phasebound {

/// Stable digest of phase data, used to tie a deformation to its base.
std::uint64_t phase_digest(const PhaseData& data);

enum class DeformationKind { trivial, boundary, combination };
const char* to_string(DeformationKind kind);

/// Activation pattern over the base's strata plus one lift per active stratum.
/// Lift c shifts every generator with a nonzero image in that stratum by the
/// constant c·w, w the layer's basis vector; c ranges over [1, ambiguity).
struct Deformation {
  std::uint64_t base_digest = 0;
  std::vector<bool> activation;
  std::vector<int> lifts;

  DeformationKind kind() const;
  /// '0' for inactive strata, otherwise the lift digit.
  std::string pattern() const;
  friend bool operator==(const Deformation&, const Deformation&) = default;
};

struct DeformationSet {
  std::vector<ObstructionStratum> strata;
  std::vector<Deformation> deformations;
  std::size_t pattern_count = 0;
  /// Number of (pattern, lift) choices; equals deformations.size().
  std::size_t raw_count = 0;
  /// prod over strata of (1 + ambiguity_count)
  std::size_t bound = 1;
};

/// Lists every deformation; throws SizeCapError beyond `max_listed`.
DeformationSet enumerate_deformations(const PhaseData& data, std::size_t max_listed = 1u << 16,
                                      const AxiomTable& table = kDefaultAxiomTable);

/// Parses a pattern string such as "10" (one digit per stratum).
Deformation deformation_from_pattern(const PhaseData& data, std::string_view pattern,
                                     const AxiomTable& table = kDefaultAxiomTable);

PhaseData apply_deformation(const PhaseData& data, const Deformation& deformation,
                            const AxiomTable& table = kDefaultAxiomTable);

struct IslandTriple {
  int defect_rank = 0;
  int length = 0;
  InteractionSignature signature;
  friend bool operator==(const IslandTriple&, const IslandTriple&) = default;
};

/// Throws NotAnIslandError when the input still has strata.
IslandTriple classify_island(const PhaseData& island, const SignatureLimits& limits = {});

struct EquivalenceLimits {
  std::uint32_t max_points = 256;
  std::size_t max_generators = 8;
  std::uint64_t max_matrices = std::uint64_t{1} << 20;
};

/// Explicit witness: per block an automorphism matrix (row-major) and the
/// target index of each source generator.
struct Relabeling {
  std::vector<std::vector<std::uint32_t>> matrices;
  std::vector<std::vector<std::size_t>> generator_map;
};

/// Searches module automorphisms and generator bijections carrying `from`
/// exactly onto `to`. Throws SizeCapError when the search space is over the caps.
std::optional<Relabeling> find_relabeling(const PhaseData& from, const PhaseData& to,
                                          const EquivalenceLimits& limits = {});

/// Equivalence-reduced count: deformed phases merged when a relabeling
/// connects them.
std::size_t reduced_deformation_count(const PhaseData& data, const DeformationSet& set,
                                      const EquivalenceLimits& limits = {});

struct ModuliObject {
  std::size_t member = 0;
  IslandTriple triple;
  std::vector<bool> pattern;
  /// (depth, axiom type) per stratum
  std::vector<std::pair<int, int>> strata;
};

struct ModuliMorphism {
  std::size_t source = 0;
  std::size_t target = 0;
  Relabeling witness;
};

struct ModuliGroupoid {
  std::vector<ModuliObject> objects;
  std::vector<ModuliMorphism> morphisms;
  std::vector<std::size_t> class_of;
  std::size_t class_count = 0;
};

ModuliGroupoid moduli_groupoid(std::span<const PhaseData> family, const SignatureLimits& signature_limits = {},
                               const EquivalenceLimits& limits = {});

}  // namespace phasebound
