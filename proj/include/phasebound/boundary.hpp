#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasebound/operators.hpp"
#include "phasebound/phase.hpp"
#include "phasebound/ring.hpp"

namespace phasebound {

/// Axiom index per post-defect depth offset (depth d+1, d+2, ...), cycled.
using AxiomTable = std::array<int, 5>;
inline constexpr AxiomTable kDefaultAxiomTable{3, 5, 1, 2, 4};

enum class Fault {
  none,
  /// Mutation hook for the self-test: drops the first non-member from the
  /// island-membership route so the kernel identity must fail.
  island_kernel,
};

struct AnalysisOptions {
  AxiomTable axiom_table = kDefaultAxiomTable;
  std::uint64_t seed = 0;
  bool compute_signature = true;
  bool run_detectors = true;
  SignatureLimits signature_limits{};
  Fault fault = Fault::none;
};

/// Per-block data every boundary operation is computed from.
///
/// The invisible remainder of a value v is v minus its truncation below the
/// boundary threshold s* = max(s, 1), where s is the character's invisible
/// threshold. W is the F_p-span of the remainders of all generator values;
/// its echelon pivots are the populated invisible layers.
struct BlockProfile {
  int defect_rank = 0;
  int invisible_threshold = 0;
  int boundary_threshold = 1;
  std::vector<int> generator_degrees;
  LayeredSubspace invisible_span;
  /// For each generator, the pivots of W on which its image is nonzero.
  std::vector<std::vector<int>> generator_layers;

  /// Depth at which layer j (a pivot of W) is tested.
  int depth_of_layer(int j) const { return defect_rank + 1 + (j - boundary_threshold); }
  int layer_of_depth(int t) const { return boundary_threshold + t - defect_rank - 1; }
};

BlockProfile profile_block(const PhaseBlock& block);
/// φ(x) minus its truncation below s*.
std::uint32_t invisible_remainder(const BlockProfile& profile, const TruncatedRing& ring, std::uint32_t value);

enum class LevelKind { derivative_order, value_layer };

struct BlockLevel {
  LevelKind kind = LevelKind::derivative_order;
  /// Derivative order t, or the radical layer j peeled off between depth t−1 and t.
  int index = 0;
  /// Generators of degree >= t, or dim(W ∩ rad^(j+1)) for value layers.
  int size = 0;
  bool nonzero = false;
  friend bool operator==(const BlockLevel&, const BlockLevel&) = default;
};

struct FiltrationLevel {
  int depth = 0;
  bool nonzero = false;
  std::vector<BlockLevel> blocks;
  friend bool operator==(const FiltrationLevel&, const FiltrationLevel&) = default;
};

/// P^(0) ⊇ P^(1) ⊇ ... ⊇ P^(L) = 0. Depths t <= d are cut out by derivative
/// order; deeper ones by the invisible value layers still to be peeled.
class Filtration {
 public:
  Filtration(std::vector<FiltrationLevel> levels, std::vector<BlockProfile> profiles);

  const std::vector<FiltrationLevel>& levels() const { return levels_; }
  int length() const { return static_cast<int>(levels_.size()) - 1; }
  /// Whether generator `ref` contributes to P^(t).
  bool member(GeneratorRef ref, int depth) const;

 private:
  std::vector<FiltrationLevel> levels_;
  std::vector<BlockProfile> profiles_;
};

Filtration build_filtration(const PhaseData& data);

struct StratumWitness {
  GeneratorRef generator;
  /// φ and φ + offset realize the same operator but differ in the layer.
  std::uint32_t offset = 0;
  friend bool operator==(const StratumWitness&, const StratumWitness&) = default;
};

struct ObstructionStratum {
  std::size_t block = 0;
  int depth = 0;
  int layer = 0;
  int axiom_type = 0;
  int ambiguity_count = 0;
  StratumWitness witness;
  /// Layer coordinate of each block generator's remainder at x = 0.
  std::vector<int> base_classes;

  bool activated() const;
  friend bool operator==(const ObstructionStratum&, const ObstructionStratum&) = default;
};

std::optional<ObstructionStratum> detect_stratum(const PhaseData& data, std::size_t block, int depth,
                                                 const AxiomTable& table = kDefaultAxiomTable);
std::optional<ObstructionStratum> detect_stratum(const PhaseData& data, int depth,
                                                 const AxiomTable& table = kDefaultAxiomTable);
/// All nonzero strata, ordered by (block, depth).
std::vector<ObstructionStratum> obstruction_strata(const PhaseData& data, const AxiomTable& table = kDefaultAxiomTable);

struct DepthPair {
  int k = 0;
  int k_ext = 0;
  friend bool operator==(const DepthPair&, const DepthPair&) = default;
};
DepthPair boundary_depth(const PhaseData& data);

struct DetectorResult {
  std::string name;
  std::optional<int> depth;
  std::string detail;
};

inline constexpr std::array<const char*, 4> kDetectorNames{"commutator-growth", "defect-proliferation",
                                                           "filtration-stability", "extension-ambiguity"};

std::vector<DetectorResult> run_detectors(const PhaseData& data, const AnalysisOptions& options = {});

struct IslandInvariants {
  int defect_rank = 0;
  int length = 0;
  std::optional<InteractionSignature> signature;
  std::string signature_error;
};

struct IslandSummary {
  std::vector<int> visible_threshold;
  /// Indexed like PhaseData::generator_refs().
  std::vector<bool> membership;
  IslandInvariants invariants;
  bool island_is_strong = true;
};

/// Island generators are (a, φ truncated below s*): same operators, no strata.
std::pair<PhaseData, IslandSummary> rigidity_island(const PhaseData& data, const AnalysisOptions& options = {});
PhaseData island_phase(const PhaseData& data);

struct QuotientComponent {
  ObstructionStratum stratum;
  /// The ambiguity classes c·w for c in [0, p): lifts that differ only in the layer.
  std::vector<std::uint32_t> classes;
  /// Per block generator: whether its image in this stratum is nonzero.
  std::vector<bool> image_nonzero;
  /// Per block generator: FNV digest of the image table x -> layer coordinate.
  std::vector<std::uint64_t> image_digest;
};

std::vector<QuotientComponent> boundary_quotient(const PhaseData& data, const AxiomTable& table = kDefaultAxiomTable);

/// Generator-level: island membership equals zero image in every stratum.
bool kernel_identity_holds(const PhaseData& data, const AnalysisOptions& options = {});

enum class Admissibility { strong, weak };

struct BlockDepths {
  int defect_rank = 0;
  int invisible_threshold = 0;
  int boundary_depth = 0;
};

struct BoundaryReport {
  int defect_rank = 0;
  int boundary_depth = 0;
  int weak_extension_depth = 0;
  Admissibility admissibility = Admissibility::strong;
  std::vector<BlockDepths> blocks;
  Filtration filtration{{}, {}};
  std::vector<ObstructionStratum> strata;
  std::vector<QuotientComponent> quotient;
  IslandSummary island;
  std::vector<DetectorResult> detectors;
  /// Smallest depth at which any detector fired.
  std::optional<int> first_trigger;
  bool kernel_identity = true;
};

BoundaryReport analyze(const PhaseData& data, const AnalysisOptions& options = {});

std::uint64_t fnv_digest(std::span<const std::uint32_t> values);

}  // namespace phasebound
