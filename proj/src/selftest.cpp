#include "phasebound/selftest.hpp"

#include <functional>
#include <random>
#include <set>

#include "phasebound/config.hpp"
#include "phasebound/deformation.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/report.hpp"
#include "phasebound/sampling.hpp"

namespace phasebound {

namespace {

// A property returns an empty string on success, otherwise the failure detail.
using Check = std::function<std::string(std::mt19937_64&, int)>;

struct Property {
  const char* suite;
  const char* name;
  Check check;
};

std::string fail_if(bool bad, const std::string& what) { return bad ? what : std::string(); }

std::vector<PhaseData> samples(std::mt19937_64& rng, int count) {
  std::vector<PhaseData> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_phase_data(rng));
  return out;
}

std::string ring_square(std::mt19937_64&, int) {
  const TruncatedRing r(2, 4);
  const auto one_u = r.from_coeffs(std::vector<int>{1, 1, 0, 0});
  return fail_if(!(r.mul(one_u, one_u) == r.from_coeffs(std::vector<int>{1, 0, 1, 0})), "(1+u)^2 != 1+u^2");
}

std::string ring_axioms(std::mt19937_64& rng, int n) {
  for (int i = 0; i < n; ++i) {
    const auto r = sample_ring(rng);
    const auto a = sample_element(r, rng), b = sample_element(r, rng), c = sample_element(r, rng);
    if (!(r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)))) return "associativity fails in " + std::to_string(r.p());
    if (!(r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)))) return "distributivity fails";
    if (!(r.mul(a, b) == r.mul(b, a))) return "commutativity fails";
    if (r.radical_depth(r.mul(a, b)) < std::min(r.m(), r.radical_depth(a) + r.radical_depth(b))) {
      return "radical depth not superadditive";
    }
  }
  return {};
}

std::string character_threshold(std::mt19937_64& rng, int n) {
  for (int i = 0; i < n; ++i) {
    const auto r = sample_ring(rng);
    const auto chi = sample_character(r, rng);
    // Brute force: smallest s with chi vanishing on the ideal (u^s).
    int s = r.m();
    while (s > 0) {
      bool vanishes = true;
      for (std::uint32_t x = 0; x < r.size() && vanishes; ++x) {
        if (r.radical_depth_code(x) >= s - 1 && chi.eval_code(x) != 0) vanishes = false;
      }
      if (!vanishes) break;
      --s;
    }
    if (s != chi.invisible_threshold()) return "invisible threshold disagrees with scan";
  }
  return {};
}

std::string phase_degree(std::mt19937_64& rng, int n) {
  for (const auto& data : samples(rng, n)) {
    for (const auto& ref : data.generator_refs()) {
      const auto& phi = data.generator(ref).phase;
      const int d = additive_degree(phi);
      if (d > 2) return "sampled phase has degree " + std::to_string(d);
      if (quadratic_violation(phi.module(), phi.table())) return "sampled phase flagged non-quadratic";
    }
  }
  return {};
}

std::string phase_polarization(std::mt19937_64& rng, int n) {
  for (const auto& data : samples(rng, n)) {
    const auto& phi = data.generator({0, 0}).phase;
    const auto& module = phi.module();
    const auto b = polarize(phi);
    if (!b.biadditive()) return "polarization of a quadratic phase is not biadditive";
    std::uniform_int_distribution<std::uint32_t> pick(0, module.size() - 1);
    for (int k = 0; k < 16; ++k) {
      const auto x = pick(rng), y = pick(rng);
      const auto& ring = module.ring();
      const auto lhs = b.at_code(x, y);
      const auto rhs = ring.sub_code(derivative_table(module, phi.table(), y)[x], derivative_table(module, phi.table(), y)[0]);
      if (lhs != rhs) return "polarization differs from the derivative identity";
    }
  }
  return {};
}

std::string operator_homomorphism(std::mt19937_64& rng, int n) {
  for (const auto& data : samples(rng, n / 2)) {
    const auto& block = data.block(0);
    const auto& gens = block.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = 0; j < gens.size(); ++j) {
        const auto x = twisted_pair(gens[i]), y = twisted_pair(gens[j]);
        const auto lhs = realize_pair(data, 0, twisted_compose(block.module(), x, y));
        const auto rhs = compose(realize_pair(data, 0, x), realize_pair(data, 0, y));
        if (!(lhs == rhs)) return "realization is not multiplicative";
      }
    }
  }
  return {};
}

std::string operator_commutator(std::mt19937_64& rng, int n) {
  for (const auto& data : samples(rng, n / 2)) {
    const auto& block = data.block(0);
    const auto& phi = block.generators().front().phase;
    std::uniform_int_distribution<std::uint32_t> pick(0, block.module().size() - 1);
    const auto a = pick(rng);
    // [T_a, M_phi] is multiplication by chi(phi(x - a) - phi(x)) (shifted by T_a).
    const auto lhs = commutator(translation_operator(data, 0, a), multiplication_operator(data, 0, phi));
    if (!lhs.is_diagonal()) return "commutator of translation and multiplication is not diagonal";
    const auto expect = multiplication_operator(data, 0, additive_derivative(phi, ModuleElement{block.module().neg(a)}));
    if (!(lhs == expect)) return "commutator does not match the derivative";
  }
  return {};
}

std::string operator_signature(std::mt19937_64& rng, int n) {
  SamplingBounds small;
  small.max_rank = 1;
  for (int i = 0; i < n / 4; ++i) {
    const auto data = sample_phase_data(rng, small);
    try {
      const auto a = interaction_signature(data);
      const auto b = interaction_signature(random_relabeling(data, rng));
      if (!(a.fingerprint == b.fingerprint)) return "signature changed under relabeling";
    } catch (const SizeCapError&) {
    }
  }
  return {};
}

std::string boundary_bounds(std::mt19937_64& rng, int n) {
  for (const auto& data : samples(rng, n)) {
    const auto [k, k_ext] = boundary_depth(data);
    const int d = defect_rank(data);
    if (k < d) return "k < d";
    std::set<int> types;
    for (const auto& s : obstruction_strata(data)) types.insert(s.axiom_type);
    if (types.size() > 5) return "more than five axiom types";
    int m = 0;
    for (const auto& b : data.blocks()) m = std::max(m, b.ring().m());
    if (build_filtration(data).length() > d + m) return "filtration longer than d + m";
  }
  return {};
}

std::string boundary_invariance(std::mt19937_64& rng, int n) {
  for (const auto& data : samples(rng, n / 2)) {
    const auto base = boundary_depth(data);
    const auto strata = obstruction_strata(data);
    for (int i = 0; i < 3; ++i) {
      const auto q = random_relabeling(data, rng);
      if (!(boundary_depth(q) == base) || defect_rank(q) != defect_rank(data)) return "depths moved under relabeling";
      const auto qs = obstruction_strata(q);
      if (qs.size() != strata.size()) return "stratum count moved under relabeling";
      for (std::size_t j = 0; j < qs.size(); ++j) {
        if (qs[j].depth != strata[j].depth || qs[j].axiom_type != strata[j].axiom_type) return "strata moved under relabeling";
      }
    }
  }
  return {};
}

std::string boundary_kernel(std::mt19937_64& rng, int n, Fault fault) {
  AnalysisOptions options;
  options.fault = fault;
  if (!kernel_identity_holds(radical_example(), options)) return "membership differs from zero image on the radical example";
  for (const auto& data : samples(rng, n)) {
    if (!kernel_identity_holds(data, options)) return "membership differs from zero image";
  }
  return {};
}

std::string boundary_direct_sum(std::mt19937_64& rng, int n) {
  for (int i = 0; i < n / 4; ++i) {
    SamplingBounds b;
    b.primes = {2};
    const auto x = sample_phase_data(rng, b), y = sample_phase_data(rng, b);
    if (static_cast<std::uint64_t>(x.block(0).module().size()) * y.block(0).module().size() > kMaxModuleSize) continue;
    const auto s = direct_sum(x, y);
    if (boundary_depth(s).k != std::max(boundary_depth(x).k, boundary_depth(y).k)) return "k of a sum is not the max";
    if (obstruction_strata(s).size() != obstruction_strata(x).size() + obstruction_strata(y).size()) {
      return "strata of a sum are not the disjoint union";
    }
    if (!(island_phase(s) == direct_sum(island_phase(x), island_phase(y)))) return "island of a sum is not blockwise";
  }
  return {};
}

std::string boundary_example(std::mt19937_64&, int) {
  const auto data = radical_example();
  const auto r = analyze(data);
  if (r.defect_rank != 2 || r.boundary_depth != 4 || r.weak_extension_depth != 2) return "radical example depths";
  if (r.strata.size() != 2 || r.strata[0].depth != 3 || r.strata[1].depth != 4) return "radical example strata";
  if (r.strata[0].axiom_type != 3 || r.strata[1].axiom_type != 5) return "radical example axiom types";
  if (!r.first_trigger || *r.first_trigger != 3) return "radical example detector trigger";
  return {};
}

std::string deformation_island(std::mt19937_64& rng, int n) {
  auto all = samples(rng, n / 2);
  all.push_back(radical_example());
  for (const auto& data : all) {
    const auto set = enumerate_deformations(data);
    std::size_t expect = 1;
    for (const auto& s : set.strata) expect *= static_cast<std::size_t>(s.ambiguity_count);
    if (set.raw_count != expect || set.raw_count > set.bound) return "deformation count off";
    const auto island = island_phase(data);
    for (const auto& d : set.deformations) {
      if (!(island_phase(apply_deformation(data, d)) == island)) return "deformation " + d.pattern() + " moved the island";
      const auto active = std::count(d.activation.begin(), d.activation.end(), true);
      const auto kind = d.kind();
      if ((active == 0) != (kind == DeformationKind::trivial) || (active == 1) != (kind == DeformationKind::boundary)) {
        return "trichotomy mismatch";
      }
    }
  }
  return {};
}

std::string deformation_moduli(std::mt19937_64& rng, int) {
  const auto data = radical_example();
  std::vector<PhaseData> family;
  for (const auto& d : enumerate_deformations(data).deformations) family.push_back(apply_deformation(data, d));
  const auto g = moduli_groupoid(family);
  if (g.objects.size() != 4 || g.class_count > 4) return "moduli of the radical example";
  family.push_back(random_relabeling(family.front(), rng));
  const auto h = moduli_groupoid(family);
  if (h.class_count != g.class_count) return "class count moved when adding a relabeled duplicate";
  return {};
}

std::string cli_round_trip(std::mt19937_64& rng, int n) {
  for (const auto& data : samples(rng, n / 4)) {
    PhaseConfig cfg{data, {}, 16};
    const auto text = config_to_json(cfg).dump();
    const auto back = parse_config_text(text);
    if (!(back.data == data)) return "config echo does not re-parse to the same phase";
  }
  return {};
}

std::string cli_determinism(std::mt19937_64&, int) {
  PhaseConfig cfg{radical_example(), {}, 16};
  return fail_if(build_report(cfg).dump() != build_report(cfg).dump(), "report is not deterministic");
}

}  // namespace

std::vector<std::string> selftest_suites() {
  return {"ring-kernel", "phase-core", "operator-model", "boundary-calculus", "deformation-moduli", "cli-report"};
}

std::vector<PropertyResult> run_selftest(const SelftestOptions& options, std::ostream* log) {
  const Fault fault = options.fault;
  const std::vector<Property> props{
      {"ring-kernel", "square-of-one-plus-u", ring_square},
      {"ring-kernel", "ring-axioms", ring_axioms},
      {"ring-kernel", "invisible-threshold", character_threshold},
      {"phase-core", "degree-at-most-two", phase_degree},
      {"phase-core", "polarization", phase_polarization},
      {"operator-model", "homomorphism", operator_homomorphism},
      {"operator-model", "commutator-derivative", operator_commutator},
      {"operator-model", "signature-invariance", operator_signature},
      {"boundary-calculus", "k>=d", boundary_bounds},
      {"boundary-calculus", "invariance", boundary_invariance},
      {"boundary-calculus", "island=kernel", [fault](std::mt19937_64& r, int n) { return boundary_kernel(r, n, fault); }},
      {"boundary-calculus", "direct-sum", boundary_direct_sum},
      {"boundary-calculus", "radical-example", boundary_example},
      {"deformation-moduli", "island-preserved", deformation_island},
      {"deformation-moduli", "moduli-finite", deformation_moduli},
      {"cli-report", "round-trip", cli_round_trip},
      {"cli-report", "determinism", cli_determinism},
  };
  std::vector<PropertyResult> results;
  for (const auto& p : props) {
    const std::string suite = p.suite;
    if (!options.filter.empty() && suite.rfind(options.filter, 0) != 0) continue;
    std::mt19937_64 rng(options.seed);
    PropertyResult r{suite, p.name, true, {}};
    try {
      r.detail = p.check(rng, options.samples);
      r.ok = r.detail.empty();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    if (log) *log << (r.ok ? "ok    " : "FAIL  ") << r.suite << " " << r.name << (r.ok ? "" : ": " + r.detail) << "\n";
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace phasebound
