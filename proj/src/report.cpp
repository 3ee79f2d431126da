#include "phasebound/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

using nlohmann::ordered_json;

ordered_json signature_json(const InteractionSignature& sig) {
  ordered_json profile = ordered_json::array();
  for (const auto& [key, count] : sig.order_profile) {
    profile.push_back({{"order", key.first}, {"word_length", key.second}, {"count", count}});
  }
  return {{"fingerprint", sig.hex()}, {"group_order", sig.size}, {"order_profile", profile}};
}

ordered_json stratum_json(const PhaseData& data, const ObstructionStratum& s) {
  const auto& ring = data.block(s.block).ring();
  return {{"block", s.block},
          {"depth", s.depth},
          {"layer", s.layer},
          {"axiom_type", s.axiom_type},
          {"ambiguity_count", s.ambiguity_count},
          {"witness",
           {{"generator", s.witness.generator.index}, {"offset", ring_element_json(ring, s.witness.offset)}}},
          {"base_classes", s.base_classes},
          {"activated", s.activated()}};
}

namespace {

const char* kind_name(LevelKind k) { return k == LevelKind::derivative_order ? "derivative-order" : "value-layer"; }

ordered_json filtration_json(const Filtration& f) {
  ordered_json levels = ordered_json::array();
  for (const auto& lv : f.levels()) {
    ordered_json blocks = ordered_json::array();
    for (const auto& b : lv.blocks) blocks.push_back({{"kind", kind_name(b.kind)}, {"index", b.index}, {"size", b.size}});
    levels.push_back({{"depth", lv.depth}, {"nonzero", lv.nonzero}, {"blocks", blocks}});
  }
  return {{"length", f.length()}, {"levels", levels}};
}

ordered_json island_json(const PhaseData& data, const IslandSummary& island) {
  ordered_json members = ordered_json::array();
  const auto refs = data.generator_refs();
  for (std::size_t g = 0; g < refs.size(); ++g) {
    members.push_back({{"block", refs[g].block}, {"generator", refs[g].index}, {"member", static_cast<bool>(island.membership[g])}});
  }
  return {{"visible_threshold", island.visible_threshold},
          {"membership", members},
          {"island_is_strong", island.island_is_strong},
          {"phase", phase_to_json(island_phase(data))}};
}

ordered_json classification_json(const IslandInvariants& inv) {
  ordered_json out{{"defect_rank", inv.defect_rank}, {"length", inv.length}};
  if (inv.signature) {
    out["signature"] = signature_json(*inv.signature);
  } else {
    out["signature"] = nullptr;
    if (!inv.signature_error.empty()) out["signature_error"] = inv.signature_error;
  }
  return out;
}

ordered_json closure_json(const PhaseData& data, int depth_limit) {
  try {
    const auto c = generated_closure(data, depth_limit);
    ordered_json sizes = ordered_json::array();
    for (const auto& l : c.layers) sizes.push_back(l.size());
    ordered_json out{{"layer_sizes", sizes}, {"total", c.total}};
    out["stabilization_index"] = c.stabilization_index ? ordered_json(*c.stabilization_index) : ordered_json(nullptr);
    return out;
  } catch (const SizeCapError& e) {
    return {{"error", e.what()}};
  }
}

ordered_json deformation_summary(const PhaseData& data, const AnalysisOptions& options) {
  const auto set = enumerate_deformations(data, 1u << 16, options.axiom_table);
  std::map<std::string, int> kinds{{"trivial", 0}, {"boundary", 0}, {"combination", 0}};
  for (const auto& d : set.deformations) ++kinds[to_string(d.kind())];
  ordered_json out{{"strata", set.strata.size()},
                   {"pattern_count", set.pattern_count},
                   {"raw_count", set.raw_count},
                   {"bound", set.bound}};
  try {
    out["reduced_count"] = reduced_deformation_count(data, set);
  } catch (const SizeCapError& e) {
    out["reduced_count"] = nullptr;
    out["reduced_error"] = e.what();
  }
  out["kinds"] = {{"trivial", kinds["trivial"]}, {"boundary", kinds["boundary"]}, {"combination", kinds["combination"]}};
  return out;
}

ordered_json anatomy_json(const BoundaryReport& r) {
  ordered_json gen = ordered_json::array();
  for (int t = 1; t <= r.defect_rank; ++t) gen.push_back(t);
  std::vector<int> stratum_depths;
  for (const auto& s : r.strata) stratum_depths.push_back(s.depth);
  std::sort(stratum_depths.begin(), stratum_depths.end());
  stratum_depths.erase(std::unique(stratum_depths.begin(), stratum_depths.end()), stratum_depths.end());
  ordered_json rigid = ordered_json::array();
  for (int t = r.defect_rank + 1; t <= r.boundary_depth; ++t) {
    if (!std::binary_search(stratum_depths.begin(), stratum_depths.end(), t)) rigid.push_back(t);
  }
  ordered_json obstruction = ordered_json::array();
  std::map<int, std::vector<int>> by_type;
  for (const auto& s : r.strata) {
    obstruction.push_back({{"block", s.block}, {"depth", s.depth}, {"axiom_type", s.axiom_type}});
    by_type[s.axiom_type].push_back(s.depth);
  }
  ordered_json types = ordered_json::object();
  for (const auto& [t, depths] : by_type) types[std::to_string(t)] = depths;
  const char* regime = r.strata.empty() ? "strong" : "weak";
  return {{"regime", regime},
          {"defect_generation", {{"depths", gen}, {"defect_rank", r.defect_rank}}},
          {"rigid_extension", {{"depths", rigid}, {"weak_extension_depth", r.weak_extension_depth}}},
          {"boundary", {{"depth", r.boundary_depth}, {"stratum_depths", stratum_depths}}},
          {"obstruction", {{"strata", obstruction}, {"by_type", types}}}};
}

ordered_json analysis_report(const PhaseData& data, const PhaseConfig& config) {
  const auto r = analyze(data, config.options);
  if (r.boundary_depth < r.defect_rank) throw InvariantBreach("boundary depth below defect rank");
  if (!r.kernel_identity) throw InvariantBreach("island=kernel: island membership differs from zero quotient image");

  ordered_json doc;
  doc["schema"] = kReportSchema;
  PhaseConfig echo{data, config.options, config.depth_limit};
  doc["input"] = config_to_json(echo);

  ordered_json blocks = ordered_json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"defect_rank", b.defect_rank},
                      {"invisible_threshold", b.invisible_threshold},
                      {"boundary_depth", b.boundary_depth}});
  }
  doc["analysis"] = {{"defect_rank", r.defect_rank},
                     {"boundary_depth", r.boundary_depth},
                     {"weak_extension_depth", r.weak_extension_depth},
                     {"admissibility", r.admissibility == Admissibility::strong ? "strong" : "weak"},
                     {"blocks", blocks},
                     {"filtration", filtration_json(r.filtration)},
                     {"closure", closure_json(data, config.depth_limit)}};

  ordered_json strata = ordered_json::array();
  for (const auto& q : r.quotient) {
    auto sj = stratum_json(data, q.stratum);
    ordered_json classes = ordered_json::array();
    for (auto c : q.classes) classes.push_back(ring_element_json(data.block(q.stratum.block).ring(), c));
    ordered_json images = ordered_json::array();
    for (bool b : q.image_nonzero) images.push_back(b);
    sj["quotient"] = {{"classes", classes}, {"image_nonzero", images}};
    strata.push_back(sj);
  }
  doc["strata"] = strata;
  doc["island"] = island_json(data, r.island);
  doc["classification"] = classification_json(r.island.invariants);
  doc["kernel_identity"] = r.kernel_identity;
  doc["deformations"] = deformation_summary(data, config.options);
  doc["anatomy"] = anatomy_json(r);

  ordered_json detectors = ordered_json::array();
  for (const auto& d : r.detectors) {
    detectors.push_back({{"name", d.name}, {"depth", d.depth ? ordered_json(*d.depth) : ordered_json(nullptr)}, {"detail", d.detail}});
  }
  doc["detectors"] = {{"log", detectors}, {"first_trigger", r.first_trigger ? ordered_json(*r.first_trigger) : ordered_json(nullptr)}};
  return doc;
}

std::string depths_text(const ordered_json& arr) {
  if (arr.empty()) return "none";
  std::string out;
  for (const auto& v : arr) out += (out.empty() ? "" : ", ") + v.dump();
  return out;
}

}  // namespace

ordered_json build_report(const PhaseConfig& config) { return analysis_report(config.data, config); }

std::string render_text(const ordered_json& doc) {
  std::ostringstream out;
  const auto& a = doc.at("analysis");
  const auto& an = doc.at("anatomy");
  out << "phasebound report (" << doc.at("schema").get<std::string>() << ")\n";
  out << "  defect rank d          " << a.at("defect_rank") << "\n";
  out << "  boundary depth k       " << a.at("boundary_depth") << "\n";
  out << "  weak extension depth   " << a.at("weak_extension_depth") << "\n";
  out << "  admissibility          " << a.at("admissibility").get<std::string>() << "\n";
  out << "  filtration length L    " << a.at("filtration").at("length") << "\n";
  for (std::size_t b = 0; b < a.at("blocks").size(); ++b) {
    const auto& bl = a.at("blocks")[b];
    out << "  block " << b << ": d=" << bl.at("defect_rank") << " s=" << bl.at("invisible_threshold")
        << " k=" << bl.at("boundary_depth") << "\n";
  }

  out << "\nDefect generation\n";
  out << "  depths " << depths_text(an.at("defect_generation").at("depths")) << "\n";
  out << "\nRigid extension\n";
  out << "  depths " << depths_text(an.at("rigid_extension").at("depths")) << "\n";
  out << "\nBoundary\n";
  out << "  depth " << an.at("boundary").at("depth") << ", strata at "
      << depths_text(an.at("boundary").at("stratum_depths")) << "\n";
  out << "\nObstruction\n";
  if (doc.at("strata").empty()) out << "  none\n";
  for (const auto& s : doc.at("strata")) {
    out << "  B_" << s.at("depth") << " block " << s.at("block") << " layer " << s.at("layer") << " type "
        << s.at("axiom_type") << " ambiguity " << s.at("ambiguity_count")
        << (s.at("activated").get<bool>() ? " activated" : "") << "\n";
  }

  const auto& c = doc.at("classification");
  out << "\nIsland\n";
  std::size_t members = 0;
  for (const auto& m : doc.at("island").at("membership")) members += m.at("member").get<bool>() ? 1 : 0;
  out << "  members " << members << "/" << doc.at("island").at("membership").size() << "\n";
  out << "  triple (d=" << c.at("defect_rank") << ", L=" << c.at("length") << ", sigma=";
  if (c.at("signature").is_null()) {
    out << "unavailable";
  } else {
    out << c.at("signature").at("fingerprint").get<std::string>() << " |G|=" << c.at("signature").at("group_order");
  }
  out << ")\n";

  const auto& d = doc.at("deformations");
  out << "\nDeformations\n";
  out << "  patterns " << d.at("pattern_count") << ", raw " << d.at("raw_count") << ", reduced "
      << (d.at("reduced_count").is_null() ? std::string("n/a") : d.at("reduced_count").dump()) << ", bound "
      << d.at("bound") << "\n";

  out << "\nDetectors\n";
  for (const auto& det : doc.at("detectors").at("log")) {
    out << "  " << det.at("name").get<std::string>() << ": "
        << (det.at("depth").is_null() ? std::string("silent") : "depth " + det.at("depth").dump());
    if (!det.at("detail").get<std::string>().empty()) out << " (" << det.at("detail").get<std::string>() << ")";
    out << "\n";
  }
  return out.str();
}

ordered_json deformation_listing(const PhaseConfig& config) {
  const auto set = enumerate_deformations(config.data, 1u << 16, config.options.axiom_table);
  ordered_json strata = ordered_json::array();
  for (const auto& s : set.strata) strata.push_back(stratum_json(config.data, s));
  std::map<std::string, int> lift_counts;
  ordered_json list = ordered_json::array();
  for (const auto& d : set.deformations) {
    std::string bits;
    for (bool b : d.activation) bits.push_back(b ? '1' : '0');
    ++lift_counts[bits];
    list.push_back({{"pattern", d.pattern()}, {"activation", bits}, {"kind", to_string(d.kind())}});
  }
  ordered_json patterns = ordered_json::array();
  for (const auto& [bits, count] : lift_counts) patterns.push_back({{"activation", bits}, {"lift_choices", count}});
  ordered_json out{{"schema", kReportSchema}, {"strata", strata}, {"patterns", patterns}, {"deformations", list},
                   {"pattern_count", set.pattern_count}, {"raw_count", set.raw_count}, {"bound", set.bound}};
  try {
    out["reduced_count"] = reduced_deformation_count(config.data, set);
  } catch (const SizeCapError& e) {
    out["reduced_count"] = nullptr;
    out["reduced_error"] = e.what();
  }
  return out;
}

ordered_json deformed_report(const PhaseConfig& config, std::string_view pattern) {
  const auto d = deformation_from_pattern(config.data, pattern, config.options.axiom_table);
  const auto q = apply_deformation(config.data, d, config.options.axiom_table);
  if (!(island_phase(q) == island_phase(config.data))) throw InvariantBreach("deformation moved the rigidity island");
  auto doc = analysis_report(q, config);
  doc["deformation"] = {{"pattern", d.pattern()}, {"kind", to_string(d.kind())}};
  return doc;
}

ordered_json moduli_report(std::span<const PhaseData> family, const SignatureLimits& limits) {
  const auto g = moduli_groupoid(family, limits);
  ordered_json objects = ordered_json::array();
  for (std::size_t i = 0; i < g.objects.size(); ++i) {
    const auto& o = g.objects[i];
    std::string bits;
    for (bool b : o.pattern) bits.push_back(b ? '1' : '0');
    ordered_json strata = ordered_json::array();
    for (const auto& [depth, type] : o.strata) strata.push_back({{"depth", depth}, {"axiom_type", type}});
    objects.push_back({{"member", o.member},
                       {"class", g.class_of[i]},
                       {"triple", {{"defect_rank", o.triple.defect_rank}, {"length", o.triple.length},
                                   {"signature", o.triple.signature.hex()}}},
                       {"activation", bits},
                       {"strata", strata}});
  }
  ordered_json morphisms = ordered_json::array();
  for (const auto& m : g.morphisms) {
    morphisms.push_back({{"source", m.source}, {"target", m.target},
                         {"matrices", m.witness.matrices}, {"generator_map", m.witness.generator_map}});
  }
  return {{"schema", kReportSchema}, {"objects", objects}, {"morphisms", morphisms}, {"class_count", g.class_count}};
}

}  // namespace phasebound
