#include "phasebound/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string at(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void allow_keys(const json& obj, const std::string& path, std::set<std::string> keys) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "$" : path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) throw ConfigError(at(path, k), "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(at(path, key), "missing required field");
  return obj.at(key);
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<long long>();
}

std::uint32_t ring_code(const TruncatedRing& ring, const json& v, const std::string& path) {
  std::vector<int> coeffs(static_cast<std::size_t>(ring.m()), 0);
  if (v.is_number_integer()) {
    const auto c = v.get<long long>();
    if (c < 0 || c >= ring.p()) throw ConfigError(path, "coefficient out of range [0, p)");
    coeffs[0] = static_cast<int>(c);
  } else if (v.is_array()) {
    if (v.size() > static_cast<std::size_t>(ring.m())) throw ConfigError(path, "more than m coefficients");
    for (std::size_t j = 0; j < v.size(); ++j) {
      const auto c = integer(v[j], at(path, j));
      if (c < 0 || c >= ring.p()) throw ConfigError(at(path, j), "coefficient out of range [0, p)");
      coeffs[j] = static_cast<int>(c);
    }
  } else {
    throw ConfigError(path, "expected a coefficient array");
  }
  return ring.from_coeffs(coeffs).code;
}

std::vector<std::uint32_t> ring_vector(const TruncatedRing& ring, const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array() || v.size() != n) throw ConfigError(path, "expected an array of length " + std::to_string(n));
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(ring_code(ring, v[i], at(path, i)));
  return out;
}

QuadraticPhase parse_phase(const FiniteModule& module, const json& v, const std::string& path) {
  allow_keys(v, path, {"gram", "linear", "constant", "table"});
  const auto& ring = module.ring();
  const auto n = static_cast<std::size_t>(module.rank());
  std::optional<QuadraticPhase> structured;
  if (v.contains("gram") || v.contains("linear") || v.contains("constant")) {
    StructuredForm form;
    form.gram.assign(n * n, ring.zero());
    form.linear.assign(n, ring.zero());
    form.constant = ring.zero();
    if (v.contains("gram")) {
      const auto& g = v.at("gram");
      const auto gp = at(path, "gram");
      if (!g.is_array() || g.size() != n) throw ConfigError(gp, "expected " + std::to_string(n) + " rows");
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = ring_vector(ring, g[i], n, at(gp, i));
        for (std::size_t j = 0; j < n; ++j) form.gram[i * n + j] = ring.element(row[j]);
      }
    }
    if (v.contains("linear")) {
      const auto lin = ring_vector(ring, v.at("linear"), n, at(path, "linear"));
      for (std::size_t i = 0; i < n; ++i) form.linear[i] = ring.element(lin[i]);
    }
    if (v.contains("constant")) form.constant = ring.element(ring_code(ring, v.at("constant"), at(path, "constant")));
    structured = QuadraticPhase::from_form(module, std::move(form));
  }
  if (!v.contains("table")) return structured ? *structured : QuadraticPhase::zero(module);

  const auto tp = at(path, "table");
  auto codes = ring_vector(ring, v.at("table"), module.size(), tp);
  if (structured) {
    for (std::uint32_t x = 0; x < module.size(); ++x) {
      if (codes[x] != structured->at_code(x)) {
        throw ConfigError(at(tp, x), "table disagrees with the structured form");
      }
    }
    return *structured;
  }
  try {
    return QuadraticPhase::from_table(module, std::move(codes));
  } catch (const NotQuadraticError& e) {
    throw ConfigError(tp, e.what());
  }
}

PhaseBlock parse_block(const json& v, const std::string& path) {
  allow_keys(v, path, {"ring", "rank", "character", "generators"});
  const auto& r = require(v, path, "ring");
  const auto rp = at(path, "ring");
  allow_keys(r, rp, {"p", "m"});
  const auto p = integer(require(r, rp, "p"), at(rp, "p"));
  if (!is_small_prime(static_cast<int>(p)) || p > 7) throw ConfigError(at(rp, "p"), "p must be one of 2, 3, 5, 7");
  const auto m = integer(require(r, rp, "m"), at(rp, "m"));
  if (m < 1 || m > kMaxDigits) throw ConfigError(at(rp, "m"), "m must lie in [1, 16]");
  const auto n = v.contains("rank") ? integer(v.at("rank"), at(path, "rank")) : 1;
  if (n < 1 || n > kMaxDigits) throw ConfigError(at(path, "rank"), "rank must lie in [1, 16]");
  std::uint64_t size = 1;
  for (long long i = 0; i < m * n; ++i) {
    size *= static_cast<std::uint64_t>(p);
    if (size > kMaxModuleSize) throw SizeCapError(rp + ": p^(m*rank) exceeds 65536");
  }
  const TruncatedRing ring(static_cast<int>(p), static_cast<int>(m));
  const FiniteModule module(ring, static_cast<int>(n));

  const auto& c = require(v, path, "character");
  const auto cp = at(path, "character");
  allow_keys(c, cp, {"weights"});
  const auto& w = require(c, cp, "weights");
  const auto wp = at(cp, "weights");
  if (!w.is_array() || w.size() != static_cast<std::size_t>(m)) throw ConfigError(wp, "expected m weights");
  std::vector<int> weights;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const auto x = integer(w[j], at(wp, j));
    if (x < 0 || x >= p) throw ConfigError(at(wp, j), "weight out of range [0, p)");
    weights.push_back(static_cast<int>(x));
  }

  const auto& gs = require(v, path, "generators");
  const auto gp = at(path, "generators");
  if (!gs.is_array()) throw ConfigError(gp, "expected an array");
  std::vector<PhaseGenerator> gens;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const auto ip = at(gp, i);
    allow_keys(gs[i], ip, {"translation", "phase"});
    ModuleElement a{0};
    if (gs[i].contains("translation")) {
      a = module.make_codes(ring_vector(ring, gs[i].at("translation"), static_cast<std::size_t>(n), at(ip, "translation")));
    }
    auto phase = gs[i].contains("phase") ? parse_phase(module, gs[i].at("phase"), at(ip, "phase"))
                                         : QuadraticPhase::zero(module);
    gens.push_back({a, std::move(phase)});
  }
  return PhaseBlock(module, AdditiveCharacter(ring, std::move(weights)), std::move(gens));
}

void parse_options(const json& v, PhaseConfig& cfg) {
  const std::string path = "options";
  allow_keys(v, path, {"seed", "axiom_table", "signature", "depth_limit", "signature_cap"});
  if (v.contains("seed")) {
    const auto s = integer(v.at("seed"), "options.seed");
    if (s < 0) throw ConfigError("options.seed", "seed must be non-negative");
    cfg.options.seed = static_cast<std::uint64_t>(s);
  }
  if (v.contains("axiom_table")) {
    const auto& t = v.at("axiom_table");
    if (!t.is_array() || t.size() != 5) throw ConfigError("options.axiom_table", "expected 5 axiom indices");
    for (std::size_t i = 0; i < 5; ++i) {
      const auto x = integer(t[i], at("options.axiom_table", i));
      if (x < 1 || x > 5) throw ConfigError(at("options.axiom_table", i), "axiom index must lie in [1, 5]");
      cfg.options.axiom_table[i] = static_cast<int>(x);
    }
  }
  if (v.contains("signature")) {
    if (!v.at("signature").is_boolean()) throw ConfigError("options.signature", "expected a boolean");
    cfg.options.compute_signature = v.at("signature").get<bool>();
  }
  if (v.contains("depth_limit")) {
    const auto d = integer(v.at("depth_limit"), "options.depth_limit");
    if (d < 1 || d > 64) throw ConfigError("options.depth_limit", "depth limit must lie in [1, 64]");
    cfg.depth_limit = static_cast<int>(d);
  }
  if (v.contains("signature_cap")) {
    const auto& c = v.at("signature_cap");
    allow_keys(c, "options.signature_cap", {"max_group", "max_generators"});
    if (c.contains("max_group")) {
      const auto g = integer(c.at("max_group"), "options.signature_cap.max_group");
      if (g < 1 || g > 65536) throw ConfigError("options.signature_cap.max_group", "must lie in [1, 65536]");
      cfg.options.signature_limits.max_group = static_cast<std::size_t>(g);
    }
    if (c.contains("max_generators")) {
      const auto g = integer(c.at("max_generators"), "options.signature_cap.max_generators");
      if (g < 1 || g > 8) throw ConfigError("options.signature_cap.max_generators", "must lie in [1, 8]");
      cfg.options.signature_limits.max_generators = static_cast<std::size_t>(g);
    }
  }
}

}  // namespace

PhaseConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "expected a JSON object");
  const auto& schema = require(doc, "", "schema");
  if (!schema.is_string() || schema.get<std::string>() != kConfigSchema) {
    throw ConfigError("schema", std::string("expected \"") + kConfigSchema + "\"");
  }
  std::vector<PhaseBlock> blocks;
  if (doc.contains("blocks")) {
    allow_keys(doc, "", {"schema", "blocks", "options"});
    const auto& bs = doc.at("blocks");
    if (!bs.is_array() || bs.empty()) throw ConfigError("blocks", "expected a non-empty array");
    for (std::size_t i = 0; i < bs.size(); ++i) blocks.push_back(parse_block(bs[i], at("blocks", i)));
    for (std::size_t i = 1; i < blocks.size(); ++i) {
      if (blocks[i].ring().p() != blocks[0].ring().p()) throw ConfigError(at("blocks", i) + ".ring.p", "all blocks must share p");
    }
  } else {
    allow_keys(doc, "", {"schema", "ring", "rank", "character", "generators", "options"});
    json block = json::object();
    for (const char* k : {"ring", "rank", "character", "generators"}) {
      if (doc.contains(k)) block[k] = doc.at(k);
    }
    blocks.push_back(parse_block(block, ""));
  }
  PhaseConfig cfg{PhaseData(std::move(blocks)), {}, 16};
  if (doc.contains("options")) parse_options(doc.at("options"), cfg);
  return cfg;
}

PhaseConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

PhaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ordered_json ring_element_json(const TruncatedRing& ring, std::uint32_t code) {
  ordered_json out = ordered_json::array();
  for (int c : ring.coeffs(ring.element(code))) out.push_back(c);
  return out;
}

namespace {

ordered_json block_json(const PhaseBlock& b) {
  const auto& ring = b.ring();
  const auto& module = b.module();
  const auto n = static_cast<std::size_t>(module.rank());
  ordered_json out;
  out["ring"] = {{"p", ring.p()}, {"m", ring.m()}};
  out["rank"] = module.rank();
  out["character"] = {{"weights", b.character().weights()}};
  ordered_json gens = ordered_json::array();
  for (const auto& g : b.generators()) {
    ordered_json gj = ordered_json::object();
    ordered_json t = ordered_json::array();
    for (int i = 0; i < module.rank(); ++i) t.push_back(ring_element_json(ring, module.component_code(g.translation.code, i)));
    gj["translation"] = t;
    if (g.phase.form()) {
      const auto& f = *g.phase.form();
      ordered_json gram = ordered_json::array();
      for (std::size_t i = 0; i < n; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(ring_element_json(ring, f.gram[i * n + j].code));
        gram.push_back(row);
      }
      ordered_json lin = ordered_json::array();
      for (const auto& e : f.linear) lin.push_back(ring_element_json(ring, e.code));
      gj["phase"] = {{"gram", gram}, {"linear", lin}, {"constant", ring_element_json(ring, f.constant.code)}};
    } else if (!g.phase.is_zero()) {
      ordered_json table = ordered_json::array();
      for (auto v : g.phase.table()) table.push_back(ring_element_json(ring, v));
      gj["phase"] = {{"table", table}};
    }
    gens.push_back(gj);
  }
  out["generators"] = gens;
  return out;
}

}  // namespace

ordered_json phase_to_json(const PhaseData& data) {
  if (data.block_count() == 1) return block_json(data.block(0));
  ordered_json blocks = ordered_json::array();
  for (const auto& b : data.blocks()) blocks.push_back(block_json(b));
  return {{"blocks", blocks}};
}

ordered_json config_to_json(const PhaseConfig& config) {
  ordered_json out;
  out["schema"] = kConfigSchema;
  const auto phase = phase_to_json(config.data);
  for (const auto& [k, v] : phase.items()) out[k] = v;
  const auto& o = config.options;
  out["options"] = {{"seed", o.seed},
                    {"axiom_table", o.axiom_table},
                    {"signature", o.compute_signature},
                    {"depth_limit", config.depth_limit},
                    {"signature_cap", {{"max_group", o.signature_limits.max_group},
                                       {"max_generators", o.signature_limits.max_generators}}}};
  return out;
}

}  // namespace phasebound
