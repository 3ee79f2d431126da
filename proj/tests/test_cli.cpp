#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "phasebound/config.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/report.hpp"
#include "phasebound/sampling.hpp"

using namespace phasebound;
using nlohmann::json;

namespace {

const std::string kRoot = PHASEBOUND_SOURCE_DIR;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(PHASEBOUND_CLI) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const json& doc) {
  const auto path = testing::TempDir() + name;
  std::ofstream(path) << doc.dump();
  return path;
}

json example_doc() { return json::parse(read_file(kRoot + "/configs/radical-example.json")); }

std::string error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST(Config, BundledExampleParses) {
  const auto cfg = load_config(kRoot + "/configs/radical-example.json");
  EXPECT_EQ(cfg.data, radical_example());
  EXPECT_EQ(cfg.options.seed, 0u);
  EXPECT_EQ(load_config(kRoot + "/configs/strong-variant.json").data, radical_example({0, 0, 0, 1}));
}

TEST(Config, ValidationNamesFieldPath) {
  auto doc = example_doc();
  doc["ring"]["p"] = 4;
  EXPECT_EQ(error_path(doc), "ring.p");

  doc = example_doc();
  doc["character"]["weights"] = {0, 1, 0};
  EXPECT_EQ(error_path(doc), "character.weights");

  doc = example_doc();
  doc["generators"][1]["translation"] = json::array({json::array({1})});
  EXPECT_EQ(error_path(doc), "generators[1].translation");

  doc = example_doc();
  doc["generators"][0]["phase"]["gram"][0][1] = {0, 2};
  EXPECT_EQ(error_path(doc), "generators[0].phase.gram[0][1][1]");

  doc = example_doc();
  doc["schema"] = "phasebound-config/0";
  EXPECT_EQ(error_path(doc), "schema");

  doc = example_doc();
  doc["colour"] = 1;
  EXPECT_EQ(error_path(doc), "colour");

  // A cubic table over F_2^3.
  json cubic = {{"schema", "phasebound-config/1"},
                {"ring", {{"p", 2}, {"m", 1}}},
                {"rank", 3},
                {"character", {{"weights", {1}}}},
                {"generators", json::array({{{"phase", {{"table", {0, 0, 0, 0, 0, 0, 0, 1}}}}}})}};
  EXPECT_EQ(error_path(cubic), "generators[0].phase.table");

  doc = example_doc();
  doc["ring"]["m"] = 9;
  EXPECT_THROW(parse_config(doc), SizeCapError);
}

TEST(Config, TableMustAgreeWithForm) {
  auto doc = example_doc();
  json table = json::array();
  const auto phi = radical_example().block(0).generators()[0].phase;
  const TruncatedRing r(2, 4);
  for (auto v : phi.table()) table.push_back(r.coeffs(r.element(v)));
  doc["generators"][0]["phase"]["table"] = table;
  EXPECT_EQ(parse_config(doc).data, radical_example());
  doc["generators"][0]["phase"]["table"][5] = {1};
  EXPECT_EQ(error_path(doc), "generators[0].phase.table[5]");
}

TEST(Config, RoundTrip) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    PhaseConfig cfg{sample_phase_data(rng), {}, 16};
    cfg.options.seed = static_cast<std::uint64_t>(t);
    const auto back = parse_config_text(config_to_json(cfg).dump());
    ASSERT_EQ(back.data, cfg.data);
    ASSERT_EQ(back.options.seed, cfg.options.seed);
    ASSERT_EQ(config_to_json(back).dump(), config_to_json(cfg).dump());
  }
  PhaseConfig sum{direct_sum(radical_example(), radical_example({0, 0, 0, 1})), {}, 16};
  EXPECT_EQ(parse_config_text(config_to_json(sum).dump()).data, sum.data);
}

TEST(Report, DeterministicAndEchoReparses) {
  const auto cfg = load_config(kRoot + "/configs/radical-example.json");
  const auto a = build_report(cfg).dump(2), b = build_report(cfg).dump(2);
  EXPECT_EQ(a, b);
  const auto doc = json::parse(a);
  EXPECT_EQ(parse_config(doc["input"]).data, cfg.data);
  EXPECT_EQ(doc["schema"], "phasebound-report/1");
}

TEST(Report, GoldenFieldsMatch) {
  const auto golden = json::parse(read_file(kRoot + "/goldens/radical-example.report.json"));
  const auto fresh = json::parse(build_report(load_config(kRoot + "/configs/radical-example.json")).dump());
  for (const char* k : {"defect_rank", "boundary_depth", "weak_extension_depth", "admissibility"}) {
    EXPECT_EQ(fresh["analysis"][k], golden["analysis"][k]) << k;
  }
  ASSERT_EQ(fresh["strata"].size(), golden["strata"].size());
  for (std::size_t i = 0; i < fresh["strata"].size(); ++i) {
    EXPECT_EQ(fresh["strata"][i]["depth"], golden["strata"][i]["depth"]);
    EXPECT_EQ(fresh["strata"][i]["axiom_type"], golden["strata"][i]["axiom_type"]);
  }
  EXPECT_EQ(fresh["classification"], golden["classification"]);
  EXPECT_EQ(golden["analysis"]["defect_rank"], 2);
  EXPECT_EQ(golden["analysis"]["boundary_depth"], 4);
}

TEST(Report, TextHasAnatomySections) {
  const auto text = render_text(build_report(load_config(kRoot + "/configs/radical-example.json")));
  for (const char* h : {"Defect generation", "Rigid extension", "Boundary", "Obstruction", "Island", "Detectors"}) {
    EXPECT_NE(text.find(h), std::string::npos) << h;
  }
}

TEST(Cli, AnalyzeExitCodes) {
  const auto ok = run("analyze " + kRoot + "/configs/radical-example.json --json");
  ASSERT_EQ(ok.code, 0) << ok.out;
  const auto doc = json::parse(ok.out);
  EXPECT_EQ(doc["analysis"]["boundary_depth"], 4);

  auto bad = example_doc();
  bad["ring"]["p"] = 4;
  const auto r2 = run("analyze " + write_temp("bad_p.json", bad));
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.out.find("ring.p"), std::string::npos);

  auto big = example_doc();
  big["ring"]["m"] = 9;
  EXPECT_EQ(run("analyze " + write_temp("big.json", big)).code, 3);
  EXPECT_EQ(run("analyze /nonexistent.json").code, 2);
  EXPECT_EQ(run("analyze " + kRoot + "/configs/strong-variant.json --text").code, 0);
}

TEST(Cli, DeformCommands) {
  const auto path = kRoot + "/configs/radical-example.json";
  const auto listing = run("deform " + path + " --enumerate");
  ASSERT_EQ(listing.code, 0);
  EXPECT_EQ(json::parse(listing.out)["deformations"].size(), 4u);

  const auto base = json::parse(run("analyze " + path).out);
  auto trivial = json::parse(run("deform " + path + " --apply 00").out);
  trivial.erase("deformation");
  EXPECT_EQ(trivial, base);

  const auto ten = json::parse(run("deform " + path + " --apply 10").out);
  EXPECT_EQ(ten["island"].dump(), base["island"].dump());
  EXPECT_EQ(ten["classification"].dump(), base["classification"].dump());
  EXPECT_NE(ten["strata"][0], base["strata"][0]);
  EXPECT_EQ(ten["strata"][1], base["strata"][1]);

  EXPECT_EQ(run("deform " + path + " --apply 1").code, 2);
  EXPECT_EQ(run("deform " + path + " --apply 30").code, 2);
}

TEST(Cli, ModuliCommand) {
  const auto r = run("moduli " + kRoot + "/configs/strong-variant.json");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(r.out)["class_count"], 1);
  const auto d = run("moduli --deformations " + kRoot + "/configs/radical-example.json");
  ASSERT_EQ(d.code, 0) << d.out;
  const auto doc = json::parse(d.out);
  EXPECT_EQ(doc["objects"].size(), 4u);
  EXPECT_LE(doc["class_count"].get<int>(), 4);
}

TEST(Cli, Selftest) {
  const auto ok = run("selftest");
  EXPECT_EQ(ok.code, 0) << ok.out;
  const auto ring = run("selftest --filter ring");
  EXPECT_EQ(ring.code, 0);
  EXPECT_EQ(ring.out.find("boundary-calculus"), std::string::npos);
  EXPECT_NE(ring.out.find("ring-kernel"), std::string::npos);
  const auto broken = run("selftest --mutate island-kernel");
  EXPECT_EQ(broken.code, 1);
  EXPECT_NE(broken.out.find("island=kernel"), std::string::npos);
  EXPECT_EQ(run("selftest --filter nosuch").code, 2);
}
