#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "phasebound/config.hpp"
#include "phasebound/deformation.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/report.hpp"
#include "phasebound/selftest.hpp"

namespace pb = phasebound;

namespace {

enum Exit { kOk = 0, kSelftestFailed = 1, kValidation = 2, kSizeCap = 3, kInvariant = 4 };

pb::PhaseConfig load(const std::string& path, std::optional<std::uint64_t> seed) {
  auto cfg = pb::load_config(path);
  if (seed) cfg.options.seed = *seed;
  return cfg;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const pb::ConfigError& e) {
    std::cerr << "validation error at " << e.what() << "\n";
    return kValidation;
  } catch (const pb::SizeCapError& e) {
    std::cerr << "size cap exceeded: " << e.what() << "\n";
    return kSizeCap;
  } catch (const pb::InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kInvariant;
  } catch (const pb::NotAnIslandError& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kInvariant;
  } catch (const pb::StructuralError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const pb::NotQuadraticError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phasebound: boundary calculus over F_p[u]/(u^m)"};
  app.require_subcommand(1);

  std::string path;
  bool as_text = false, as_json = false;
  std::optional<std::uint64_t> seed;
  auto* analyze = app.add_subcommand("analyze", "Analyze a phase config and print the report");
  analyze->add_option("config", path, "Config file")->required();
  auto* json_flag = analyze->add_flag("--json", as_json, "JSON report (default)");
  analyze->add_flag("--text", as_text, "Human-readable report")->excludes(json_flag);
  analyze->add_option("--seed", seed, "Seed for randomized checks");

  std::string apply;
  bool enumerate = false;
  auto* deform = app.add_subcommand("deform", "Enumerate or apply deformations");
  deform->add_option("config", path, "Config file")->required();
  auto* en = deform->add_flag("--enumerate", enumerate, "List activation patterns and lifts");
  auto* ap = deform->add_option("--apply", apply, "Pattern, one digit per stratum (0 = inactive)");
  en->excludes(ap);
  deform->add_option("--seed", seed, "Seed for randomized checks");

  std::vector<std::string> paths;
  bool expand = false;
  auto* moduli = app.add_subcommand("moduli", "Moduli groupoid of a family of configs");
  moduli->add_option("configs", paths, "Config files")->required();
  moduli->add_flag("--deformations", expand, "Replace each config by all of its deformations");

  std::string filter, mutate;
  auto* selftest = app.add_subcommand("selftest", "Run the bundled invariant suite");
  selftest->add_option("--filter", filter, "Suite name or prefix");
  selftest->add_option("--mutate", mutate, "Inject a fault")->check(CLI::IsMember({"island-kernel"}));
  selftest->add_option("--seed", seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  if (*analyze) {
    return guarded([&] {
      const auto doc = pb::build_report(load(path, seed));
      if (as_text) {
        std::cout << pb::render_text(doc);
      } else {
        std::cout << doc.dump(2) << "\n";
      }
      return kOk;
    });
  }
  if (*deform) {
    if (!enumerate && apply.empty()) {
      std::cerr << "deform needs --enumerate or --apply\n";
      return kValidation;
    }
    return guarded([&] {
      const auto cfg = load(path, seed);
      std::cout << (enumerate ? pb::deformation_listing(cfg) : pb::deformed_report(cfg, apply)).dump(2) << "\n";
      return kOk;
    });
  }
  if (*moduli) {
    return guarded([&] {
      std::vector<pb::PhaseData> family;
      for (const auto& p : paths) {
        const auto cfg = pb::load_config(p);
        if (!expand) {
          family.push_back(cfg.data);
          continue;
        }
        for (const auto& d : pb::enumerate_deformations(cfg.data, 1u << 16, cfg.options.axiom_table).deformations) {
          family.push_back(pb::apply_deformation(cfg.data, d, cfg.options.axiom_table));
        }
      }
      std::cout << pb::moduli_report(family).dump(2) << "\n";
      return kOk;
    });
  }
  pb::SelftestOptions opts;
  opts.filter = filter;
  if (seed) opts.seed = *seed;
  if (mutate == "island-kernel") opts.fault = pb::Fault::island_kernel;
  if (!filter.empty()) {
    bool known = false;
    for (const auto& s : pb::selftest_suites()) known = known || s.rfind(filter, 0) == 0;
    if (!known) {
      std::cerr << "unknown suite: " << filter << "\n";
      return kValidation;
    }
  }
  const auto results = pb::run_selftest(opts, &std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.ok ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " properties passed\n";
  if (failed) {
    for (const auto& r : results) {
      if (!r.ok) std::cerr << "violated: " << r.name << " (" << r.suite << ")\n";
    }
    return kSelftestFailed;
  }
  return kOk;
}
