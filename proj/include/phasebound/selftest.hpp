#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "phasebound/boundary.hpp"

namespace phasebound {

struct SelftestOptions {
  /// Suite name or prefix ("ring" selects "ring-kernel"); empty runs everything.
  std::string filter;
  Fault fault = Fault::none;
  std::uint64_t seed = 0;
  int samples = 40;
};

struct PropertyResult {
  std::string suite;
  std::string name;
  bool ok = true;
  std::string detail;
};

std::vector<std::string> selftest_suites();
std::vector<PropertyResult> run_selftest(const SelftestOptions& options, std::ostream* log = nullptr);

}  // namespace phasebound
