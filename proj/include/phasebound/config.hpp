#pragma once

#include <string>

#include <json.hpp>

#include "phasebound/boundary.hpp"
#include "phasebound/phase.hpp"

namespace phasebound {

inline constexpr const char* kConfigSchema = "phasebound-config/1";

/// Schema violation; `path` names the offending field, e.g. "ring.p".
class ConfigError : public StructuralError {
 public:
  ConfigError(std::string path, const std::string& message)
      : StructuralError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct PhaseConfig {
  PhaseData data;
  AnalysisOptions options;
  int depth_limit = 16;
};

PhaseConfig parse_config(const nlohmann::json& doc);
PhaseConfig parse_config_text(const std::string& text);
PhaseConfig load_config(const std::string& path);

/// Normalized form; parse_config(config_to_json(c)) reproduces c.
nlohmann::ordered_json config_to_json(const PhaseConfig& config);
nlohmann::ordered_json phase_to_json(const PhaseData& data);
nlohmann::ordered_json ring_element_json(const TruncatedRing& ring, std::uint32_t code);

}  // namespace phasebound
