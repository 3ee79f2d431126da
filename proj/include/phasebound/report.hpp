#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "phasebound/config.hpp"
#include "phasebound/deformation.hpp"

namespace phasebound {

inline constexpr const char* kReportSchema = "phasebound-report/1";

/// Full pipeline; throws InvariantBreach when the kernel identity or k >= d fails.
nlohmann::ordered_json build_report(const PhaseConfig& config);
std::string render_text(const nlohmann::ordered_json& report);

nlohmann::ordered_json deformation_listing(const PhaseConfig& config);
/// Report of the deformed phase; throws InvariantBreach if the island moved.
nlohmann::ordered_json deformed_report(const PhaseConfig& config, std::string_view pattern);

nlohmann::ordered_json moduli_report(std::span<const PhaseData> family, const SignatureLimits& limits = {});

nlohmann::ordered_json signature_json(const InteractionSignature& sig);
nlohmann::ordered_json stratum_json(const PhaseData& data, const ObstructionStratum& s);

}  // namespace phasebound
