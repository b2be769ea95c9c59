#pragma once

#include <json.hpp>

#include "regrep/classify.hpp"
#include "regrep/witness.hpp"
#include "regrep/wreath.hpp"

namespace regrep {

inline constexpr const char* kSchemaTag = "regrep/1";

nlohmann::json element_to_json(const GroupElement& e);
GroupElement element_from_json(const nlohmann::json& j);

nlohmann::json wreath_to_json(const SquarefreeGroup& R,
                              const WreathCertificate& cert);
WreathCertificate wreath_from_json(const SquarefreeGroup& R,
                                   const nlohmann::json& j);

nlohmann::json witness_to_json(const WitnessCertificate& w);
WitnessCertificate witness_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const SquarefreeGroup& R,
                               const DetectionVerdict& v);

/// Re-validates a certificate file (witness or wreath). Returns a
/// human-readable failure reason, or empty string on success.
std::string validate_certificate_json(const nlohmann::json& j);

}  // namespace regrep
