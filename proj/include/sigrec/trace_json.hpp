#pragma once

#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "sigrec/agent.hpp"

namespace sigrec {

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json diagnostic_to_json(const Diagnostic& d);
Diagnostic diagnostic_from_json(const nlohmann::json& j);
nlohmann::json diagnostic_set_to_json(const DiagnosticSet& s);
DiagnosticSet diagnostic_set_from_json(const nlohmann::json& j);

nlohmann::json target_to_json(const InferenceTarget& t);
InferenceTarget target_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const InferenceTrace& t);
InferenceTrace trace_from_json(const nlohmann::json& j);

nlohmann::json traces_to_json(const std::vector<InferenceTrace>& traces);
/// Throws TraceFormatError on any schema violation.
std::vector<InferenceTrace> traces_from_json(const nlohmann::json& j);

}  // namespace sigrec
