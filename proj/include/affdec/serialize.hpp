#pragma once

#include "affdec/counterexample.hpp"
#include "affdec/decompose.hpp"
#include "affdec/verify.hpp"

#include <json.hpp>

#include <string>

namespace affdec {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "spec/1";

/// Non-finite doubles become the strings "inf", "-inf" and "nan".
Json number_to_json(double x);
double number_from_json(const Json& j);

Json to_json(const Poly2& p);
Poly2 poly_from_json(const Json& j);
Json to_json(const Parallelogram& omega);
Parallelogram parallelogram_from_json(const Json& j);
Json to_json(const AdmissibilityConstants& c);
AdmissibilityConstants constants_from_json(const Json& j);
Json to_json(const DecomposeConfig& c);
DecomposeConfig decompose_config_from_json(const Json& j);
Json to_json(const DecompositionResult& r);
DecompositionResult decomposition_from_json(const Json& j);
Json to_json(const ValidationReport& v);
Json to_json(const RatioReport& r, bool timings = false);
Json to_json(const EnsembleReport& r, bool timings = false);
Json to_json(const DecouplingEnsemble& d, bool timings = false);
Json to_json(const CounterexampleScan& s, bool timings = false);

/// {"schema", "build", "command", "config", "result"}.
Json artifact(const std::string& command, const Json& config, const Json& result);
/// Throws InvalidArgument when the schema version does not match.
void check_schema(const Json& j);

/// Two-space indented dump with a trailing newline; object keys are sorted.
std::string dump(const Json& j);

}  // namespace affdec
