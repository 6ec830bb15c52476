#pragma once

#include <string>

#include <json.hpp>

#include "lagflow/analysis.hpp"
#include "lagflow/benchmarks.hpp"
#include "lagflow/derivatives.hpp"

namespace lagflow {

using Json = nlohmann::json;

Json to_json(const Vector& v);
Json to_json(const SolveReport& r);
Json to_json(const SweepResult& r, bool include_runs = false);
Json to_json(const ShidokuResult& r);
Json to_json(const SysIdResult& r);
Json to_json(const ChemicalResult& r);
Json to_json(const LTIStabilityReport& r);
Json to_json(const ZeroDynamicsReport& r);
Json to_json(const ValidationReport& r);
Json to_json(const TuningParams& t);

/// Non-finite numbers are written as null.
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

/// Header t,f,hinf,xdotinf then x0..x{n-1},l0..l{m-1} when states were recorded.
void write_trajectory_csv(const std::string& path, const SolveReport& r);

}  // namespace lagflow
