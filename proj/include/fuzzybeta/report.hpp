#pragma once

// Human-readable and JSON renderings of fits, comparisons and simulation
// reports. Text output uses 6 significant digits; JSON carries full precision.

#include <json.hpp>
#include <string>

#include "fuzzybeta/beta_model.hpp"
#include "fuzzybeta/inference.hpp"
#include "fuzzybeta/simulation.hpp"

namespace fuzzybeta {

std::string fmt6(double v);

nlohmann::json fit_to_json(const FitResult& fit);
// Inverse of fit_to_json for the fields the comparison needs. Throws ParseError.
FitResult fit_from_json(const nlohmann::json& j);
std::string fit_to_text(const FitResult& fit);

nlohmann::json lrt_to_json(const LrtResult& lrt);

nlohmann::json simulation_to_json(const SimulationReport& rep);
std::string simulation_to_text(const SimulationReport& rep);
// One row per estimator x block: cell, estimator, block, bias, rmse, r, p, failures.
std::string simulation_to_csv(const SimulationReport& rep);

}  // namespace fuzzybeta
