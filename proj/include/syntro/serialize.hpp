#pragma once

#include "json.hpp"
#include "syntro/basins.hpp"
#include "syntro/bifurcation.hpp"
#include "syntro/equilibria.hpp"
#include "syntro/growth.hpp"

namespace syntro {

nlohmann::json to_json(const Thresholds& thresholds);
nlohmann::json to_json(const EquilibriumRecord& record);
nlohmann::json to_json(const RegimeReport& report);
nlohmann::json to_json(const BranchDiagram& diagram);
nlohmann::json to_json(const HypothesisReport& report);

/// Inverse of to_json(RegimeReport); throws std::invalid_argument when the
/// document does not match the schema. Used to validate round-trips.
RegimeReport regime_report_from_json(const nlohmann::json& doc);
BranchDiagram branch_diagram_from_json(const nlohmann::json& doc);

/// CSV "D,kind,x1,x2,stability", one row per equilibrium per sample.
std::string branch_csv(const BranchDiagram& diagram);
/// CSV "x1,x2,branch" with branch in {gamma1, gamma2}.
std::string nullclines_csv(const GrowthModel& model, const ChemostatConfig& config,
                           double D, int samples = 400);

EquilibriumKind equilibrium_kind_from_string(const std::string& s);
Stability stability_from_string(const std::string& s);
RegimeCase regime_case_from_string(const std::string& s);
EventKind event_kind_from_string(const std::string& s);

}  // namespace syntro
