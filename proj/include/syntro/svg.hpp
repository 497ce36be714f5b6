#pragma once

#include <optional>
#include <string>

#include "syntro/basins.hpp"
#include "syntro/equilibria.hpp"

namespace syntro {

/// Phase portrait of the reduced system as a standalone SVG document:
/// the admissible region, the two nullcline graphs, every equilibrium
/// (stable nodes filled, others hollow), and optionally basin cells and the
/// separatrix polyline. Colors are fixed.
std::string phase_portrait_svg(const GrowthModel& model, const ChemostatConfig& config,
                               double D, const RegimeReport& regime,
                               const BasinGrid* basins = nullptr,
                               const Separatrix* separatrix = nullptr, int width = 640,
                               int height = 640);

}  // namespace syntro
