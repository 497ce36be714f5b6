#pragma once

#include <optional>
#include <vector>

#include "syntro/growth.hpp"
#include "syntro/numerics.hpp"

namespace syntro {

/// State of the reduced planar system: the two biomass concentrations.
struct PlanarState {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Composed per-capita rate of species `which` on the invariant plane:
/// f_which(s1_in - x1, s2_in + x1 - x2). Requires both substituted substrate
/// arguments to be nonnegative; throws std::domain_error otherwise.
double phi(const GrowthModel& model, const ChemostatConfig& config, int which,
           PlanarState state);

/// Membership in the admissible region:
/// 0 < x1 <= s1_in and 0 < x2 <= x1 + s2_in (open on the axes).
bool in_region(const ChemostatConfig& config, PlanarState state);

/// Membership in the closure of the region (axes included).
bool in_region_closure(const ChemostatConfig& config, PlanarState state);

/// The x2 on the level set phi_which(x1, x2) = D, if one exists in
/// [0, x1 + s2_in]. phi_1 is strictly increasing in x2 and phi_2 strictly
/// decreasing, so the solve is a bisection followed by a Newton polish.
std::optional<double> graph_value(const GrowthModel& model, const ChemostatConfig& config,
                                  int which, double D, double x1);

/// Slope of the level-set graph x2 = F_which(x1):
/// 1 - (df/ds1)/(df/ds2) at the substituted point. Exceeds 1 wherever the
/// monotonicity hypotheses hold. Absent where graph_value is absent.
std::optional<double> graph_slope(const GrowthModel& model, const ChemostatConfig& config,
                                  int which, double D, double x1);

/// Level-set graph of one species' nullcline at dilution rate D, with the
/// x1-interval on which the solve is feasible (possibly empty).
struct GraphFunction {
    int which = 1;
    double D = 0.0;
    Interval domain;
};

GraphFunction graph_domain(const GrowthModel& model, const ChemostatConfig& config,
                           int which, double D);

/// Polyline sampling of a nullcline graph over its feasible domain;
/// empty when the domain is empty.
std::vector<PlanarState> nullcline_polyline(const GrowthModel& model,
                                            const ChemostatConfig& config, int which,
                                            double D, int samples = 400);

}  // namespace syntro
