#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syntro/equilibria.hpp"
#include "syntro/growth.hpp"
#include "syntro/planar.hpp"

namespace syntro {

/// State of the four-dimensional chemostat system.
struct FullState {
    double s1 = 0.0, x1 = 0.0, s2 = 0.0, x2 = 0.0;
};

enum class Termination { t_end, converged, blowup_guard };

const char* to_string(Termination t);

struct FullTrajectory {
    std::vector<double> times;
    std::vector<FullState> states;
    Termination termination = Termination::t_end;

    const FullState& final_state() const { return states.back(); }
};

struct PlanarTrajectory {
    std::vector<double> times;
    std::vector<PlanarState> states;
    Termination termination = Termination::t_end;

    const PlanarState& final_state() const { return states.back(); }
};

/// Adaptive embedded Runge-Kutta options. With sample_times empty, every
/// accepted step is recorded; otherwise the requested times plus t = 0, and
/// the terminal state when the run stops early or continues past the last
/// sample. stop_speed > 0 terminates the run early once the vector-field
/// norm falls below it, reported as Termination::converged.
struct IntegrateOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double stop_speed = 0.0;
    std::vector<double> sample_times;
    double max_step = 0.0;  ///< 0 = unlimited
};

/// Right-hand side of the full system. Substrate arguments of the growth
/// functions are clamped at zero so that integrator stages may overshoot
/// the cone boundary by round-off.
std::array<double, 4> full_field(const GrowthModel& model, const ChemostatConfig& config,
                                 const FullState& state);

/// Right-hand side of the reduced planar system.
std::array<double, 2> reduced_field(const GrowthModel& model, const ChemostatConfig& config,
                                    double D, PlanarState state);

FullTrajectory integrate_full(const GrowthModel& model, const ChemostatConfig& config,
                              const FullState& initial, double t_end,
                              const IntegrateOptions& opts = {});

PlanarTrajectory integrate_reduced(const GrowthModel& model, const ChemostatConfig& config,
                                   const PlanarState& initial, double t_end,
                                   const IntegrateOptions& opts = {});

/// Integrates the negated reduced field (time reversal); used to trace
/// stable manifolds. The trajectory may leave the admissible region, so no
/// region check is made on the initial state.
PlanarTrajectory integrate_reduced_reversed(const GrowthModel& model,
                                            const ChemostatConfig& config,
                                            const PlanarState& initial, double t_end,
                                            const IntegrateOptions& opts = {});

/// The classified equilibrium the state has settled at: within
/// radius_scale * (1 + |equilibrium|) of its location with the field norm
/// below that radius times D. nullopt when unsettled.
std::optional<EquilibriumKind> detect_attractor(const GrowthModel& model,
                                                const ChemostatConfig& config, double D,
                                                PlanarState state,
                                                std::span<const EquilibriumRecord> equilibria,
                                                double radius_scale = 1e-5);

std::optional<EquilibriumKind> detect_attractor(const GrowthModel& model,
                                                const ChemostatConfig& config, double D,
                                                const PlanarTrajectory& trajectory,
                                                std::span<const EquilibriumRecord> equilibria,
                                                double radius_scale = 1e-5);

/// Projection of a full state onto the biomass plane.
PlanarState project(const FullState& state);

/// Embedding of a planar state into the invariant plane of the full system:
/// (s1_in - x1, x1, s2_in + x1 - x2, x2). Requires the state to lie in the
/// closure of the admissible region.
FullState lift_to_full(const ChemostatConfig& config, PlanarState state);

/// Largest deviation of the two conserved aggregates z1 = s1 + x1 and
/// z2 = s2 + x2 - x1 from their exponential relaxation laws, over all
/// recorded points. Doubles as an integrator accuracy gauge.
struct ConservationError {
    double z1 = 0.0;
    double z2 = 0.0;
};

ConservationError conservation_error(const ChemostatConfig& config,
                                     const FullTrajectory& trajectory);

/// CSV with header "t,s1,x1,s2,x2", 17 significant digits.
std::string to_csv(const FullTrajectory& trajectory);
/// CSV with header "t,x1,x2", 17 significant digits.
std::string to_csv(const PlanarTrajectory& trajectory);

}  // namespace syntro
