#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "syntro/equilibria.hpp"

namespace syntro {

enum class EventKind {
    F1_vanishes,
    F2_vanishes,
    F1_exchanges_stability,
    F2_exchanges_stability,
    saddle_node,
    F0_exchanges,
};

const char* to_string(EventKind kind);

/// A change of the qualitative regime located along a dilution-rate sweep,
/// refined by bisection on the discrete regime signature. witnesses holds
/// the pair of equilibria that approach each other at the event, when one
/// is identified; for a saddle_node, point is the near-coalescence location
/// (where the Jacobian determinant vanishes).
struct BifurcationEvent {
    double D = 0.0;
    EventKind kind = EventKind::F0_exchanges;
    std::vector<EquilibriumRecord> witnesses;
    std::optional<PlanarState> point;
};

struct BranchSample {
    double D = 0.0;
    RegimeReport report;
};

struct BranchDiagram {
    std::vector<BranchSample> samples;
    std::vector<BifurcationEvent> events;
};

/// Classifies the regime at n_samples points spanning [D_min, D_max]
/// (sampling runs in parallel; see parallel_for) and refines every change
/// between adjacent samples to a bracket of width <= 1e-8.
BranchDiagram sweep(const GrowthModel& model, const ChemostatConfig& config, double D_min,
                    double D_max, int n_samples, int threads = 0);

/// Dilution rate at which two nullcline graphs become tangent and a pair of
/// coexistence equilibria coalesces, located by bisection on the count
/// change over [D_lo, D_hi] to width 1e-9. nullopt when the counts at the
/// endpoints agree.
struct Tangency {
    double D = 0.0;
    PlanarState point;
};

std::optional<Tangency> find_tangency(const GrowthModel& model,
                                      const ChemostatConfig& config, double D_lo,
                                      double D_hi);

/// The two equilibria whose separation vanishes as D approaches D_event,
/// probed at D_event +- offset. A pair qualifies when it is already closer
/// than 1e-4 at the probe, or when its separation keeps shrinking as the
/// offset does (the square-root closing rate of a fold).
std::optional<std::pair<EquilibriumRecord, EquilibriumRecord>> coalescence_pair(
    const GrowthModel& model, const ChemostatConfig& config, double D_event,
    double offset = 1e-6);

struct CoalescenceWitness {
    const BifurcationEvent* event = nullptr;
    std::pair<EquilibriumRecord, EquilibriumRecord> pair;
};

/// Witness pairs for every event of a diagram that has an identifiable
/// coalescing pair.
std::vector<CoalescenceWitness> coalescence_witnesses(const GrowthModel& model,
                                                      const ChemostatConfig& config,
                                                      const BranchDiagram& diagram);

}  // namespace syntro
