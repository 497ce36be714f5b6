#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "syntro/dynamics.hpp"
#include "syntro/equilibria.hpp"

namespace syntro {

/// Stable manifold of a saddle of the reduced system, traced by integrating
/// backward in time from small offsets along the stable eigenvector. The two
/// half-branches are ordered from the saddle outward and tagged by the side
/// of departure.
struct Separatrix {
    EquilibriumRecord saddle;
    std::vector<PlanarState> side_plus;
    std::vector<PlanarState> side_minus;

    /// Single polyline: reversed minus side, saddle, plus side.
    std::vector<PlanarState> polyline() const;
};

struct SeparatrixOptions {
    double seed_scale = 1e-7;     ///< eigenvector offset: seed_scale * (1 + |saddle|)
    double arc_factor = 4.0;      ///< arc-length cap: arc_factor * (s1_in + s2_in)
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
};

/// Requires a record classified as a saddle. The trace stops on leaving the
/// closure of the admissible region (truncated at the boundary), at the
/// arc-length cap, or when the backward flow stalls at a node.
Separatrix compute_separatrix(const GrowthModel& model, const ChemostatConfig& config,
                              double D, const EquilibriumRecord& saddle,
                              const SeparatrixOptions& opts = {});

enum class CellLabel : std::int8_t {
    outside = -2,
    unresolved = -1,
    F0 = 0,
    F1_boundary = 1,
    F2_boundary = 2,
    F_star = 3,
};

const char* to_string(CellLabel label);
CellLabel to_cell_label(EquilibriumKind kind);

/// Attractor label per grid cell over the bounding box of the region,
/// row-major with x1 fastest: labels[j * n1 + i] is the cell centered at
/// ((i + 1/2) s1_in / n1, (j + 1/2) (s1_in + s2_in) / n2).
struct BasinGrid {
    int n1 = 0, n2 = 0;
    double D = 0.0;
    ChemostatConfig config;
    std::vector<CellLabel> labels;
    std::vector<EquilibriumRecord> attractors;

    CellLabel at(int i, int j) const { return labels[static_cast<std::size_t>(j) * n1 + i]; }
    /// Fraction of in-region cells that failed to settle.
    double unresolved_fraction() const;
};

struct BasinOptions {
    double t_max_factor = 500.0;   ///< integrate to t_max_factor / D
    double chunk_factor = 10.0;    ///< detection interval: chunk_factor / D
    double radius_scale = 1e-5;
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
};

/// Forward-integrates every in-region cell center and labels it by the
/// attractor it settles at. Cell work items run in parallel (threads == 1 is
/// the serial reference path); the result is identical for any thread count.
BasinGrid classify_basins(const GrowthModel& model, const ChemostatConfig& config,
                          double D, int n1, int n2, int threads = 0,
                          const BasinOptions& opts = {});

/// Minimum distance from a point to a polyline.
double polyline_distance(std::span<const PlanarState> polyline, PlanarState point);

/// Consistency check of a separatrix: probe pairs displaced to both sides of
/// the polyline must settle at two distinct attractors, one per side.
struct ProbeCheck {
    int requested = 0;
    int used = 0;   ///< pairs with both probes inside the region
    int split = 0;  ///< used pairs whose sides reached the two distinct attractors
    bool clean() const { return used > 0 && split == used; }
};

ProbeCheck probe_separatrix(const GrowthModel& model, const ChemostatConfig& config,
                            double D, const Separatrix& separatrix,
                            std::span<const EquilibriumRecord> attractors, int pairs,
                            double offset, std::uint64_t seed, int threads = 0);

/// CSV "x1,x2,label" over the grid cells, row-major.
std::string to_csv(const BasinGrid& grid);
/// CSV "x1,x2,branch" with branch in {plus, minus}.
std::string to_csv(const Separatrix& separatrix);

}  // namespace syntro
