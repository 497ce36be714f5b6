#include "syntro/basins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "syntro/io.hpp"
#include "syntro/parallel.hpp"

namespace syntro {

namespace {

/// Where the segment from an inside point to an outside point crosses the
/// region boundary.
PlanarState clip_to_boundary(const ChemostatConfig& config, PlanarState inside,
                             PlanarState outside) {
    const double dx1 = outside.x1 - inside.x1;
    const double dx2 = outside.x2 - inside.x2;
    double t_hit = 1.0;
    auto consider = [&](double num, double den) {
        // Crossing of inside + t (outside - inside) with num + t den = 0.
        if (den == 0.0) return;
        const double t = -num / den;
        if (t >= 0.0 && t < t_hit) t_hit = t;
    };
    consider(inside.x1, dx1);                                   // x1 = 0
    consider(inside.x1 - config.s1_in, dx1);                    // x1 = s1_in
    consider(inside.x2, dx2);                                   // x2 = 0
    consider(inside.x2 - inside.x1 - config.s2_in, dx2 - dx1);  // x2 = x1 + s2_in
    return {inside.x1 + t_hit * dx1, inside.x2 + t_hit * dx2};
}

std::vector<PlanarState> trace_branch(const GrowthModel& model,
                                      const ChemostatConfig& config, PlanarState seed,
                                      double arc_cap, const SeparatrixOptions& opts) {
    std::vector<PlanarState> branch;
    branch.push_back(seed);
    if (!in_region_closure(config, seed)) return branch;

    IntegrateOptions iopts;
    iopts.abs_tol = opts.abs_tol;
    iopts.rel_tol = opts.rel_tol;
    // The backward flow stalls only at a backward-attracting node.
    iopts.stop_speed = 1e-9 * std::max(config.D, 1.0);

    const double t_segment = 2.0 / config.D;
    const int max_segments = 20000;
    PlanarState current = seed;
    double arc = 0.0;
    for (int seg = 0; seg < max_segments && arc < arc_cap; ++seg) {
        const PlanarTrajectory piece =
            integrate_reduced_reversed(model, config, current, t_segment, iopts);
        for (std::size_t i = 1; i < piece.states.size(); ++i) {
            const PlanarState& next = piece.states[i];
            if (!in_region_closure(config, next)) {
                branch.push_back(clip_to_boundary(config, branch.back(), next));
                return branch;
            }
            arc += std::hypot(next.x1 - branch.back().x1, next.x2 - branch.back().x2);
            branch.push_back(next);
            if (arc >= arc_cap) return branch;
        }
        current = piece.final_state();
        if (piece.termination != Termination::t_end) return branch;
    }
    return branch;
}

}  // namespace

std::vector<PlanarState> Separatrix::polyline() const {
    std::vector<PlanarState> line;
    line.reserve(side_minus.size() + side_plus.size() + 1);
    for (auto it = side_minus.rbegin(); it != side_minus.rend(); ++it) line.push_back(*it);
    line.push_back(saddle.location);
    for (const auto& p : side_plus) line.push_back(p);
    return line;
}

Separatrix compute_separatrix(const GrowthModel& model, const ChemostatConfig& config,
                              double D, const EquilibriumRecord& saddle,
                              const SeparatrixOptions& opts) {
    if (saddle.stability != Stability::saddle) {
        throw std::invalid_argument("separatrix requires a saddle equilibrium");
    }
    ChemostatConfig working = config;
    working.D = D;
    working.validate();

    const auto ev = saddle.eigenvalues;
    if (ev[0].imag() != 0.0 || ev[1].imag() != 0.0) {
        throw std::invalid_argument("saddle must have real eigenvalues");
    }
    const double lambda_stable = std::min(ev[0].real(), ev[1].real());
    const auto v = eigenvector(saddle.jacobian, lambda_stable);

    const double eps =
        opts.seed_scale *
        (1.0 + std::hypot(saddle.location.x1, saddle.location.x2));
    const double arc_cap = opts.arc_factor * (config.s1_in + config.s2_in);

    Separatrix sep;
    sep.saddle = saddle;
    sep.side_plus = trace_branch(
        model, working,
        {saddle.location.x1 + eps * v[0], saddle.location.x2 + eps * v[1]}, arc_cap, opts);
    sep.side_minus = trace_branch(
        model, working,
        {saddle.location.x1 - eps * v[0], saddle.location.x2 - eps * v[1]}, arc_cap, opts);
    return sep;
}

const char* to_string(CellLabel label) {
    switch (label) {
        case CellLabel::outside: return "outside";
        case CellLabel::unresolved: return "unresolved";
        case CellLabel::F0: return "F0";
        case CellLabel::F1_boundary: return "F1_boundary";
        case CellLabel::F2_boundary: return "F2_boundary";
        case CellLabel::F_star: return "F_star";
    }
    return "?";
}

CellLabel to_cell_label(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::F0: return CellLabel::F0;
        case EquilibriumKind::F1_boundary: return CellLabel::F1_boundary;
        case EquilibriumKind::F2_boundary: return CellLabel::F2_boundary;
        case EquilibriumKind::F_star: return CellLabel::F_star;
    }
    return CellLabel::unresolved;
}

double BasinGrid::unresolved_fraction() const {
    std::size_t in_region_cells = 0, unresolved = 0;
    for (CellLabel label : labels) {
        if (label == CellLabel::outside) continue;
        ++in_region_cells;
        if (label == CellLabel::unresolved) ++unresolved;
    }
    return in_region_cells == 0 ? 0.0
                                : static_cast<double>(unresolved) /
                                      static_cast<double>(in_region_cells);
}

namespace {

/// Forward integration in detection-interval chunks; settles as soon as the
/// state sits inside the detection radius of an attractor with a matching
/// field norm, so cells near an attractor do not pay for the full horizon.
CellLabel settle_cell(const GrowthModel& model, const ChemostatConfig& working,
                      PlanarState start, std::span<const EquilibriumRecord> attractors,
                      const BasinOptions& opts) {
    const double D = working.D;
    const double t_max = opts.t_max_factor / D;
    const double t_chunk = opts.chunk_factor / D;

    IntegrateOptions iopts;
    iopts.abs_tol = opts.abs_tol;
    iopts.rel_tol = opts.rel_tol;
    iopts.sample_times = {t_chunk};  // only the chunk endpoint is needed

    PlanarState current = start;
    for (double t = 0.0; t < t_max; t += t_chunk) {
        const PlanarTrajectory piece =
            integrate_reduced(model, working, current, t_chunk, iopts);
        current = piece.final_state();
        if (piece.termination == Termination::blowup_guard) return CellLabel::unresolved;
        const auto kind =
            detect_attractor(model, working, D, current, attractors, opts.radius_scale);
        if (kind) return to_cell_label(*kind);
    }
    return CellLabel::unresolved;
}

}  // namespace

BasinGrid classify_basins(const GrowthModel& model, const ChemostatConfig& config,
                          double D, int n1, int n2, int threads,
                          const BasinOptions& opts) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("resolution must be positive");
    ChemostatConfig working = config;
    working.D = D;
    working.validate();

    const RegimeReport regime = classify_regime(model, working, D);
    BasinGrid grid;
    grid.n1 = n1;
    grid.n2 = n2;
    grid.D = D;
    grid.config = working;
    for (const auto& r : regime.equilibria) {
        if (r.stability == Stability::stable_node) grid.attractors.push_back(r);
    }
    grid.labels.assign(static_cast<std::size_t>(n1) * n2, CellLabel::unresolved);

    const double width = working.s1_in;
    const double height = working.s1_in + working.s2_in;
    parallel_for(grid.labels.size(), threads, [&](std::size_t cell) {
        const int i = static_cast<int>(cell % static_cast<std::size_t>(n1));
        const int j = static_cast<int>(cell / static_cast<std::size_t>(n1));
        const PlanarState center{(i + 0.5) * width / n1, (j + 0.5) * height / n2};
        if (!in_region(working, center)) {
            grid.labels[cell] = CellLabel::outside;
            return;
        }
        grid.labels[cell] = settle_cell(model, working, center, grid.attractors, opts);
    });
    return grid;
}

double polyline_distance(std::span<const PlanarState> polyline, PlanarState point) {
    if (polyline.empty()) return std::numeric_limits<double>::infinity();
    if (polyline.size() == 1) {
        return std::hypot(point.x1 - polyline[0].x1, point.x2 - polyline[0].x2);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        const PlanarState& a = polyline[i];
        const PlanarState& b = polyline[i + 1];
        const double vx = b.x1 - a.x1, vy = b.x2 - a.x2;
        const double wx = point.x1 - a.x1, wy = point.x2 - a.x2;
        const double len2 = vx * vx + vy * vy;
        const double t = len2 > 0.0 ? std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, std::hypot(wx - t * vx, wy - t * vy));
    }
    return best;
}

ProbeCheck probe_separatrix(const GrowthModel& model, const ChemostatConfig& config,
                            double D, const Separatrix& separatrix,
                            std::span<const EquilibriumRecord> attractors, int pairs,
                            double offset, std::uint64_t seed, int threads) {
    if (pairs < 1) throw std::invalid_argument("need at least one probe pair");
    if (attractors.size() != 2) {
        throw std::invalid_argument("probe check expects exactly two attractors");
    }
    ChemostatConfig working = config;
    working.D = D;

    const auto line = separatrix.polyline();
    if (line.size() < 2) throw std::invalid_argument("separatrix polyline is degenerate");

    std::vector<double> cumulative(line.size(), 0.0);
    for (std::size_t i = 1; i < line.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + std::hypot(line[i].x1 - line[i - 1].x1,
                                                       line[i].x2 - line[i - 1].x2);
    }
    const double total = cumulative.back();

    // Probe positions drawn once; each pair is independent work.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.05, 0.95);
    struct Probe {
        PlanarState a, b;
        bool usable = false;
    };
    std::vector<Probe> probes(static_cast<std::size_t>(pairs));
    for (auto& probe : probes) {
        const double s = uniform(rng) * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
        const std::size_t i =
            std::min(static_cast<std::size_t>(it - cumulative.begin()), line.size() - 1);
        const PlanarState& a = line[i - 1];
        const PlanarState& b = line[i];
        const double seg = cumulative[i] - cumulative[i - 1];
        if (seg == 0.0) continue;
        const double t = (s - cumulative[i - 1]) / seg;
        const PlanarState base{a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2)};
        const double nx = -(b.x2 - a.x2) / seg;
        const double ny = (b.x1 - a.x1) / seg;
        probe.a = {base.x1 + offset * nx, base.x2 + offset * ny};
        probe.b = {base.x1 - offset * nx, base.x2 - offset * ny};
        probe.usable = in_region(working, probe.a) && in_region(working, probe.b);
    }

    // Probes sit on the slow manifold by construction: they first escape the
    // saddle at its unstable rate and may then settle at an attractor with a
    // weak contraction, so the horizon scales with the escape time.
    BasinOptions bopts;
    const double lambda_unstable = std::max(separatrix.saddle.eigenvalues[0].real(),
                                            separatrix.saddle.eigenvalues[1].real());
    if (lambda_unstable > 0.0 && offset > 0.0 && offset < 1.0) {
        bopts.t_max_factor =
            2.0 * (500.0 + D * std::log(1.0 / offset) / lambda_unstable);
    }
    std::vector<std::pair<CellLabel, CellLabel>> outcomes(probes.size(),
                                                          {CellLabel::unresolved,
                                                           CellLabel::unresolved});
    parallel_for(probes.size(), threads, [&](std::size_t k) {
        if (!probes[k].usable) return;
        outcomes[k].first = settle_cell(model, working, probes[k].a, attractors, bopts);
        outcomes[k].second = settle_cell(model, working, probes[k].b, attractors, bopts);
    });

    const CellLabel first = to_cell_label(attractors[0].kind);
    const CellLabel second = to_cell_label(attractors[1].kind);
    ProbeCheck check;
    check.requested = pairs;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        if (!probes[k].usable) continue;
        ++check.used;
        const auto [la, lb] = outcomes[k];
        const bool both = (la == first && lb == second) || (la == second && lb == first);
        if (both) ++check.split;
    }
    return check;
}

std::string to_csv(const BasinGrid& grid) {
    std::ostringstream out;
    out << "x1,x2,label\n";
    for (int j = 0; j < grid.n2; ++j) {
        for (int i = 0; i < grid.n1; ++i) {
            const double x1 = (i + 0.5) * grid.config.s1_in / grid.n1;
            const double x2 = (j + 0.5) * (grid.config.s1_in + grid.config.s2_in) / grid.n2;
            out << format_g17(x1) << ',' << format_g17(x2) << ','
                << to_string(grid.at(i, j)) << '\n';
        }
    }
    return out.str();
}

std::string to_csv(const Separatrix& separatrix) {
    std::ostringstream out;
    out << "x1,x2,branch\n";
    for (const auto& p : separatrix.side_plus) {
        out << format_g17(p.x1) << ',' << format_g17(p.x2) << ",plus\n";
    }
    for (const auto& p : separatrix.side_minus) {
        out << format_g17(p.x1) << ',' << format_g17(p.x2) << ",minus\n";
    }
    return out.str();
}

}  // namespace syntro
