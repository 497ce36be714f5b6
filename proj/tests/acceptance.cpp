// Acceptance suite: every product-level requirement as one timed check with
// a single PASS/FAIL line. Exits with the number of failed checks.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "syntro/basins.hpp"
#include "syntro/bifurcation.hpp"
#include "syntro/dynamics.hpp"
#include "syntro/equilibria.hpp"
#include "syntro/parallel.hpp"

using namespace syntro;

namespace {

const GrowthModel kA = fixtures::model_a();
const GrowthModel kB = fixtures::model_b();
const double kRegimesA[5] = {0.5, 0.7, 0.95, 1.1, 1.3};

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& message) {
        if (!condition) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << message;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

/// Forward integration in chunks with attractor detection after each chunk.
std::optional<EquilibriumKind> settle_reduced(const GrowthModel& model,
                                              const ChemostatConfig& config, double D,
                                              PlanarState start,
                                              std::span<const EquilibriumRecord> equilibria,
                                              double t_max) {
    const double chunk = 10.0 / D;
    PlanarState current = start;
    IntegrateOptions opts;
    opts.sample_times = {chunk};
    for (double t = 0.0; t < t_max; t += chunk) {
        current = integrate_reduced(model, config, current, chunk, opts).final_state();
        if (auto kind = detect_attractor(model, config, D, current, equilibria)) return kind;
    }
    return std::nullopt;
}

std::optional<EquilibriumKind> settle_full(const GrowthModel& model,
                                           const ChemostatConfig& config, double D,
                                           FullState start,
                                           std::span<const EquilibriumRecord> equilibria,
                                           double t_max) {
    const double chunk = 10.0 / D;
    FullState current = start;
    IntegrateOptions opts;
    opts.sample_times = {chunk};
    for (double t = 0.0; t < t_max; t += chunk) {
        current = integrate_full(model, config, current, chunk, opts).final_state();
        if (auto kind = detect_attractor(model, config, D, project(current), equilibria)) {
            return kind;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Outcome criterion_1_thresholds_a() {
    Outcome result;
    const Thresholds th = compute_thresholds(kA, fixtures::config33(0.5));
    result.require(std::abs(th.D1 - 1.2) <= 1e-10, "D1 != 6/5 (" + fmt(th.D1) + ")");
    result.require(std::abs(th.D2 - 0.6) <= 1e-10, "D2 != 3/5 (" + fmt(th.D2) + ")");
    result.require(th.D3.has_value(), "D3 missing");
    if (th.D3) {
        result.require(std::abs(*th.D3 - 8.0 / 9.0) <= 1e-10,
                       "D3 != 8/9 (err " + fmt(std::abs(*th.D3 - 8.0 / 9.0)) + ")");
    }
    result.require(!th.D4.has_value(), "spurious D4");
    return result;
}

Outcome criterion_2_thresholds_b() {
    Outcome result;
    const Thresholds th = compute_thresholds(kB, fixtures::config33(1.5));
    result.require(std::abs(th.D1 - 4.0 / 3.0) <= 1e-10, "D1 != 4/3");
    result.require(std::abs(th.D2 - 21.0 / 16.0) <= 1e-10, "D2 != 21/16");
    return result;
}

Outcome criterion_3_five_regimes() {
    Outcome result;
    const std::size_t expected_counts[5] = {4, 3, 4, 2, 1};
    const std::vector<std::vector<Stability>> expected_stabilities = {
        {Stability::unstable_node, Stability::saddle, Stability::saddle,
         Stability::stable_node},
        {Stability::saddle, Stability::saddle, Stability::stable_node},
        {Stability::saddle, Stability::stable_node, Stability::saddle,
         Stability::stable_node},
        {Stability::saddle, Stability::stable_node},
        {Stability::stable_node}};
    for (int k = 0; k < 5; ++k) {
        const double D = kRegimesA[k];
        const RegimeReport report = classify_regime(kA, fixtures::config33(D), D);
        result.require(report.equilibria.size() == expected_counts[k],
                       "count at D=" + fmt(D) + " is " +
                           std::to_string(report.equilibria.size()));
        std::vector<Stability> got;
        for (const auto& r : report.equilibria) got.push_back(r.stability);
        std::vector<Stability> want = expected_stabilities[k];
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        result.require(got == want, "stability multiset differs at D=" + fmt(D));
    }
    return result;
}

Outcome criterion_4_closed_form_coexistence() {
    Outcome result;
    const PositiveEquilibria eqs =
        find_positive_equilibria(kA, fixtures::config33(0.5), 0.5);
    result.require(eqs.records.size() == 1,
                   "expected a unique coexistence point, got " +
                       std::to_string(eqs.records.size()));
    if (!eqs.records.empty()) {
        const PlanarState p = eqs.records[0].location;
        const double gap = std::hypot(p.x1 - fixtures::kA_fstar_x1_at_0p5,
                                      p.x2 - fixtures::kA_fstar_x2_at_0p5);
        result.require(gap <= 1e-8, "distance to (2 sqrt 2, 6 sqrt 2 - 3) = " + fmt(gap));
    }
    return result;
}

Outcome criterion_5_sweep_events() {
    Outcome result;
    const ChemostatConfig config = fixtures::config33(0.5);
    const BranchDiagram diagram = sweep(kA, config, 0.1, 1.5, 560);
    result.require(diagram.events.size() == 4,
                   "expected 4 events, got " + std::to_string(diagram.events.size()));
    const double expected[4] = {0.6, 8.0 / 9.0, 1.0, 1.2};
    for (std::size_t k = 0; k < diagram.events.size() && k < 4; ++k) {
        result.require(std::abs(diagram.events[k].D - expected[k]) < 1e-6,
                       "event " + std::to_string(k) + " at " + fmt(diagram.events[k].D));
    }
    if (diagram.events.size() == 4) {
        const BifurcationEvent& fold = diagram.events[2];
        result.require(fold.kind == EventKind::saddle_node, "D=1 event not a saddle_node");
        result.require(fold.point.has_value(), "fold lacks a coalescence point");
        if (fold.point) {
            for (double offset : {-1e-6, 1e-6}) {
                const Mat2 J = reduced_jacobian(kA, config, fold.D + offset, *fold.point);
                result.require(std::abs(J.det()) < 1e-4,
                               "det at fold offset " + fmt(offset) + " is " +
                                   fmt(std::abs(J.det())));
            }
        }
    }
    return result;
}

Outcome criterion_6_bistability_a() {
    Outcome result;
    const ChemostatConfig config = fixtures::config33(0.95);
    const BasinGrid grid = classify_basins(kA, config, 0.95, 100, 100);
    const bool has_boundary = std::count(grid.labels.begin(), grid.labels.end(),
                                         CellLabel::F1_boundary) > 0;
    const bool has_coexistence =
        std::count(grid.labels.begin(), grid.labels.end(), CellLabel::F_star) > 0;
    result.require(has_boundary && has_coexistence, "both basins must be populated");
    result.require(grid.unresolved_fraction() < 0.02,
                   "unresolved fraction " + fmt(grid.unresolved_fraction()));

    const RegimeReport regime = classify_regime(kA, config, 0.95);
    const EquilibriumRecord* saddle = nullptr;
    for (const auto& r : regime.equilibria) {
        if (r.kind == EquilibriumKind::F_star && r.stability == Stability::saddle) {
            saddle = &r;
        }
    }
    result.require(saddle != nullptr, "no interior saddle");
    if (saddle) {
        const Separatrix sep = compute_separatrix(kA, config, 0.95, *saddle);
        const ProbeCheck probes =
            probe_separatrix(kA, config, 0.95, sep, grid.attractors, 50, 1e-3, 20240);
        result.require(probes.used >= 25, "only " + std::to_string(probes.used) +
                                              " usable probe pairs");
        result.require(probes.split == probes.used,
                       std::to_string(probes.split) + "/" + std::to_string(probes.used) +
                           " pairs split cleanly");
    }
    return result;
}

Outcome criterion_7_bistability_b() {
    Outcome result;
    const BasinGrid grid = classify_basins(kB, fixtures::config33(1.5), 1.5, 100, 100);
    const bool washout =
        std::count(grid.labels.begin(), grid.labels.end(), CellLabel::F0) > 0;
    const bool coexistence =
        std::count(grid.labels.begin(), grid.labels.end(), CellLabel::F_star) > 0;
    result.require(washout, "washout basin missing");
    result.require(coexistence, "coexistence basin missing");
    return result;
}

Outcome criterion_8_conservation() {
    Outcome result;
    const ChemostatConfig config = fixtures::config33(0.5);
    const double t_end = 200.0 / config.D;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> box(0.0, 6.0);
    IntegrateOptions opts;
    for (int i = 1; i <= 50; ++i) opts.sample_times.push_back(t_end * i / 50);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const FullState init{box(rng), box(rng), box(rng), box(rng)};
        const FullTrajectory traj = integrate_full(kA, config, init, t_end, opts);
        const ConservationError err = conservation_error(config, traj);
        worst = std::max({worst, err.z1, err.z2});
    }
    result.require(worst <= 1e-8, "worst aggregate deviation " + fmt(worst));
    result.detail << "max deviation " << fmt(worst);
    return result;
}

Outcome criterion_9_reduction_consistency() {
    Outcome result;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (double D : kRegimesA) {
        const ChemostatConfig config = fixtures::config33(D);
        const RegimeReport regime = classify_regime(kA, config, D);
        std::vector<PlanarState> line;
        for (const auto& r : regime.equilibria) {
            if (r.kind == EquilibriumKind::F_star && r.stability == Stability::saddle) {
                line = compute_separatrix(kA, config, D, r).polyline();
            }
        }
        int accepted = 0;
        int attempts = 0;
        while (accepted < 20 && attempts < 400) {
            ++attempts;
            const double x1 = 0.05 + 2.9 * uniform(rng);
            const double x2 = 0.05 + (x1 + 2.9) * uniform(rng);
            if (x2 > x1 + 2.95) continue;
            if (!line.empty() && polyline_distance(line, {x1, x2}) < 1e-2) continue;
            // Off-plane offsets small enough that the transient shift of the
            // basin boundary stays inside the separatrix exclusion band.
            const double ds1 = -0.05 + 0.1 * uniform(rng);
            const double ds2 = -0.05 + 0.1 * uniform(rng);
            const FullState init{std::max(config.s1_in - x1 + ds1, 0.0), x1,
                                 std::max(config.s2_in + x1 - x2 + ds2, 0.0), x2};
            ++accepted;
            const auto from_full =
                settle_full(kA, config, D, init, regime.equilibria, 500.0 / D);
            const auto from_reduced =
                settle_reduced(kA, config, D, {x1, x2}, regime.equilibria, 500.0 / D);
            const bool agree =
                from_full && from_reduced && *from_full == *from_reduced;
            if (!agree) {
                result.require(false, "mismatch at D=" + fmt(D) + " start (" + fmt(x1) +
                                          ", " + fmt(x2) + ")");
            }
        }
        result.require(accepted == 20, "could not place 20 starts at D=" + fmt(D));
    }
    return result;
}

Outcome criterion_10_no_cycles() {
    Outcome result;
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    int converged = 0;
    for (double D : kRegimesA) {
        const ChemostatConfig config = fixtures::config33(D);
        IntegrateOptions opts;
        opts.stop_speed = 1e-6;
        for (int trial = 0; trial < 40; ++trial) {
            const double x1 = 0.02 + 2.96 * uniform(rng);
            const double x2 = 0.02 + (x1 + 2.96) * uniform(rng);
            if (x2 > x1 + 2.99) {
                --trial;  // stay inside the region
                continue;
            }
            const PlanarTrajectory traj =
                integrate_reduced(kA, config, {x1, x2}, 500.0 / D, opts);
            if (traj.termination == Termination::converged) {
                ++converged;
            } else {
                result.require(false, "trajectory from (" + fmt(x1) + ", " + fmt(x2) +
                                          ") at D=" + fmt(D) + " never slowed down");
            }
        }
    }
    result.detail << converged << "/200 converged";
    return result;
}

Outcome criterion_11_jacobian_cross_validation() {
    Outcome result;
    std::vector<std::pair<double, const GrowthModel*>> contexts;
    for (double D : kRegimesA) contexts.push_back({D, &kA});
    contexts.push_back({1.5, &kB});
    contexts.push_back({0.95, &kA});
    for (const auto& [D, model] : contexts) {
        const ChemostatConfig config = fixtures::config33(D);
        const RegimeReport report = classify_regime(*model, config, D);
        for (const auto& r : report.equilibria) {
            auto field = [&](PlanarState p) { return reduced_field(*model, config, D, p); };
            const Mat2 fd = oracle::fd_jacobian(field, r.location);
            const double gap = oracle::frobenius_gap(r.jacobian, fd);
            result.require(gap <= 1e-5 * std::max(1.0, oracle::frobenius(r.jacobian)),
                           std::string("Jacobian gap ") + fmt(gap) + " at D=" + fmt(D));
            if (r.kind == EquilibriumKind::F_star) {
                result.require(r.slope1.has_value() && r.slope2.has_value(),
                               "missing graph slopes at a coexistence point");
                if (r.slope1 && r.slope2) {
                    const bool det_positive = r.jacobian.det() > 0.0;
                    result.require(det_positive == (*r.slope1 > *r.slope2),
                                   "slope test disagrees with det sign at D=" + fmt(D));
                }
            }
        }
    }
    return result;
}

Outcome criterion_12_parity() {
    Outcome result;
    const int draws = 1000;
    std::atomic<int> odd_violations{0};
    std::atomic<int> even_violations{0};
    std::atomic<int> skipped{0};
    parallel_for(draws, 0, [&](std::size_t i) {
        std::mt19937_64 rng(0x5eed0000 + i);
        std::uniform_real_distribution<double> log_uniform(std::log(0.1), std::log(10.0));
        auto draw = [&] { return std::exp(log_uniform(rng)); };
        const MonodParams p{draw(), draw(), draw(), draw(), draw(), draw()};
        const GrowthModel model = GrowthModel::monod_product(p);
        const ChemostatConfig config = fixtures::config33(1.0);
        const Thresholds th = compute_thresholds(model, config);
        const double lo = std::min(th.D1, th.D2);
        const double hi = std::max(th.D1, th.D2);

        const PositiveEquilibria below = find_positive_equilibria(model, config, 0.5 * lo);
        if (below.near_degenerate) {
            ++skipped;
        } else if (below.records.size() % 2 != 1 || below.records.empty()) {
            ++odd_violations;
        }
        const PositiveEquilibria above = find_positive_equilibria(model, config, 1.5 * hi);
        if (above.near_degenerate) {
            ++skipped;
        } else if (above.records.size() % 2 != 0) {
            ++even_violations;
        }
    });
    result.require(odd_violations == 0,
                   std::to_string(odd_violations) + " draws below min(D1,D2) with even count");
    result.require(even_violations == 0,
                   std::to_string(even_violations) + " draws above max(D1,D2) with odd count");
    result.detail << draws << " draws, " << skipped << " near-degenerate skipped";
    return result;
}

struct Criterion {
    int id;
    const char* label;
    std::function<Outcome()> run;
    double budget_seconds;  // 0 = no stated budget
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "thresholds, set A: (D1, D2, D3) = (6/5, 3/5, 8/9) to 1e-10",
         criterion_1_thresholds_a, 1.0},
        {2, "thresholds, set B: (D1, D2) = (4/3, 21/16) to 1e-10",
         criterion_2_thresholds_b, 0.0},
        {3, "five regimes of set A: counts (4,3,4,2,1) and stability multisets",
         criterion_3_five_regimes, 5.0},
        {4, "closed-form coexistence point at D = 1/2 to 1e-8",
         criterion_4_closed_form_coexistence, 0.0},
        {5, "sweep [0.1,1.5]: four events, fold at D=1 with vanishing det",
         criterion_5_sweep_events, 30.0},
        {6, "bistability of set A at D = 0.95: basins, unresolved < 2%, 50 probe pairs",
         criterion_6_bistability_a, 60.0},
        {7, "bistability of set B at D = 1.5: washout and coexistence basins",
         criterion_7_bistability_b, 60.0},
        {8, "conserved aggregates track their exponentials to 1e-8 (50 starts)",
         criterion_8_conservation, 0.0},
        {9, "4D and reduced attractors agree for 20 starts per regime",
         criterion_9_reduction_consistency, 0.0},
        {10, "200 random reduced trajectories all converge (speed < 1e-6)",
         criterion_10_no_cycles, 0.0},
        {11, "analytic vs finite-difference Jacobians and the slope test",
         criterion_11_jacobian_cross_validation, 0.0},
        {12, "coexistence-count parity over 1000 random parameter draws",
         criterion_12_parity, 300.0},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.detail << "exception: " << e.what();
        }
        const double seconds =
            std::chrono::duration_cast<std::chrono::duration<double>>(
                std::chrono::steady_clock::now() - start)
                .count();
        if (criterion.budget_seconds > 0.0 && seconds > criterion.budget_seconds) {
            outcome.ok = false;
            outcome.detail << (outcome.detail.str().empty() ? "" : "; ") << "over budget ("
                           << fmt(seconds) << " s > " << fmt(criterion.budget_seconds)
                           << " s)";
        }
        if (!outcome.ok) ++failures;
        std::printf("[%s] criterion %2d: %s  (%.2f s)%s%s\n", outcome.ok ? "PASS" : "FAIL",
                    criterion.id, criterion.label, seconds,
                    outcome.detail.str().empty() ? "" : " -- ",
                    outcome.detail.str().c_str());
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
