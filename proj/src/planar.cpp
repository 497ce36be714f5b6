#include "syntro/planar.hpp"

#include <cmath>
#include <stdexcept>

namespace syntro {

namespace {

constexpr double kGraphXtol = 1e-12;
constexpr int kGraphMaxIter = 200;

struct Substituted {
    double s1, s2;
};

Substituted substitute(const ChemostatConfig& config, PlanarState state) {
    return {config.s1_in - state.x1, config.s2_in + state.x1 - state.x2};
}

double phi_raw(const GrowthModel& model, const ChemostatConfig& config, int which,
               double x1, double x2) {
    const Substituted s = substitute(config, {x1, x2});
    return model.value(which, s.s1, s.s2);
}

}  // namespace

double phi(const GrowthModel& model, const ChemostatConfig& config, int which,
           PlanarState state) {
    const Substituted s = substitute(config, state);
    if (s.s1 < 0.0 || s.s2 < 0.0) {
        throw std::domain_error("state outside the invariant plane region");
    }
    return model.value(which, s.s1, s.s2);
}

bool in_region(const ChemostatConfig& config, PlanarState state) {
    return state.x1 > 0.0 && state.x1 <= config.s1_in && state.x2 > 0.0 &&
           state.x2 <= state.x1 + config.s2_in;
}

bool in_region_closure(const ChemostatConfig& config, PlanarState state) {
    return state.x1 >= 0.0 && state.x1 <= config.s1_in && state.x2 >= 0.0 &&
           state.x2 <= state.x1 + config.s2_in;
}

std::optional<double> graph_value(const GrowthModel& model, const ChemostatConfig& config,
                                  int which, double D, double x1) {
    if (x1 < 0.0 || x1 > config.s1_in) return std::nullopt;
    const double top = x1 + config.s2_in;
    auto f = [&](double x2) { return phi_raw(model, config, which, x1, x2); };
    auto root = detail::solve_monotone(f, 0.0, top, D, kGraphXtol, kGraphMaxIter);
    if (!root) {
        // The level can graze an endpoint to within rounding, which loses
        // the sign bracket; accept the endpoint as the boundary root.
        const double graze = 1e-13 * (1.0 + std::abs(D));
        if (std::abs(f(0.0) - D) <= graze) {
            root = 0.0;
        } else if (std::abs(f(top) - D) <= graze) {
            root = top;
        } else {
            return std::nullopt;
        }
    }

    // Newton polish against the analytic x2-derivative of phi; keeps the
    // level-set residual near round-off.
    double x2 = *root;
    for (int it = 0; it < 3; ++it) {
        const Substituted s = substitute(config, {x1, x2});
        if (s.s2 < 0.0) break;
        const double r = model.value(which, s.s1, s.s2) - D;
        const double slope = -model.partials(which, s.s1, s.s2).d_s2;
        if (slope == 0.0) break;
        const double next = x2 - r / slope;
        if (!(next >= 0.0 && next <= top)) break;
        x2 = next;
    }
    return x2;
}

std::optional<double> graph_slope(const GrowthModel& model, const ChemostatConfig& config,
                                  int which, double D, double x1) {
    const auto x2 = graph_value(model, config, which, D, x1);
    if (!x2) return std::nullopt;
    const Substituted s = substitute(config, {x1, *x2});
    const GrowthPartials g = model.partials(which, s.s1, std::max(s.s2, 0.0));
    if (g.d_s2 == 0.0) return std::nullopt;
    return 1.0 - g.d_s1 / g.d_s2;
}

GraphFunction graph_domain(const GrowthModel& model, const ChemostatConfig& config,
                           int which, double D) {
    GraphFunction graph{which, D, Interval{}};
    const double s1_in = config.s1_in;
    auto feasible = [&](double x1) { return graph_value(model, config, which, D, x1).has_value(); };

    if (which == 1) {
        // phi_1(x1, .) ranges over [phi_1(x1,0), f1(s1_in - x1, 0)]; the lower
        // edge decreases in x1, the upper edge decreases as well, so the
        // feasible set is a single interval.
        const double lo_edge0 = phi_raw(model, config, 1, 0.0, 0.0);
        double lo = 0.0;
        if (D < lo_edge0) {
            auto entry = detail::solve_monotone(
                [&](double x1) { return phi_raw(model, config, 1, x1, 0.0); }, 0.0, s1_in, D,
                kGraphXtol, kGraphMaxIter);
            if (!entry) return graph;
            lo = *entry;
        }
        auto upper = [&](double x1) { return model.value(1, s1_in - x1, 0.0); };
        if (upper(lo) < D) return graph;
        double hi = s1_in;
        if (upper(s1_in) < D) {
            auto exit = detail::solve_monotone(upper, lo, s1_in, D, kGraphXtol, kGraphMaxIter);
            if (exit) hi = *exit;
        }
        if (hi >= lo && feasible(0.5 * (lo + hi))) graph.domain = Interval{lo, hi};
        return graph;
    }
    if (which == 2) {
        // phi_2(x1, .) decreases from phi_2(x1, 0) to 0, so a solution exists
        // exactly when D <= phi_2(x1, 0), and phi_2(., 0) is increasing.
        auto lower = [&](double x1) { return phi_raw(model, config, 2, x1, 0.0); };
        double lo = 0.0;
        if (lower(0.0) < D) {
            if (lower(s1_in) < D) return graph;
            auto entry = detail::solve_monotone(lower, 0.0, s1_in, D, kGraphXtol, kGraphMaxIter);
            if (!entry) return graph;
            lo = *entry;
        }
        if (feasible(0.5 * (lo + s1_in))) graph.domain = Interval{lo, s1_in};
        return graph;
    }
    throw std::invalid_argument("graph index must be 1 or 2");
}

std::vector<PlanarState> nullcline_polyline(const GrowthModel& model,
                                            const ChemostatConfig& config, int which,
                                            double D, int samples) {
    if (samples < 2) throw std::invalid_argument("polyline needs at least two samples");
    std::vector<PlanarState> points;
    const GraphFunction graph = graph_domain(model, config, which, D);
    if (graph.domain.empty()) return points;
    points.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double x1 = graph.domain.lo +
                          graph.domain.length() * static_cast<double>(i) / (samples - 1);
        const auto x2 = graph_value(model, config, which, D, x1);
        if (x2) points.push_back({x1, *x2});
    }
    return points;
}

}  // namespace syntro
