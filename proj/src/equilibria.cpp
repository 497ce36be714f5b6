#include "syntro/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace syntro {

namespace {

constexpr double kHyperbolicTol = 1e-9;
constexpr double kResidualTol = 1e-9;
constexpr double kThresholdCollisionTol = 1e-9;
constexpr double kThresholdTieTol = 1e-12;

double phi_at(const GrowthModel& model, const ChemostatConfig& config, int which,
              double x1, double x2) {
    const double s1 = std::max(config.s1_in - x1, 0.0);
    const double s2 = std::max(config.s2_in + x1 - x2, 0.0);
    return model.value(which, s1, s2);
}

GrowthPartials partials_at(const GrowthModel& model, const ChemostatConfig& config,
                           int which, double x1, double x2) {
    const double s1 = std::max(config.s1_in - x1, 0.0);
    const double s2 = std::max(config.s2_in + x1 - x2, 0.0);
    return model.partials(which, s1, s2);
}

void require_hypotheses(const GrowthModel& model, const ChemostatConfig& config) {
    GridSpec grid = default_grid(config);
    grid.n1 = 9;
    grid.n2 = 9;
    const HypothesisReport report = check_hypotheses(model, grid);
    if (!report.pass) {
        throw std::invalid_argument("growth model violates hypothesis " +
                                    report.violations.front().hypothesis);
    }
}

/// Bisection for a sign change of a continuous (not necessarily monotone)
/// function on a bracketing interval.
template <class F>
double bisect_sign_change(F&& f, double lo, double hi, double flo, double xtol) {
    const bool lo_negative = flo < 0.0;
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Stability stability_from_eigenvalues(const std::array<std::complex<double>, 2>& ev) {
    const double r1 = ev[0].real();
    const double r2 = ev[1].real();
    if (std::abs(r1) < kHyperbolicTol || std::abs(r2) < kHyperbolicTol) {
        return Stability::nonhyperbolic;
    }
    if (r1 < 0.0 && r2 < 0.0) return Stability::stable_node;
    if (r1 > 0.0 && r2 > 0.0) return Stability::unstable_node;
    return Stability::saddle;
}

double record_residual(const GrowthModel& model, const ChemostatConfig& config, double D,
                       const EquilibriumRecord& record) {
    const double x1 = record.location.x1;
    const double x2 = record.location.x2;
    switch (record.kind) {
        case EquilibriumKind::F0:
            return 0.0;
        case EquilibriumKind::F1_boundary:
            return std::abs(phi_at(model, config, 1, x1, 0.0) - D);
        case EquilibriumKind::F2_boundary:
            return std::abs(phi_at(model, config, 2, 0.0, x2) - D);
        case EquilibriumKind::F_star:
            return std::max(std::abs(phi_at(model, config, 1, x1, x2) - D),
                            std::abs(phi_at(model, config, 2, x1, x2) - D));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Joint Newton refinement of a coexistence equilibrium candidate on the
/// residual map (phi_1 - D, phi_2 - D).
PlanarState polish_positive(const GrowthModel& model, const ChemostatConfig& config,
                            double D, PlanarState p) {
    for (int it = 0; it < 8; ++it) {
        const double r1 = phi_at(model, config, 1, p.x1, p.x2) - D;
        const double r2 = phi_at(model, config, 2, p.x1, p.x2) - D;
        if (std::max(std::abs(r1), std::abs(r2)) < 1e-14 * (1.0 + D)) break;
        const GrowthPartials g1 = partials_at(model, config, 1, p.x1, p.x2);
        const GrowthPartials g2 = partials_at(model, config, 2, p.x1, p.x2);
        Mat2 J{-g1.d_s1 + g1.d_s2, -g1.d_s2, -g2.d_s1 + g2.d_s2, -g2.d_s2};
        const double det = J.det();
        if (det == 0.0) break;
        const double dx1 = (J.a22 * r1 - J.a12 * r2) / det;
        const double dx2 = (-J.a21 * r1 + J.a11 * r2) / det;
        PlanarState next{p.x1 - dx1, p.x2 - dx2};
        if (!in_region_closure(config, next)) break;
        p = next;
    }
    return p;
}

}  // namespace

const char* to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::F0: return "F0";
        case EquilibriumKind::F1_boundary: return "F1_boundary";
        case EquilibriumKind::F2_boundary: return "F2_boundary";
        case EquilibriumKind::F_star: return "F_star";
    }
    return "?";
}

const char* to_string(Stability stability) {
    switch (stability) {
        case Stability::stable_node: return "stable_node";
        case Stability::unstable_node: return "unstable_node";
        case Stability::saddle: return "saddle";
        case Stability::nonhyperbolic: return "nonhyperbolic";
    }
    return "?";
}

const char* to_string(RegimeCase c) {
    switch (c) {
        case RegimeCase::case1: return "case1";
        case RegimeCase::case2a: return "case2a";
        case RegimeCase::case2b: return "case2b";
        case RegimeCase::case2c: return "case2c";
        case RegimeCase::case2d: return "case2d";
        case RegimeCase::case3: return "case3";
    }
    return "?";
}

at_bifurcation_error::at_bifurcation_error(std::string threshold, double value)
    : std::runtime_error("dilution rate collides with threshold " + threshold),
      threshold_(std::move(threshold)),
      value_(value) {}

Thresholds compute_thresholds(const GrowthModel& model, const ChemostatConfig& config) {
    config.validate();
    require_hypotheses(model, config);

    Thresholds th;
    th.D1 = model.value(1, config.s1_in, config.s2_in);
    th.D2 = model.value(2, config.s1_in, config.s2_in);

    if (th.D1 - th.D2 > kThresholdTieTol) {
        // The two axis profiles phi_1(., 0) and phi_2(., 0) run in opposite
        // directions, so their difference crosses zero once on (0, s1_in).
        auto diff = [&](double x1) {
            return phi_at(model, config, 1, x1, 0.0) - phi_at(model, config, 2, x1, 0.0);
        };
        auto root = detail::solve_monotone(diff, 0.0, config.s1_in, 0.0);
        if (root) {
            double xi1 = *root;
            for (int it = 0; it < 3; ++it) {
                const GrowthPartials g1 = partials_at(model, config, 1, xi1, 0.0);
                const GrowthPartials g2 = partials_at(model, config, 2, xi1, 0.0);
                const double slope = (-g1.d_s1 + g1.d_s2) - (-g2.d_s1 + g2.d_s2);
                if (slope == 0.0) break;
                const double next = xi1 - diff(xi1) / slope;
                if (!(next > 0.0 && next < config.s1_in)) break;
                xi1 = next;
            }
            th.xi1 = xi1;
            th.D3 = phi_at(model, config, 1, xi1, 0.0);
        }
    } else if (th.D2 - th.D1 > kThresholdTieTol) {
        auto diff = [&](double x2) {
            return phi_at(model, config, 1, 0.0, x2) - phi_at(model, config, 2, 0.0, x2);
        };
        auto root = detail::solve_monotone(diff, 0.0, config.s2_in, 0.0);
        if (root) {
            double xi2 = *root;
            for (int it = 0; it < 3; ++it) {
                const GrowthPartials g1 = partials_at(model, config, 1, 0.0, xi2);
                const GrowthPartials g2 = partials_at(model, config, 2, 0.0, xi2);
                const double slope = -g1.d_s2 + g2.d_s2;
                if (slope == 0.0) break;
                const double next = xi2 - diff(xi2) / slope;
                if (!(next > 0.0 && next < config.s2_in)) break;
                xi2 = next;
            }
            th.xi2 = xi2;
            th.D4 = phi_at(model, config, 1, 0.0, xi2);
        }
    }
    return th;
}

std::optional<EquilibriumRecord> find_boundary_F1(const GrowthModel& model,
                                                  const ChemostatConfig& config, double D) {
    if (!(D > 0.0)) throw std::invalid_argument("D must be positive");
    const double D1 = model.value(1, config.s1_in, config.s2_in);
    if (!(D < D1)) return std::nullopt;
    auto psi = [&](double x1) { return phi_at(model, config, 1, x1, 0.0); };
    auto root = detail::solve_monotone(psi, 0.0, config.s1_in, D);
    if (!root) return std::nullopt;
    double x1 = *root;
    for (int it = 0; it < 3; ++it) {
        const GrowthPartials g = partials_at(model, config, 1, x1, 0.0);
        const double slope = -g.d_s1 + g.d_s2;
        if (slope == 0.0) break;
        const double next = x1 - (psi(x1) - D) / slope;
        if (!(next >= 0.0 && next <= config.s1_in)) break;
        x1 = next;
    }
    EquilibriumRecord record;
    record.kind = EquilibriumKind::F1_boundary;
    record.location = {x1, 0.0};
    return classify_equilibrium(model, config, D, record);
}

std::optional<EquilibriumRecord> find_boundary_F2(const GrowthModel& model,
                                                  const ChemostatConfig& config, double D) {
    if (!(D > 0.0)) throw std::invalid_argument("D must be positive");
    const double D2 = model.value(2, config.s1_in, config.s2_in);
    if (!(D < D2)) return std::nullopt;
    auto psi = [&](double x2) { return phi_at(model, config, 2, 0.0, x2); };
    auto root = detail::solve_monotone(psi, 0.0, config.s2_in, D);
    if (!root) return std::nullopt;
    double x2 = *root;
    for (int it = 0; it < 3; ++it) {
        const GrowthPartials g = partials_at(model, config, 2, 0.0, x2);
        const double slope = -g.d_s2;
        if (slope == 0.0) break;
        const double next = x2 - (psi(x2) - D) / slope;
        if (!(next >= 0.0 && next <= config.s2_in)) break;
        x2 = next;
    }
    EquilibriumRecord record;
    record.kind = EquilibriumKind::F2_boundary;
    record.location = {0.0, x2};
    return classify_equilibrium(model, config, D, record);
}

PositiveEquilibria find_positive_equilibria(const GrowthModel& model,
                                            const ChemostatConfig& config, double D,
                                            int scan_samples) {
    if (!(D > 0.0)) throw std::invalid_argument("D must be positive");
    if (scan_samples < 2) throw std::invalid_argument("scan needs at least two samples");

    PositiveEquilibria result;
    // Scanning the level residual of species 1 along the graph of species 2
    // has the same sign structure as F2 - F1 but is defined on the whole
    // feasible interval of the second graph, so crossings that sit against
    // the feasibility edge of the first graph are still bracketed.
    const Interval domain = graph_domain(model, config, 2, D).domain;
    if (domain.empty()) return result;

    auto along_gamma2 = [&](double x1) -> double {
        const auto x2 = graph_value(model, config, 2, D, x1);
        if (!x2) return std::numeric_limits<double>::quiet_NaN();
        return phi_at(model, config, 1, x1, *x2) - D;
    };

    const int n = scan_samples;
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> hs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[i] = domain.lo + domain.length() * static_cast<double>(i) / (n - 1);
        hs[i] = along_gamma2(xs[i]);
    }

    std::vector<int> root_brackets;
    std::vector<double> roots_x1;
    for (int i = 0; i + 1 < n; ++i) {
        if (std::isnan(hs[i]) || std::isnan(hs[i + 1])) continue;
        if (hs[i] == 0.0) {
            roots_x1.push_back(xs[i]);
            root_brackets.push_back(i);
            continue;
        }
        if ((hs[i] < 0.0) != (hs[i + 1] < 0.0)) {
            roots_x1.push_back(
                bisect_sign_change(along_gamma2, xs[i], xs[i + 1], hs[i], 1e-12));
            root_brackets.push_back(i);
        }
    }

    // A close approach of the two graphs without a crossing marks a possible
    // tangency the scan cannot resolve.
    for (int i = 0; i < n; ++i) {
        // The graph gap is only worth resolving where the residual is small.
        if (std::isnan(hs[i]) || std::abs(hs[i]) >= 1e-4) continue;
        const auto f1_here = graph_value(model, config, 1, D, xs[i]);
        const auto f2_here = graph_value(model, config, 2, D, xs[i]);
        if (!f1_here || !f2_here || std::abs(*f1_here - *f2_here) >= 1e-8) continue;
        bool near_root = false;
        for (int b : root_brackets) {
            if (std::abs(i - b) <= 2) {
                near_root = true;
                break;
            }
        }
        if (!near_root) {
            result.near_degenerate = true;
            break;
        }
    }

    for (double x1 : roots_x1) {
        const auto x2 = graph_value(model, config, 2, D, x1);
        if (!x2) continue;
        PlanarState p = polish_positive(model, config, D, {x1, *x2});
        if (!(p.x1 > 0.0 && p.x2 > 0.0) || !in_region_closure(config, p)) continue;
        if (!result.records.empty() &&
            std::abs(result.records.back().location.x1 - p.x1) < 1e-9) {
            continue;
        }
        EquilibriumRecord record;
        record.kind = EquilibriumKind::F_star;
        record.location = p;
        result.records.push_back(classify_equilibrium(model, config, D, record));
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const EquilibriumRecord& a, const EquilibriumRecord& b) {
                  return a.location.x1 < b.location.x1;
              });
    return result;
}

Mat2 reduced_jacobian(const GrowthModel& model, const ChemostatConfig& config, double D,
                      PlanarState state) {
    const double x1 = state.x1;
    const double x2 = state.x2;
    const double phi1 = phi_at(model, config, 1, x1, x2);
    const double phi2 = phi_at(model, config, 2, x1, x2);
    const GrowthPartials g1 = partials_at(model, config, 1, x1, x2);
    const GrowthPartials g2 = partials_at(model, config, 2, x1, x2);
    Mat2 J;
    J.a11 = (phi1 - D) + x1 * (-g1.d_s1 + g1.d_s2);
    J.a12 = x1 * (-g1.d_s2);
    J.a21 = x2 * (-g2.d_s1 + g2.d_s2);
    J.a22 = (phi2 - D) + x2 * (-g2.d_s2);
    return J;
}

EquilibriumRecord classify_equilibrium(const GrowthModel& model,
                                       const ChemostatConfig& config, double D,
                                       EquilibriumRecord record) {
    record.residual = record_residual(model, config, D, record);
    if (!(record.residual <= kResidualTol)) {
        throw std::invalid_argument("equilibrium residual exceeds tolerance");
    }
    record.jacobian = reduced_jacobian(model, config, D, record.location);
    record.eigenvalues = eigenvalues(record.jacobian);
    record.stability = stability_from_eigenvalues(record.eigenvalues);
    if (record.kind == EquilibriumKind::F_star) {
        record.slope1 = graph_slope(model, config, 1, D, record.location.x1);
        record.slope2 = graph_slope(model, config, 2, D, record.location.x1);
    } else {
        record.slope1.reset();
        record.slope2.reset();
    }
    return record;
}

namespace {

RegimeReport classify_regime_impl(const GrowthModel& model, const ChemostatConfig& config,
                                  double D, bool gate_bifurcations) {
    if (!(D > 0.0)) throw std::invalid_argument("D must be positive");
    RegimeReport report;
    report.D = D;
    report.thresholds = compute_thresholds(model, config);
    const Thresholds& th = report.thresholds;

    if (gate_bifurcations) {
        auto collide = [D](const char* name, std::optional<double> value) {
            if (value && std::abs(D - *value) < kThresholdCollisionTol) {
                throw at_bifurcation_error(name, *value);
            }
        };
        collide("D1", th.D1);
        collide("D2", th.D2);
        collide("D3", th.D3);
        collide("D4", th.D4);
    }

    const double lo = std::min(th.D1, th.D2);
    const double hi = std::max(th.D1, th.D2);
    if (D < lo) {
        report.case_label = RegimeCase::case1;
    } else if (D > hi) {
        report.case_label = RegimeCase::case3;
    } else if (th.D1 < th.D2) {
        report.case_label =
            (th.D4 && D < *th.D4) ? RegimeCase::case2a : RegimeCase::case2b;
    } else if (th.D2 < th.D1) {
        report.case_label =
            (th.D3 && D < *th.D3) ? RegimeCase::case2c : RegimeCase::case2d;
    } else {
        report.case_label = RegimeCase::case3;  // D1 == D2 == D, measure zero
    }

    EquilibriumRecord washout;
    washout.kind = EquilibriumKind::F0;
    washout.location = {0.0, 0.0};
    report.equilibria.push_back(classify_equilibrium(model, config, D, washout));
    if (auto f1 = find_boundary_F1(model, config, D)) report.equilibria.push_back(*f1);
    if (auto f2 = find_boundary_F2(model, config, D)) report.equilibria.push_back(*f2);

    PositiveEquilibria positives = find_positive_equilibria(model, config, D);
    report.near_degenerate = positives.near_degenerate;
    const std::size_t n_positive = positives.records.size();
    for (const auto& r : positives.records) report.equilibria.push_back(r);

    std::vector<EquilibriumKind> stable;
    for (const auto& r : report.equilibria) {
        if (r.stability == Stability::stable_node) stable.push_back(r.kind);
    }
    if (n_positive <= 1) {
        EquilibriumKind predicted = EquilibriumKind::F0;
        switch (report.case_label) {
            case RegimeCase::case1:
            case RegimeCase::case2a:
            case RegimeCase::case2c: predicted = EquilibriumKind::F_star; break;
            case RegimeCase::case2b: predicted = EquilibriumKind::F2_boundary; break;
            case RegimeCase::case2d: predicted = EquilibriumKind::F1_boundary; break;
            case RegimeCase::case3: predicted = EquilibriumKind::F0; break;
        }
        const bool present =
            std::any_of(report.equilibria.begin(), report.equilibria.end(),
                        [predicted](const EquilibriumRecord& r) { return r.kind == predicted; });
        report.predicted_attractors = present ? std::vector<EquilibriumKind>{predicted} : stable;
    } else {
        report.predicted_attractors = stable;
    }
    return report;
}

}  // namespace

RegimeReport classify_regime(const GrowthModel& model, const ChemostatConfig& config,
                             double D) {
    return classify_regime_impl(model, config, D, true);
}

RegimeReport classify_regime_unchecked(const GrowthModel& model,
                                       const ChemostatConfig& config, double D) {
    return classify_regime_impl(model, config, D, false);
}

}  // namespace syntro
