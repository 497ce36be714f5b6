#include "syntro/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "syntro/io.hpp"

namespace syntro {

namespace {

// Dormand-Prince 5(4) pair, first-same-as-last. Stage abscissas are not
// needed: both systems are autonomous.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <int N>
using Vec = std::array<double, N>;

template <int N>
double norm2(const Vec<N>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

template <int N, class Field>
struct Result {
    std::vector<double> times;
    std::vector<Vec<N>> states;
    Termination termination = Termination::t_end;
};

/// Adaptive Dormand-Prince driver with PI step control. Components of the
/// state are projected to zero when a step leaves them inside the negative
/// band (-abs_tol, 0); an excursion beyond that band, or a step-size
/// underflow, aborts with Termination::blowup_guard.
template <int N, class Field>
Result<N, Field> dopri5(const Field& field, Vec<N> y, double t_end,
                        const IntegrateOptions& opts) {
    Result<N, Field> out;
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0)) {
        throw std::invalid_argument("tolerances must be positive");
    }

    const bool record_steps = opts.sample_times.empty();
    std::size_t next_sample = 0;
    // Leading samples at t <= 0 are emitted with the initial state.
    out.times.push_back(0.0);
    out.states.push_back(y);
    while (!record_steps && next_sample < opts.sample_times.size() &&
           opts.sample_times[next_sample] <= 0.0) {
        ++next_sample;
    }

    double t = 0.0;
    Vec<N> k1 = field(y);

    // Initial step from the tolerance-weighted ratio of state to derivative
    // norms (the weights cancel, leaving the local time scale).
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        h = (d0 > 0.0 && d1 > 0.0) ? 0.01 * std::sqrt(d0 / d1) : 1e-6 * t_end;
        h = std::min(h, 0.1 * t_end);
        if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    }

    double facold = 1e-4;
    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    constexpr double safety = 0.9;
    const long max_steps = 20'000'000;

    Vec<N> k2, k3, k4, k5, k6, k7, ynew, ytmp;
    for (long step = 0; step < max_steps; ++step) {
        if (t >= t_end) break;
        double target = t_end;
        if (!record_steps && next_sample < opts.sample_times.size()) {
            target = std::min(target, opts.sample_times[next_sample]);
        }
        // h is the controller's free-running step; h_use the one actually
        // taken, possibly clipped to land exactly on the next output time.
        double h_use = h;
        bool clipped = false;
        if (t + h_use >= target) {
            h_use = target - t;
            clipped = true;
        }
        if (h_use < 1e-14 * std::max(1.0, std::abs(t))) {
            if (clipped) {
                // Remainder below round-off; snap to the target.
                t = target;
                if (!record_steps && next_sample < opts.sample_times.size() &&
                    target == opts.sample_times[next_sample]) {
                    out.times.push_back(t);
                    out.states.push_back(y);
                    ++next_sample;
                }
                continue;
            }
            out.termination = Termination::blowup_guard;
            out.times.push_back(t);
            out.states.push_back(y);
            return out;
        }

        auto stage = [&](const Vec<N>& base,
                         std::initializer_list<std::pair<const Vec<N>*, double>> terms) {
            for (int i = 0; i < N; ++i) {
                double acc = base[i];
                for (const auto& [k, a] : terms) acc += h_use * a * (*k)[i];
                ytmp[i] = acc;
            }
        };

        stage(y, {{&k1, a21}});
        k2 = field(ytmp);
        stage(y, {{&k1, a31}, {&k2, a32}});
        k3 = field(ytmp);
        stage(y, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
        k4 = field(ytmp);
        stage(y, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
        k5 = field(ytmp);
        stage(y, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
        k6 = field(ytmp);
        for (int i = 0; i < N; ++i) {
            ynew[i] = y[i] + h_use * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                      b6 * k6[i]);
        }
        k7 = field(ynew);

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            const double e = h_use * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / N);

        const double fac11 = std::pow(std::max(err, 1e-16), expo1);
        if (err <= 1.0) {
            t = clipped ? target : t + h_use;
            bool guard = false;
            bool projected = false;
            for (int i = 0; i < N; ++i) {
                if (ynew[i] < 0.0) {
                    if (ynew[i] > -opts.abs_tol) {
                        ynew[i] = 0.0;
                        projected = true;
                    } else {
                        guard = true;
                    }
                }
            }
            y = ynew;
            // First-same-as-last; the projection invalidates the cached
            // derivative, so refresh it on the (rare) clipped steps.
            k1 = projected ? field(y) : k7;
            if (guard) {
                out.termination = Termination::blowup_guard;
                out.times.push_back(t);
                out.states.push_back(y);
                return out;
            }
            const bool at_sample = !record_steps &&
                                   next_sample < opts.sample_times.size() &&
                                   t == opts.sample_times[next_sample];
            if (record_steps || at_sample) {
                out.times.push_back(t);
                out.states.push_back(y);
                if (at_sample) ++next_sample;
            }
            if (opts.stop_speed > 0.0 && norm2<N>(k1) < opts.stop_speed) {
                out.termination = Termination::converged;
                if (out.times.back() != t) {
                    out.times.push_back(t);
                    out.states.push_back(y);
                }
                return out;
            }
            const double fac = std::clamp(fac11 / std::pow(facold, beta) / safety, 0.2, 10.0);
            facold = std::max(err, 1e-4);
            // A clipped step was shorter than the controller asked for; keep
            // the free step rather than restarting from the clipped length.
            h = clipped ? std::max(h, h_use / fac) : h_use / fac;
        } else {
            h = h_use / std::min(10.0, fac11 / safety);
        }
        if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    }
    if (out.times.back() != t) {
        out.times.push_back(t);
        out.states.push_back(y);
    }
    out.termination = (t >= t_end) ? Termination::t_end : Termination::blowup_guard;
    return out;
}

}  // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::t_end: return "t_end";
        case Termination::converged: return "converged";
        case Termination::blowup_guard: return "blowup_guard";
    }
    return "?";
}

std::array<double, 4> full_field(const GrowthModel& model, const ChemostatConfig& config,
                                 const FullState& state) {
    const double s1 = std::max(state.s1, 0.0);
    const double s2 = std::max(state.s2, 0.0);
    const double f1 = model.value(1, s1, s2);
    const double f2 = model.value(2, s1, s2);
    const double D = config.D;
    return {D * (config.s1_in - state.s1) - f1 * state.x1,
            (f1 - D) * state.x1,
            D * (config.s2_in - state.s2) - f2 * state.x2 + f1 * state.x1,
            (f2 - D) * state.x2};
}

std::array<double, 2> reduced_field(const GrowthModel& model, const ChemostatConfig& config,
                                    double D, PlanarState state) {
    const double s1 = std::max(config.s1_in - state.x1, 0.0);
    const double s2 = std::max(config.s2_in + state.x1 - state.x2, 0.0);
    const double phi1 = model.value(1, s1, s2);
    const double phi2 = model.value(2, s1, s2);
    return {(phi1 - D) * state.x1, (phi2 - D) * state.x2};
}

FullTrajectory integrate_full(const GrowthModel& model, const ChemostatConfig& config,
                              const FullState& initial, double t_end,
                              const IntegrateOptions& opts) {
    config.validate();
    if (initial.s1 < 0.0 || initial.x1 < 0.0 || initial.s2 < 0.0 || initial.x2 < 0.0) {
        throw std::invalid_argument("initial state must be componentwise nonnegative");
    }
    auto field = [&](const std::array<double, 4>& y) {
        return full_field(model, config, FullState{y[0], y[1], y[2], y[3]});
    };
    auto raw = dopri5<4>(field, {initial.s1, initial.x1, initial.s2, initial.x2}, t_end, opts);
    FullTrajectory traj;
    traj.times = std::move(raw.times);
    traj.termination = raw.termination;
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states) traj.states.push_back({y[0], y[1], y[2], y[3]});
    return traj;
}

PlanarTrajectory integrate_reduced(const GrowthModel& model, const ChemostatConfig& config,
                                   const PlanarState& initial, double t_end,
                                   const IntegrateOptions& opts) {
    config.validate();
    if (!in_region_closure(config, initial)) {
        throw std::invalid_argument("initial state must lie in the closure of the region");
    }
    auto field = [&](const std::array<double, 2>& y) {
        return reduced_field(model, config, config.D, PlanarState{y[0], y[1]});
    };
    auto raw = dopri5<2>(field, {initial.x1, initial.x2}, t_end, opts);
    PlanarTrajectory traj;
    traj.times = std::move(raw.times);
    traj.termination = raw.termination;
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states) traj.states.push_back({y[0], y[1]});
    return traj;
}

PlanarTrajectory integrate_reduced_reversed(const GrowthModel& model,
                                            const ChemostatConfig& config,
                                            const PlanarState& initial, double t_end,
                                            const IntegrateOptions& opts) {
    config.validate();
    auto field = [&](const std::array<double, 2>& y) {
        const auto f = reduced_field(model, config, config.D, PlanarState{y[0], y[1]});
        return std::array<double, 2>{-f[0], -f[1]};
    };
    auto raw = dopri5<2>(field, {initial.x1, initial.x2}, t_end, opts);
    PlanarTrajectory traj;
    traj.times = std::move(raw.times);
    traj.termination = raw.termination;
    traj.states.reserve(raw.states.size());
    for (const auto& y : raw.states) traj.states.push_back({y[0], y[1]});
    return traj;
}

std::optional<EquilibriumKind> detect_attractor(const GrowthModel& model,
                                                const ChemostatConfig& config, double D,
                                                PlanarState state,
                                                std::span<const EquilibriumRecord> equilibria,
                                                double radius_scale) {
    const auto f = reduced_field(model, config, D, state);
    const double speed = std::hypot(f[0], f[1]);
    for (const auto& eq : equilibria) {
        const double radius =
            radius_scale * (1.0 + std::hypot(eq.location.x1, eq.location.x2));
        const double dist =
            std::hypot(state.x1 - eq.location.x1, state.x2 - eq.location.x2);
        if (dist < radius && speed < radius * D) return eq.kind;
    }
    return std::nullopt;
}

std::optional<EquilibriumKind> detect_attractor(const GrowthModel& model,
                                                const ChemostatConfig& config, double D,
                                                const PlanarTrajectory& trajectory,
                                                std::span<const EquilibriumRecord> equilibria,
                                                double radius_scale) {
    if (trajectory.states.empty()) return std::nullopt;
    return detect_attractor(model, config, D, trajectory.final_state(), equilibria,
                            radius_scale);
}

PlanarState project(const FullState& state) { return {state.x1, state.x2}; }

FullState lift_to_full(const ChemostatConfig& config, PlanarState state) {
    if (!in_region_closure(config, state)) {
        throw std::domain_error("state outside the closure of the region");
    }
    return {config.s1_in - state.x1, state.x1, config.s2_in + state.x1 - state.x2,
            state.x2};
}

ConservationError conservation_error(const ChemostatConfig& config,
                                     const FullTrajectory& trajectory) {
    ConservationError err;
    if (trajectory.states.empty()) return err;
    const FullState& y0 = trajectory.states.front();
    const double z1_0 = y0.s1 + y0.x1;
    const double z2_0 = y0.s2 + y0.x2 - y0.x1;
    for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
        const FullState& y = trajectory.states[i];
        const double decay = std::exp(-config.D * trajectory.times[i]);
        const double z1_ref = config.s1_in + (z1_0 - config.s1_in) * decay;
        const double z2_ref = config.s2_in + (z2_0 - config.s2_in) * decay;
        err.z1 = std::max(err.z1, std::abs(y.s1 + y.x1 - z1_ref));
        err.z2 = std::max(err.z2, std::abs(y.s2 + y.x2 - y.x1 - z2_ref));
    }
    return err;
}

std::string to_csv(const FullTrajectory& trajectory) {
    std::ostringstream out;
    out << "t,s1,x1,s2,x2\n";
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        const FullState& y = trajectory.states[i];
        out << format_g17(trajectory.times[i]) << ',' << format_g17(y.s1) << ','
            << format_g17(y.x1) << ',' << format_g17(y.s2) << ',' << format_g17(y.x2)
            << '\n';
    }
    return out.str();
}

std::string to_csv(const PlanarTrajectory& trajectory) {
    std::ostringstream out;
    out << "t,x1,x2\n";
    for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
        const PlanarState& y = trajectory.states[i];
        out << format_g17(trajectory.times[i]) << ',' << format_g17(y.x1) << ','
            << format_g17(y.x2) << '\n';
    }
    return out.str();
}

}  // namespace syntro
