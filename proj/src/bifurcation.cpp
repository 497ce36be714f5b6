#include "syntro/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "syntro/parallel.hpp"

namespace syntro {

namespace {

constexpr double kRefineWidth = 1e-8;
constexpr double kMergeWidth = 1e-7;

/// Discrete regime signature: which equilibria exist and how each is
/// classified, with coexistence stabilities listed left to right.
struct Signature {
    Stability washout = Stability::nonhyperbolic;
    bool has_f1 = false;
    bool has_f2 = false;
    Stability f1 = Stability::nonhyperbolic;
    Stability f2 = Stability::nonhyperbolic;
    std::vector<Stability> positives;

    bool operator==(const Signature&) const = default;
};

Signature signature_of(const RegimeReport& report) {
    Signature sig;
    for (const auto& r : report.equilibria) {
        switch (r.kind) {
            case EquilibriumKind::F0: sig.washout = r.stability; break;
            case EquilibriumKind::F1_boundary:
                sig.has_f1 = true;
                sig.f1 = r.stability;
                break;
            case EquilibriumKind::F2_boundary:
                sig.has_f2 = true;
                sig.f2 = r.stability;
                break;
            case EquilibriumKind::F_star: sig.positives.push_back(r.stability); break;
        }
    }
    return sig;
}

Signature signature_at(const GrowthModel& model, const ChemostatConfig& config, double D) {
    return signature_of(classify_regime_unchecked(model, config, D));
}

EventKind classify_event(const Signature& left, const Signature& right) {
    if (left.has_f1 != right.has_f1) return EventKind::F1_vanishes;
    if (left.has_f2 != right.has_f2) return EventKind::F2_vanishes;
    if (left.has_f1 && right.has_f1 && left.f1 != right.f1) {
        return EventKind::F1_exchanges_stability;
    }
    if (left.has_f2 && right.has_f2 && left.f2 != right.f2) {
        return EventKind::F2_exchanges_stability;
    }
    if (left.positives.size() != right.positives.size()) return EventKind::saddle_node;
    if (left.washout != right.washout) return EventKind::F0_exchanges;
    // Some rearrangement of coexistence stabilities at constant count.
    return EventKind::saddle_node;
}

double pair_distance(const EquilibriumRecord& a, const EquilibriumRecord& b) {
    return std::hypot(a.location.x1 - b.location.x1, a.location.x2 - b.location.x2);
}

std::optional<std::pair<EquilibriumRecord, EquilibriumRecord>> closest_pair(
    const std::vector<EquilibriumRecord>& records) {
    if (records.size() < 2) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> idx{0, 1};
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (std::size_t j = i + 1; j < records.size(); ++j) {
            const double d = pair_distance(records[i], records[j]);
            if (d < best) {
                best = d;
                idx = {i, j};
            }
        }
    }
    return std::make_pair(records[idx.first], records[idx.second]);
}

}  // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::F1_vanishes: return "F1_vanishes";
        case EventKind::F2_vanishes: return "F2_vanishes";
        case EventKind::F1_exchanges_stability: return "F1_exchanges_stability";
        case EventKind::F2_exchanges_stability: return "F2_exchanges_stability";
        case EventKind::saddle_node: return "saddle_node";
        case EventKind::F0_exchanges: return "F0_exchanges";
    }
    return "?";
}

BranchDiagram sweep(const GrowthModel& model, const ChemostatConfig& config, double D_min,
                    double D_max, int n_samples, int threads) {
    if (!(0.0 < D_min && D_min < D_max)) {
        throw std::invalid_argument("need 0 < D_min < D_max");
    }
    if (n_samples < 2) throw std::invalid_argument("need at least two samples");

    BranchDiagram diagram;
    diagram.samples.resize(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
        const double D =
            D_min + (D_max - D_min) * static_cast<double>(i) / (n_samples - 1);
        diagram.samples[i] = BranchSample{D, classify_regime_unchecked(model, config, D)};
    });

    // Refine every signature change between adjacent samples. An interval
    // may hide several events (two bifurcations closer than the sample
    // spacing), so after locating the first change the remainder of the
    // interval is searched again until the flanking signatures connect.
    struct RawEvent {
        double D;
        Signature left;
        Signature right;
    };
    std::vector<RawEvent> raw;
    std::vector<Signature> signatures(diagram.samples.size());
    for (std::size_t i = 0; i < diagram.samples.size(); ++i) {
        signatures[i] = signature_of(diagram.samples[i].report);
    }
    for (std::size_t i = 0; i + 1 < diagram.samples.size(); ++i) {
        double lo = diagram.samples[i].D;
        Signature sig_lo = signatures[i];
        const double interval_hi = diagram.samples[i + 1].D;
        const Signature& sig_end = signatures[i + 1];
        for (int pass = 0; pass < 8 && !(sig_lo == sig_end); ++pass) {
            double a = lo;
            double b = interval_hi;
            while (b - a > kRefineWidth) {
                const double mid = 0.5 * (a + b);
                if (signature_at(model, config, mid) == sig_lo)
                    a = mid;
                else
                    b = mid;
            }
            const Signature sig_b = signature_at(model, config, b);
            raw.push_back(RawEvent{0.5 * (a + b), sig_lo, sig_b});
            lo = b;
            sig_lo = sig_b;
        }
    }

    // Merge refined values that coincide (a sample sitting exactly on a
    // bifurcation splits one event across two intervals).
    for (std::size_t i = 0; i < raw.size();) {
        std::size_t j = i;
        while (j + 1 < raw.size() && raw[j + 1].D - raw[j].D <= kMergeWidth) ++j;
        BifurcationEvent event;
        event.D = raw[i].D;
        event.kind = classify_event(raw[i].left, raw[j].right);
        if (auto pair = coalescence_pair(model, config, event.D)) {
            event.witnesses = {pair->first, pair->second};
            if (event.kind == EventKind::saddle_node) {
                event.point = PlanarState{
                    0.5 * (pair->first.location.x1 + pair->second.location.x1),
                    0.5 * (pair->first.location.x2 + pair->second.location.x2)};
            }
        }
        diagram.events.push_back(std::move(event));
        i = j + 1;
    }
    return diagram;
}

std::optional<Tangency> find_tangency(const GrowthModel& model,
                                      const ChemostatConfig& config, double D_lo,
                                      double D_hi) {
    if (!(0.0 < D_lo && D_lo < D_hi)) {
        throw std::invalid_argument("need 0 < D_lo < D_hi");
    }
    auto count = [&](double D) {
        return find_positive_equilibria(model, config, D).records.size();
    };
    const std::size_t count_lo = count(D_lo);
    if (count_lo == count(D_hi)) return std::nullopt;

    double lo = D_lo, hi = D_hi;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (count(mid) == count_lo)
            lo = mid;
        else
            hi = mid;
    }

    // At a tangency a pair coalesces in the interior, so the count jumps by
    // two; a jump of one is an equilibrium crossing the region boundary, not
    // a tangency.
    const auto side_lo = find_positive_equilibria(model, config, lo).records;
    const auto side_hi = find_positive_equilibria(model, config, hi).records;
    const std::size_t n_lo = side_lo.size();
    const std::size_t n_hi = side_hi.size();
    if (n_lo + n_hi < 2 || (n_lo > n_hi ? n_lo - n_hi : n_hi - n_lo) < 2) {
        return std::nullopt;
    }

    Tangency result;
    result.D = 0.5 * (lo + hi);
    const auto& crowded = n_lo >= n_hi ? side_lo : side_hi;
    if (auto pair = closest_pair(crowded)) {
        result.point = {0.5 * (pair->first.location.x1 + pair->second.location.x1),
                        0.5 * (pair->first.location.x2 + pair->second.location.x2)};
    } else {
        return std::nullopt;
    }
    return result;
}

std::optional<std::pair<EquilibriumRecord, EquilibriumRecord>> coalescence_pair(
    const GrowthModel& model, const ChemostatConfig& config, double D_event,
    double offset) {
    std::optional<std::pair<EquilibriumRecord, EquilibriumRecord>> best;
    double best_dist = std::numeric_limits<double>::infinity();
    int best_side = 0;
    for (int side : {-1, +1}) {
        const double D = D_event + side * offset;
        if (!(D > 0.0)) continue;
        const auto report = classify_regime_unchecked(model, config, D);
        if (auto pair = closest_pair(report.equilibria)) {
            const double d = pair_distance(pair->first, pair->second);
            if (d < best_dist) {
                best_dist = d;
                best = pair;
                best_side = side;
            }
        }
    }
    if (!best) return std::nullopt;
    if (best_dist < 1e-4) return best;
    // Fold pairs close at a square-root rate; confirm the separation shrinks
    // with the probing offset before accepting a wider pair.
    const double D_near = D_event + best_side * offset * 1e-2;
    if (D_near > 0.0) {
        const auto report = classify_regime_unchecked(model, config, D_near);
        if (auto pair = closest_pair(report.equilibria)) {
            const double d = pair_distance(pair->first, pair->second);
            if (d < best_dist / 3.0 && pair->first.kind == best->first.kind &&
                pair->second.kind == best->second.kind) {
                return best;
            }
        }
    }
    return std::nullopt;
}

std::vector<CoalescenceWitness> coalescence_witnesses(const GrowthModel& model,
                                                      const ChemostatConfig& config,
                                                      const BranchDiagram& diagram) {
    std::vector<CoalescenceWitness> out;
    for (const auto& event : diagram.events) {
        if (event.witnesses.size() == 2) {
            out.push_back({&event, {event.witnesses[0], event.witnesses[1]}});
        } else if (auto pair = coalescence_pair(model, config, event.D)) {
            out.push_back({&event, *pair});
        }
    }
    return out;
}

}  // namespace syntro
