#pragma once

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "syntro/growth.hpp"
#include "syntro/numerics.hpp"
#include "syntro/planar.hpp"

namespace syntro {

/// Critical dilution rates of the planar system. D1 and D2 are the washout
/// rates of the two species; D3 exists when D1 > D2 (with crossing abscissa
/// xi1 on the x1 axis), D4 when D2 > D1 (crossing ordinate xi2 on the x2
/// axis). Both are absent when D1 and D2 agree to 1e-12.
struct Thresholds {
    double D1 = 0.0;
    double D2 = 0.0;
    std::optional<double> D3;
    std::optional<double> D4;
    std::optional<double> xi1;
    std::optional<double> xi2;
};

enum class EquilibriumKind { F0, F1_boundary, F2_boundary, F_star };
enum class Stability { stable_node, unstable_node, saddle, nonhyperbolic };

const char* to_string(EquilibriumKind kind);
const char* to_string(Stability stability);

/// An equilibrium of the reduced system with its local linearization.
/// For a coexistence equilibrium the slopes of the two nullcline graphs at
/// its abscissa are recorded as well; their order decides stable node vs
/// saddle independently of the determinant sign.
struct EquilibriumRecord {
    EquilibriumKind kind = EquilibriumKind::F0;
    PlanarState location;
    Mat2 jacobian;
    std::array<std::complex<double>, 2> eigenvalues{};
    Stability stability = Stability::nonhyperbolic;
    double residual = 0.0;
    std::optional<double> slope1;  ///< F1'(x1*), coexistence only
    std::optional<double> slope2;  ///< F2'(x1*), coexistence only
};

/// Position of the dilution rate against the thresholds:
///   case1   D < min(D1, D2)
///   case2a  D1 < D2 and D1 < D < D4
///   case2b  D1 < D2 and D4 < D < D2
///   case2c  D2 < D1 and D2 < D < D3
///   case2d  D2 < D1 and D3 < D < D1
///   case3   D > max(D1, D2)
enum class RegimeCase { case1, case2a, case2b, case2c, case2d, case3 };

const char* to_string(RegimeCase c);

/// Full qualitative picture at one dilution rate: thresholds, regime case,
/// every equilibrium with its classification, and the attractor kinds the
/// convergence theory predicts (all stable nodes, in a bistable regime).
struct RegimeReport {
    double D = 0.0;
    Thresholds thresholds;
    RegimeCase case_label = RegimeCase::case1;
    std::vector<EquilibriumRecord> equilibria;
    std::vector<EquilibriumKind> predicted_attractors;
    bool near_degenerate = false;
};

/// Coexistence equilibria found by a nullcline-intersection scan.
/// near_degenerate reports a close approach of the two graphs (below 1e-8)
/// that produced no sign change — a possible tangency.
struct PositiveEquilibria {
    std::vector<EquilibriumRecord> records;  ///< sorted by x1
    bool near_degenerate = false;
};

/// Thrown when a requested dilution rate collides with a threshold, where
/// the regime is not hyperbolic and no classification is made.
class at_bifurcation_error : public std::runtime_error {
public:
    at_bifurcation_error(std::string threshold, double value);
    const std::string& threshold() const { return threshold_; }
    double value() const { return value_; }

private:
    std::string threshold_;
    double value_;
};

/// Direct evaluations for D1, D2; bisection on the axis crossings for
/// D3/xi1 (when D1 > D2) and D4/xi2 (when D2 > D1). Rejects models that
/// fail the qualitative hypotheses on a coarse sample.
Thresholds compute_thresholds(const GrowthModel& model, const ChemostatConfig& config);

/// Boundary equilibrium with species 2 absent; exists exactly when D < D1.
std::optional<EquilibriumRecord> find_boundary_F1(const GrowthModel& model,
                                                  const ChemostatConfig& config, double D);

/// Boundary equilibrium with species 1 absent; exists exactly when D < D2.
std::optional<EquilibriumRecord> find_boundary_F2(const GrowthModel& model,
                                                  const ChemostatConfig& config, double D);

/// All intersections of the two nullcline graphs inside the region, located
/// by scanning their difference on a uniform grid over the common domain and
/// bisecting every sign change.
PositiveEquilibria find_positive_equilibria(const GrowthModel& model,
                                            const ChemostatConfig& config, double D,
                                            int scan_samples = 2000);

/// Analytic Jacobian of the reduced vector field at any state.
Mat2 reduced_jacobian(const GrowthModel& model, const ChemostatConfig& config, double D,
                      PlanarState state);

/// Fills jacobian, eigenvalues, stability (and nullcline slopes for a
/// coexistence point) on a record whose kind and location are set. Rejects
/// records whose defining equations have residual above 1e-9.
EquilibriumRecord classify_equilibrium(const GrowthModel& model,
                                       const ChemostatConfig& config, double D,
                                       EquilibriumRecord record);

/// Regime classification at dilution rate D. Throws at_bifurcation_error
/// when D is within 1e-9 of a threshold.
RegimeReport classify_regime(const GrowthModel& model, const ChemostatConfig& config,
                             double D);

/// As classify_regime but without the threshold-collision gate; samples that
/// land on a bifurcation may carry nonhyperbolic classifications. Used by
/// parameter sweeps.
RegimeReport classify_regime_unchecked(const GrowthModel& model,
                                       const ChemostatConfig& config, double D);

}  // namespace syntro
