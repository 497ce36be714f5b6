#pragma once

// Shared scenarios and frozen expected values. Set A and set B are the two
// reference parameterizations exercised throughout; the mirror set swaps the
// roles of the two species so the D4 branch of the theory gets coverage.

#include <cmath>

#include "syntro/growth.hpp"

namespace fixtures {

inline syntro::GrowthModel model_a() {
    return syntro::GrowthModel::monod_product({8.0, 1.0, 2.0, 4.0, 2.0, 1.0});
}

inline syntro::GrowthModel model_b() {
    return syntro::GrowthModel::monod_product({8.0, 1.0, 1.5, 7.0, 1.0, 1.0});
}

inline syntro::GrowthModel model_mirror() {
    return syntro::GrowthModel::monod_product({4.0, 2.0, 1.0, 8.0, 1.0, 2.0});
}

inline syntro::ChemostatConfig config33(double D) {
    syntro::ChemostatConfig config;
    config.D = D;
    config.s1_in = 3.0;
    config.s2_in = 3.0;
    return config;
}

// Set A thresholds: D1 = 6/5, D2 = 3/5, D3 = 8/9 at xi1 = 1.
inline constexpr double kA_D1 = 1.2;
inline constexpr double kA_D2 = 0.6;
inline constexpr double kA_D3 = 8.0 / 9.0;
inline constexpr double kA_xi1 = 1.0;

// Root of 3 x^2 - 37 x + 60 = 0 in (0, 3): the single-species equilibrium
// abscissa of set A at D = 3/5.
inline const double kA_xbar_at_0p6 = (37.0 - std::sqrt(649.0)) / 6.0;

// Coexistence equilibrium of set A at D = 1/2. Equal denominators reduce
// the level-set equality to x2 = 3 x1 - 3, and substitution leaves
// x1^2 = 8.
inline const double kA_fstar_x1_at_0p5 = 2.0 * std::sqrt(2.0);
inline const double kA_fstar_x2_at_0p5 = 6.0 * std::sqrt(2.0) - 3.0;

// The coexistence pair of set A at D = 0.95, from the closed form
// x1 = 3 - ((2 - D) -+ 2 sqrt(1 - D)) / D, x2 = 3 x1 - 3.
inline constexpr double kA_pair_at_0p95[2][2] = {
    {1.423985688947412695493, 1.271957066842238086478},
    {2.365487995263113620297, 4.096463985789340860890}};

// The two graphs of set A become tangent at D = 1, at the point (2, 3).
inline constexpr double kA_fold_D = 1.0;

// Set B thresholds: D1 = 4/3, D2 = 21/16, and the axis crossing between
// them (bisected to high precision with 40-digit arithmetic).
inline constexpr double kB_D1 = 4.0 / 3.0;
inline constexpr double kB_D2 = 21.0 / 16.0;
inline constexpr double kB_D3 = 1.323331462456407392702;
inline constexpr double kB_xi1 = 0.024642825900407162460;

// Coexistence pair of set B at D = 1.5 and the fold where it collapses.
inline constexpr double kB_pair_at_1p5[2][2] = {
    {0.809275832660114152116, 1.647454373629518095379},
    {2.386126466190460560528, 4.857471734744866141074}};
inline constexpr double kB_fold_D = 1.673308554973981360382;

// Mirror set thresholds: D1 = 3/5, D2 = 6/5, D4 = 24/25 at xi2 = 3/2, and a
// fold at exactly D = 1 with coalescence point (1, 3).
inline constexpr double kM_D1 = 0.6;
inline constexpr double kM_D2 = 1.2;
inline constexpr double kM_D4 = 0.96;
inline constexpr double kM_xi2 = 1.5;
inline constexpr double kM_fold_D = 1.0;

}  // namespace fixtures
