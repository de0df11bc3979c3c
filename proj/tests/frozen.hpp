#pragma once

// Reference values produced by tests/oracle_dump (10^6-step RK4 on the
// undeficited (z1, z2) system plus composite quadrature), frozen here so the
// test run does not repeat the brute-force integration. Base point: I = 10,
// sigma_D = 1, sigma_Yp = 10, kappa = 5, Sigma = 1, Y0 = Yp0 = 0.

#include <array>

namespace radner::frozen {

struct CoreCell {
  double a;
  double en_z1_1, en_z2_1, en_z1_half, en_g1_0, en_f1_0;
  double ex_z1_1, ex_z2_1, ex_g1_0;
};

inline constexpr std::array<CoreCell, 3> kCore = {{
    {1.0, 0.047023081511540485, 0.0015277907751559698, 0.01233472474962637,
     0.044389618388834734, -0.81592510568188836, 0.047418736356144534, 0.0015561046325534439,
     0.045250586092128918},
    {10.0, 0.18647074390526563, 0.0028570012199973407, 0.09286221777079165,
     0.17114423872177864, -6.0678079257493449, 0.16175893502907371, 0.0027425470968313053,
     0.18570585396221118},
    {20.0, 0.3155998361267196, 0.003109706356112235, 0.13996805598865411, 0.20729095961364644,
     -9.8559346664199641, 0.20755889044173995, 0.002229338627070445, 0.2290742141613516},
}};

struct WelfareCell {
  double a, kappa;
  double first_term, gap, difference, threshold;
};

inline constexpr std::array<WelfareCell, 6> kWelfare = {{
    {1.0, 5.0, 4.9014802470346043e-06, -7.624479503287845e-06, -0.0076195780230408107,
     39.440414656298763},
    {10.0, 5.0, 0.0041322314049586778, -5.8839292900192798e-05, -0.054707061495234119,
     3.7734743780562039},
    {20.0, 5.0, 0.027777777777777776, 8.7723010078504058e-05, 0.11550078785628183, 0.0},
    {1.0, 1.0, 1.0 / (20.0 * 21.0 * 21.0), -3.6089064845342474e-05, -0.035975686160535217, 17.841119694008015},
    {1.0, 25.0, 1.0 / (20.0 * 501.0 * 501.0), -1.5421259777904754e-06, -0.0015419267753968595, 87.985812782673904},
    {1.0, 125.0, 1.0 / (20.0 * 2501.0 * 2501.0), -3.0912253858370433e-07, -0.00030911454497986639, 196.65003371286815},
}};

}  // namespace radner::frozen
