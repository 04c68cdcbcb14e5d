#pragma once

#include <vector>

#include "asymptotics.hpp"

namespace profilium {

struct LandscapeOptions {
    std::vector<double> r_values{0.1, 0.2, 0.4};
    int cd_points = 101;
    int r_points = 61;
    double r_max = 0.6;
    double r0 = 0.1;
    int finite_k = 0;  // 0: k -> infinity form of the class term
    bool keep_grids = false;
};

struct LandscapeSlice {
    double r = 0;
    bool omega_nonempty = false;
    double c_star = 0, d_star = 0, g_max = 0;
    double c_m = 0, F = 0;
    int cells_off_diagonal = 0;
    std::vector<double> grid;  // row-major (c, d), NaN outside Omega_r
};

struct LandscapeReport {
    RegimeClass regime = RegimeClass::saddle;
    double alpha = 0;
    std::vector<LandscapeSlice> slices;
    std::vector<double> r_grid, F;
    double max_second_diff = 0;
    bool concave = false;
    double F0 = 0, F_prime0 = 0, h_rho = 0;
    double tail_bound = 0, tail_max = 0;
    bool tail_ok = false;  // G stays below F(0) - (r0/2) F'(0) for r > r0
};

// Evaluators shared by the report; NaN outside Omega_r.
double landscape_G(double r, double c, double d, double p, double alpha, int finite_k);
double landscape_rho_hat(double r, double c, double d, double p, double alpha, int finite_k);

LandscapeReport landscape(double p, double alpha, const LandscapeOptions& opt = {});

}  // namespace profilium
