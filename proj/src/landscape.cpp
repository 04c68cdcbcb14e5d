#include "landscape.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

namespace profilium {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double entropy(double c)
{
    if (c <= 0 || c >= 1)
        return 0;
    return -c * std::log(c) - (1 - c) * std::log1p(-c);
}

// Replaces (alpha/k) log(x^{kr} + y^{kr}); tends to alpha r max(log x, log y) as k grows.
double class_term(double r, double c, double d, double p, double alpha, int finite_k)
{
    const double lp = std::log(p), lq = std::log1p(-p);
    const double a = c * lp + (1 - c) * lq, b = d * lp + (1 - d) * lq;
    const double hi = std::max(a, b);
    if (finite_k <= 0)
        return alpha * r * hi;
    return alpha * r * hi + (alpha / finite_k) * std::log1p(std::exp(finite_k * r * (std::min(a, b) - hi)));
}

double landscape_A(double r, double c, double d, double p, double alpha, int finite_k)
{
    const double beta = 1 + class_term(r, c, d, p, alpha, finite_k);
    return beta > 0 ? alpha * (1 - r) / beta : kNaN;
}

}  // namespace

double landscape_rho_hat(double r, double c, double d, double p, double alpha, int finite_k)
{
    const auto th = thresholds(p);
    const double A = landscape_A(r, c, d, p, alpha, finite_k);
    if (!(A > th.alpha1))
        return kNaN;
    if (A >= th.alpha2)
        return -2.0;
    return saddle_closed_form(p, A);
}

double landscape_G(double r, double c, double d, double p, double alpha, int finite_k)
{
    const double s = landscape_rho_hat(r, c, d, p, alpha, finite_k);
    if (std::isnan(s))
        return kNaN;
    const double L = eval_L(cplx(s, 0), p).value.real();
    const double H = -s + alpha * (1 - r) * L - s * class_term(r, c, d, p, alpha, finite_k);
    return alpha * r * (entropy(c) + entropy(d)) + H;
}

namespace {

// max_c G(r,c,c): fine scan, then Brent inside the best cell
bool diagonal_max(double r, double p, double alpha, int fk, double& c_m, double& F)
{
    const int N = 2001;
    double best = -std::numeric_limits<double>::infinity();
    int bi = -1;
    for (int i = 0; i < N; ++i) {
        const double c = static_cast<double>(i) / (N - 1);
        const double g = landscape_G(r, c, c, p, alpha, fk);
        if (!std::isnan(g) && g > best) {
            best = g;
            bi = i;
        }
    }
    if (bi < 0)
        return false;
    const double h = 1.0 / (N - 1);
    const double lo = std::max(0.0, (bi - 1) * h), hi = std::min(1.0, (bi + 1) * h);
    auto neg = [&](double c) {
        const double g = landscape_G(r, c, c, p, alpha, fk);
        return std::isnan(g) ? std::numeric_limits<double>::infinity() : -g;
    };
    const auto res = boost::math::tools::brent_find_minima(neg, lo, hi, 50);
    if (-res.second >= best) {
        c_m = res.first;
        F = -res.second;
    } else {
        c_m = bi * h;
        F = best;
    }
    return true;
}

}  // namespace

LandscapeReport landscape(double p, double alpha, const LandscapeOptions& opt)
{
    const auto reg = regime_thresholds(p, alpha);
    if (reg.cls == RegimeClass::small)
        fail(Errc::regime, "landscape needs the saddle or polar regime");
    if (opt.cd_points < 2 || opt.r_points < 3)
        fail(Errc::invalid_argument, "landscape grids too coarse");
    LandscapeReport rep;
    rep.regime = reg.cls;
    rep.alpha = alpha;
    const int fk = opt.finite_k;
    const int N = opt.cd_points;
    const double cell = 1.0 / (N - 1);
    for (double r : opt.r_values) {
        LandscapeSlice sl;
        sl.r = r;
        if (opt.keep_grids)
            sl.grid.assign(static_cast<std::size_t>(N) * N, kNaN);
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                const double g = landscape_G(r, a * cell, b * cell, p, alpha, fk);
                if (opt.keep_grids)
                    sl.grid[static_cast<std::size_t>(a) * N + b] = g;
                if (!std::isnan(g) && g > best) {
                    best = g;
                    sl.c_star = a * cell;
                    sl.d_star = b * cell;
                    sl.omega_nonempty = true;
                }
            }
        if (sl.omega_nonempty) {
            sl.g_max = best;
            sl.cells_off_diagonal = static_cast<int>(std::lround(std::fabs(sl.c_star - sl.d_star) / cell));
            diagonal_max(r, p, alpha, fk, sl.c_m, sl.F);
        }
        rep.slices.push_back(std::move(sl));
    }
    const double dr = opt.r_max / (opt.r_points - 1);
    for (int i = 0; i < opt.r_points; ++i) {
        const double r = i * dr;
        double cm = 0, F = 0;
        if (!diagonal_max(r, p, alpha, fk, cm, F))
            break;
        rep.r_grid.push_back(r);
        rep.F.push_back(F);
    }
    rep.max_second_diff = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < rep.F.size(); ++i)
        rep.max_second_diff = std::max(rep.max_second_diff, rep.F[i + 1] - 2 * rep.F[i] + rep.F[i - 1]);
    rep.concave = rep.max_second_diff <= 1e-8;
    if (rep.F.size() >= 3) {
        rep.F0 = rep.F[0];
        rep.F_prime0 = (-3 * rep.F[0] + 4 * rep.F[1] - rep.F[2]) / (2 * dr);
    }
    if (reg.cls == RegimeClass::saddle) {
        const auto ss = solve_saddle(p, alpha);
        rep.h_rho = eval_h(cplx(ss.s, 0), p, alpha).value.real();
    } else {
        rep.h_rho = eval_h(cplx(-2.0, 0), p, alpha).value.real();
    }
    rep.tail_bound = rep.F0 - (opt.r0 / 2) * rep.F_prime0;
    rep.tail_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
        const double r = rep.r_grid[i];
        if (r <= opt.r0)
            continue;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                const double g = landscape_G(r, a * cell, b * cell, p, alpha, fk);
                if (!std::isnan(g))
                    rep.tail_max = std::max(rep.tail_max, g);
            }
    }
    rep.tail_ok = rep.tail_max <= rep.tail_bound;
    return rep;
}

}  // namespace profilium
