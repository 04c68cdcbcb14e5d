#include <cmath>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>
#include <limits>

#include "asymptotics.hpp"

namespace profilium {

cplx complex_gamma(cplx z)
{
    gsl_sf_result lnr, arg;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    const int status = gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
    gsl_set_error_handler(old);
    if (status != GSL_SUCCESS)
        return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    return std::exp(cplx(lnr.val, arg.val));
}

cplx eval_f1(cplx s)
{
    const cplx t = std::exp(-s * std::log(2.0));
    return 1.0 - t - s * t / 4.0;
}

cplx v1_kernel(cplx s) { return eval_f1(s) * complex_gamma(s + 2.0) / s; }

cplx v1_kernel_printed(cplx s) { return eval_f1(s) * complex_gamma(s + 1.0); }

cplx eval_Lm(int m, cplx a, cplx b, cplx x)
{
    const double md = m;
    return a * ((md - 1) * (md - 1)) + md * (2 - md) + b * md * x;
}

ClassTQ class_tq(int ell, int i, int j, double p)
{
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lx = i * lp + (ell - i) * lq;
    const double ly = j * lp + (ell - j) * lq;
    ClassTQ c;
    const double hi = std::max(lx, ly), lo = std::min(lx, ly);
    c.logQ = hi + std::log1p(std::exp(lo - hi));
    c.logT = lx + ly;
    c.Q = std::exp(c.logQ);
    c.T = std::exp(c.logT);
    return c;
}

ClassTQ class_tq(double r, double c, double d, double p, int k)
{
    const double lp = std::log(p), lq = std::log1p(-p);
    const double kr = k * r;
    const double lx = kr * (c * lp + (1 - c) * lq);
    const double ly = kr * (d * lp + (1 - d) * lq);
    ClassTQ out;
    const double hi = std::max(lx, ly), lo = std::min(lx, ly);
    out.logQ = hi + std::log1p(std::exp(lo - hi));
    out.logT = lx + ly;
    out.Q = std::exp(out.logQ);
    out.T = std::exp(out.logT);
    return out;
}

cplx eval_W_partial(cplx s, double T, double Q, int m_max)
{
    const double a = T / Q, b = T / (Q * Q);
    cplx poch = 1.0;  // Poch(s+2, m-2)
    double f = a / 2.0;  // a^{m-1}/m!
    cplx sum = 0.0;
    for (int m = 2; m <= m_max; ++m) {
        sum += f * poch * eval_Lm(m, a, b, s + static_cast<double>(m));
        poch *= s + static_cast<double>(m);
        f *= a / (m + 1);
    }
    return sum;
}

WValue eval_W(cplx s, double T, double Q, const TruncationPolicy& policy)
{
    if (!(Q > 0) || !(T >= 0) || !(T / Q < 1))
        fail(Errc::domain, "W needs 0 <= T/Q < 1");
    const double a = T / Q, b = T / (Q * Q);
    WValue w;
    if (a == 0) {
        w.value = 0.0;
        return w;
    }
    cplx poch = 1.0;
    double f = a / 2.0;
    cplx sum = 0.0;
    double prev_mag = 0;
    for (int m = 2; m <= std::max(policy.m_max, 2); ++m) {
        const cplx term = f * poch * eval_Lm(m, a, b, s + static_cast<double>(m));
        sum += term;
        w.terms = m - 1;
        const double mag = std::abs(term);
        poch *= s + static_cast<double>(m);
        f *= a / (m + 1);
        if (m >= 4 && prev_mag > 0) {
            // geometric tail from the observed ratio, floored by the limiting ratio T/Q
            const double ratio = std::max(mag / prev_mag, a);
            const double tail = ratio < 1 ? mag * ratio / (1 - ratio) : std::numeric_limits<double>::infinity();
            w.tail_bound = tail;
            if (ratio < 0.9 && tail <= 1e-3 * policy.tail_tol * std::max(std::abs(sum), 1e-300))
                break;
            if (mag == 0)
                break;
        }
        prev_mag = mag;
    }
    w.value = sum;
    w.truncated = w.tail_bound > policy.tail_tol * std::abs(sum) && std::abs(sum) > 0;
    return w;
}

WValue eval_W(cplx s, double r, double c, double d, double p, int k, const TruncationPolicy& policy)
{
    const auto tq = class_tq(r, c, d, p, k);
    return eval_W(s, tq.T, tq.Q, policy);
}

}  // namespace profilium
