#include "genfun.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_poly.h>
#include <numbers>
#include <tuple>

namespace profilium {

std::vector<std::complex<double>> polynomial_roots(const Polynomial<double>& poly)
{
    const auto& c = poly.coeffs();
    if (c.size() < 2)
        return {};
    // strip roots at zero so GSL sees a nonzero constant term
    std::size_t lead0 = 0;
    while (lead0 < c.size() && c[lead0] == 0.0)
        ++lead0;
    std::vector<std::complex<double>> out(lead0, {0.0, 0.0});
    std::vector<double> a(c.begin() + static_cast<long>(lead0), c.end());
    if (a.size() < 2)
        return out;
    const std::size_t n = a.size();
    std::vector<double> z(2 * (n - 1));
    gsl_poly_complex_workspace* w = gsl_poly_complex_workspace_alloc(n);
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    const int status = gsl_poly_complex_solve(a.data(), n, w, z.data());
    gsl_set_error_handler(old);
    gsl_poly_complex_workspace_free(w);
    if (status != GSL_SUCCESS)
        fail(Errc::numeric, "polynomial root finder did not converge");
    for (std::size_t i = 0; i + 1 < n; ++i)
        out.emplace_back(z[2 * i], z[2 * i + 1]);
    return out;
}

int winding_number(const Polynomial<double>& poly, double radius)
{
    const int deg = std::max(poly.degree(), 1);
    for (int M = std::max(256, 64 * deg); M <= (1 << 22); M *= 2) {
        double total = 0;
        bool smooth = true;
        std::complex<double> prev = poly(std::complex<double>(radius, 0.0));
        if (std::abs(prev) == 0.0)
            fail(Errc::numeric, "polynomial vanishes on the certificate contour");
        for (int i = 1; i <= M; ++i) {
            const double t = 2.0 * std::numbers::pi * i / M;
            const std::complex<double> cur = poly(std::polar(radius, t));
            if (std::abs(cur) == 0.0)
                fail(Errc::numeric, "polynomial vanishes on the certificate contour");
            const double step = std::arg(cur / prev);
            if (std::fabs(step) > std::numbers::pi / 4) {
                smooth = false;
                break;
            }
            total += step;
            prev = cur;
        }
        if (smooth)
            return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    }
    fail(Errc::numeric, "argument principle did not resolve on the contour");
}

double certificate_radius(const Polynomial<double>& poly)
{
    auto roots = polynomial_roots(poly);
    std::vector<double> mod;
    for (const auto& r : roots)
        mod.push_back(std::abs(r));
    std::sort(mod.begin(), mod.end());
    if (mod.size() < 2)
        return 1.25;
    return std::min(1.25, 0.5 * (mod[0] + mod[1]));
}

RootCertificate dominant_root(const Polynomial<double>& poly, double radius)
{
    if (!(radius > 1.0))
        fail(Errc::domain, "certificate radius must exceed 1");
    const double f1 = poly(1.0);
    if (!(f1 > 0))
        fail(Errc::domain, "dominant_root expects a positive value at z = 1");
    double lo = 1.0, hi = 1.0;
    const double factor = 1.0 + 1.0 / 64;
    bool found = false;
    while (hi < 1e6) {
        const double next = hi * factor;
        if (poly(next) <= 0) {
            lo = hi;
            hi = next;
            found = true;
            break;
        }
        hi = next;
    }
    if (!found)
        fail(Errc::numeric, "no sign change of the denominator beyond z = 1");
    const auto d1 = poly.derivative();
    auto fn = [&](double z) { return std::make_tuple(poly(z), d1(z)); };
    std::uintmax_t iters = 200;
    double root = boost::math::tools::newton_raphson_iterate(fn, 0.5 * (lo + hi), lo, hi,
                                                             std::numeric_limits<double>::digits - 2, iters);
    if (!std::isfinite(root))
        fail(Errc::numeric, "Newton iteration diverged");
    RootCertificate c;
    c.root = root;
    c.radius = radius;
    c.residual = std::fabs(poly(root));
    double scale = 0, zp = 1;
    for (double a : poly.coeffs()) {
        scale += std::fabs(a) * zp;
        zp *= root;
    }
    c.winding_count = winding_number(poly, radius);
    const bool residual_ok = c.residual <= 1e-12 * std::max(scale, 1.0);
    const bool inside = root > 1.0 && root <= radius;
    c.ok = c.winding_count == 1 && residual_ok && inside;
    if (!inside)
        c.note = "root outside (1, radius]";
    else if (c.winding_count != 1)
        c.note = "winding count " + std::to_string(c.winding_count);
    else if (!residual_ok)
        c.note = "residual too large";
    return c;
}

std::array<double, 4> laurent_principal(const Polynomial<double>& num, const Polynomial<double>& den, double R, int m)
{
    if (m < 1 || m > 3)
        fail(Errc::invalid_argument, "laurent_principal supports powers 1..3");
    // den = (z-R) E(z); Taylor data of E at R from derivatives of den.
    const double e0 = den.derivative(1)(R);
    const double e1 = den.derivative(2)(R) / 2.0;
    const double e2 = den.derivative(3)(R) / 6.0;
    if (std::fabs(e0) < 1e-12)
        fail(Errc::numeric, "degenerate root: derivative vanishes");
    const std::array<double, 3> nt{num(R), num.derivative(1)(R), num.derivative(2)(R) / 2.0};
    const std::array<double, 3> inv{1.0 / e0, -e1 / (e0 * e0), (e1 * e1 - e0 * e2) / (e0 * e0 * e0)};
    auto mul = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[1] * b[1] + a[2] * b[0]};
    };
    std::array<double, 3> invm{1.0, 0.0, 0.0};
    for (int i = 0; i < m; ++i)
        invm = mul(invm, inv);
    const auto f = mul(nt, invm);
    std::array<double, 4> b{0, 0, 0, 0};
    for (int j = 1; j <= m; ++j)
        b[j] = f[m - j];
    return b;
}

ResidueConstants residue_constants_single(const Word& u, const ModelParams& m, double radius)
{
    const auto g = build_single_gfs<double>(u, m);
    ResidueConstants rc;
    rc.cert = dominant_root(g.D, radius > 0 ? radius : certificate_radius(g.D));
    const double R = rc.R = rc.cert.root;
    const double d1 = g.D.derivative(1)(R), d2 = g.D.derivative(2)(R);
    if (std::fabs(d1) < 1e-12)
        fail(Errc::numeric, "degenerate root of D_u");
    const double pu = pro(u, m);
    rc.c00 = -g.C(R) / d1;
    rc.c10 = pu * d2 / (d1 * d1 * d1);
    rc.c11 = pu / (d1 * d1);
    return rc;
}

ResidueConstants residue_constants_joint(const Word& u, const Word& v, const ModelParams& m, double radius)
{
    const auto g = build_joint_gfs<double>(u, v, m);
    ResidueConstants rc;
    rc.cert = dominant_root(g.delta, radius > 0 ? radius : certificate_radius(g.delta));
    const double R = rc.R = rc.cert.root;
    // a_0 = -b_1, a_1 = b_2, a_2 = -b_3/2 turn the principal part into the n-dependent estimates.
    const auto b00 = laurent_principal(g.G00.num, g.delta, R, 1);
    const auto b10 = laurent_principal(g.G10.num, g.delta, R, 2);
    const auto b01 = laurent_principal(g.G01.num, g.delta, R, 2);
    const auto b11 = laurent_principal(g.G11.num, g.delta, R, 3);
    rc.a00 = -b00[1];
    rc.a10u = -b10[1];
    rc.a11u = b10[2];
    rc.a10v = -b01[1];
    rc.a11v = b01[2];
    rc.a20 = -b11[1];
    rc.a21 = b11[2];
    rc.a22 = -b11[3] / 2.0;
    return rc;
}

SingleAggregate single_aggregate(const ResidueConstants& c, int k)
{
    return {c.c00 / std::pow(c.R, k) + c.c10, c.c11 / c.R};
}

SingleAggregate single_aggregate_printed(const ResidueConstants& c, int k)
{
    return {(c.c00 + c.c10) / std::pow(c.R, k) + k * c.c11 / std::pow(c.R, k + 1), c.c11 / std::pow(c.R, k + 1)};
}

double b0_printed(const ResidueConstants& cu, const ResidueConstants& cv, int k)
{
    return cu.c00 * cv.c00 / std::pow(cu.R * cv.R, k);
}

AggregateConstants aggregate_constants(const ResidueConstants& cu, const ResidueConstants& cv,
                                       const ResidueConstants& j, int k)
{
    AggregateConstants a;
    a.Ru = cu.R;
    a.Rv = cv.R;
    a.Ruv = j.R;
    const double R = j.R;
    const double r0 = std::pow(R, k), r1 = r0 * R, r2 = r1 * R;
    const double lin = j.a11u + j.a11v + j.a21;
    a.A0 = (j.a00 + j.a10u + j.a10v + j.a20) / r0 + lin * k / r1 + j.a22 * k * (k + 1.0) / r2;
    a.A1 = lin / r1 + j.a22 * (2.0 * k + 1.0) / r2;
    a.A2 = j.a22 / r2;
    const auto su = single_aggregate(cu, k), sv = single_aggregate(cv, k);
    a.C0 = su.C0;
    a.C1 = su.C1;
    a.B0 = su.C0 * sv.C0;
    a.B1 = su.C0 * sv.C1 + su.C1 * sv.C0;
    a.B2 = su.C1 * sv.C1;
    return a;
}

AggregateConstants aggregate_constants(const Word& u, const Word& v, const ModelParams& m)
{
    return aggregate_constants(residue_constants_single(u, m), residue_constants_single(v, m),
                               residue_constants_joint(u, v, m), u.len);
}

RootsVariance variance_via_roots(std::uint64_t n, int k, const ModelParams& m)
{
    if (k < 2)
        fail(Errc::domain, "variance_via_roots: needs k >= 2 (the pair denominators are constant at k = 1)");
    if (k > kPairEnumCap)
        fail(Errc::resource, "variance_via_roots: pair enumeration capped at k <= " + std::to_string(kPairEnumCap));
    const std::size_t W = std::size_t{1} << k;
    const double nd = static_cast<double>(n);
    RootsVariance out;
    out.rho_disc = 1.25;
    std::vector<ResidueConstants> single(W);
    std::vector<double> miss(W);  // P(I_u = 0) estimate, (C0 + n C1)/R^n
    std::vector<Word> words(W);
    auto track = [&](const RootCertificate& c) {
        ++out.polynomials;
        if (!c.ok)
            ++out.certificate_failures;
        out.rho_disc = std::min(out.rho_disc, c.radius);
    };
    double total = 0, comp = 0;
    auto add = [&](double t) {
        const double s = total + t;
        comp += std::fabs(total) >= std::fabs(t) ? (total - s) + t : (t - s) + total;
        total = s;
    };
    for (std::size_t b = 0; b < W; ++b) {
        words[b] = Word::from_bits(b, k);
        single[b] = residue_constants_single(words[b], m);
        track(single[b].cert);
        const auto s = single_aggregate(single[b], k);
        miss[b] = (s.C0 + nd * s.C1) / std::pow(single[b].R, nd);
        const double S = 1.0 - miss[b];
        add(S - S * S);
    }
    for (std::size_t a = 0; a < W; ++a) {
        for (std::size_t b = 0; b < W; ++b) {
            if (a == b)
                continue;
            const auto j = residue_constants_joint(words[a], words[b], m);
            track(j.cert);
            if (std::fabs(j.R - single[a].R) < 1e-9 || std::fabs(j.R - single[b].R) < 1e-9)
                ++out.near_coincident;
            const auto ag = aggregate_constants(single[a], single[b], j, k);
            const double joint = (ag.A0 + nd * ag.A1 + nd * nd * ag.A2) / std::pow(j.R, nd);
            add(joint - miss[a] * miss[b]);
        }
    }
    out.value = total + comp;
    out.error_scale = std::pow(out.rho_disc, -nd);
    return out;
}

}  // namespace profilium
