#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <complex>
#include <string>
#include <vector>

#include "error.hpp"
#include "model.hpp"
#include "polynomial.hpp"
#include "words.hpp"

namespace profilium {

template <class T>
struct RationalGF {
    Polynomial<T> num;
    Polynomial<T> den;
    int power = 1;
};

template <class T>
struct SingleGFs {
    Polynomial<T> C;  // C_{u,u}
    Polynomial<T> D;
    RationalGF<T> G0, G1;
};

template <class T>
struct JointGFs {
    Polynomial<T> Cuu, Cvv, Cuv, Cvu;
    Polynomial<T> psi, phi_u, phi_v, Du, Dv, delta;
    RationalGF<T> G00, G10, G01, G11;
};

template <class T>
Polynomial<T> one_minus_z()
{
    return Polynomial<T>(std::vector<T>{T(1), T(-1)});
}

template <class T>
SingleGFs<T> build_single_gfs(const Word& u, const ModelParams& m)
{
    if (u.len < 1)
        fail(Errc::domain, "empty word");
    SingleGFs<T> s;
    const T pu = pro<T>(u, m);
    s.C = correlation_poly<T>(u, u, m);
    s.D = one_minus_z<T>() * s.C + Polynomial<T>::monomial(u.len, pu);
    s.G0 = {s.C, s.D, 1};
    s.G1 = {Polynomial<T>::monomial(u.len, pu), s.D, 2};
    return s;
}

template <class T>
JointGFs<T> build_joint_gfs(const Word& u, const Word& v, const ModelParams& m)
{
    if (u.len < 1 || u.len != v.len)
        fail(Errc::domain, "joint generating functions need nonempty words of equal length");
    if (u == v)
        fail(Errc::domain, "joint generating functions need distinct words");
    const int k = u.len;
    const T pu = pro<T>(u, m), pv = pro<T>(v, m);
    const auto omz = one_minus_z<T>();
    JointGFs<T> g;
    g.Cuu = correlation_poly<T>(u, u, m);
    g.Cvv = correlation_poly<T>(v, v, m);
    g.Cuv = correlation_poly<T>(u, v, m);
    g.Cvu = correlation_poly<T>(v, u, m);
    g.psi = g.Cuu * g.Cvv - g.Cuv * g.Cvu;
    g.phi_u = g.Cvv - g.Cuv;
    g.phi_v = g.Cuu - g.Cvu;
    g.Du = omz * g.Cuu + Polynomial<T>::monomial(k, pu);
    g.Dv = omz * g.Cvv + Polynomial<T>::monomial(k, pv);
    g.delta = omz * g.psi + Polynomial<T>::monomial(k, T(1)) * (pu * g.phi_u + pv * g.phi_v);
    g.G00 = {g.psi, g.delta, 1};
    g.G10 = {g.delta * g.Cvv - g.psi * g.Dv, g.delta, 2};
    g.G01 = {g.delta * g.Cuu - g.psi * g.Du, g.delta, 2};
    g.G11 = {g.delta * g.delta - g.delta * (g.Cvv * g.Du + g.Cuu * g.Dv + omz * g.psi)
                 + T(2) * (g.psi * g.Du * g.Dv),
             g.delta, 3};
    return g;
}

inline constexpr int kExactSeriesCap = 20000;
inline constexpr int kFloatSeriesCap = 10000000;

// Coefficients 0..N of num/den^power via the recurrence induced by the denominator.
template <class T>
std::vector<T> series_coeffs(const RationalGF<T>& gf, int N)
{
    if (N < 0)
        fail(Errc::domain, "series index must be nonnegative");
    constexpr bool exact = !std::is_floating_point_v<T>;
    if (N > (exact ? kExactSeriesCap : kFloatSeriesCap))
        fail(Errc::resource, "series index " + std::to_string(N) + " above cap");
    const Polynomial<T> d = gf.den.pow(gf.power);
    if (d.is_zero() || d[0] == T(0))
        fail(Errc::domain, "denominator vanishes at z = 0");
    const auto& dc = d.coeffs();
    const T d0 = dc[0];
    std::vector<T> a(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        const int jmax = std::min<int>(n, static_cast<int>(dc.size()) - 1);
        if constexpr (exact) {
            T s = gf.num[n];
            for (int j = 1; j <= jmax; ++j)
                s -= dc[j] * a[n - j];
            a[n] = s / d0;
        } else {
            // Neumaier-compensated accumulation
            double s = gf.num[n], c = 0;
            for (int j = 1; j <= jmax; ++j) {
                const double t = -dc[j] * a[n - j];
                const double u = s + t;
                c += std::fabs(s) >= std::fabs(t) ? (s - u) + t : (t - u) + s;
                s = u;
            }
            a[n] = (s + c) / d0;
            if (!std::isfinite(a[n]))
                fail(Errc::numeric, "series coefficient overflow at index " + std::to_string(n));
        }
    }
    return a;
}

template <class T>
T series_coeff(const RationalGF<T>& gf, int n)
{
    return series_coeffs(gf, n).back();
}

struct RootCertificate {
    double root = 0;
    double radius = 0;
    int winding_count = 0;
    double residual = 0;
    bool ok = false;
    std::string note;
};

// All complex roots (GSL companion-matrix solver).
std::vector<std::complex<double>> polynomial_roots(const Polynomial<double>& poly);
// Zeros inside |z| = radius by the argument principle.
int winding_number(const Polynomial<double>& poly, double radius);
// min(1.25, midpoint between the two smallest root moduli).
double certificate_radius(const Polynomial<double>& poly);
// Real root in (1, inf) reached from z = 1 by bracketed Newton, with a certificate on |z| = radius.
RootCertificate dominant_root(const Polynomial<double>& poly, double radius);

struct ResidueConstants {
    double R = 0;
    double c00 = 0, c10 = 0, c11 = 0;
    double a00 = 0, a10u = 0, a10v = 0, a11u = 0, a11v = 0, a20 = 0, a21 = 0, a22 = 0;
    RootCertificate cert;
};

// b[j] = coefficient of (z-R)^{-j}, j = 1..m, in num/den^m at a simple root R of den.
std::array<double, 4> laurent_principal(const Polynomial<double>& num, const Polynomial<double>& den, double R, int m);

// radius <= 0 selects certificate_radius.
ResidueConstants residue_constants_single(const Word& u, const ModelParams& m, double radius = 0);
ResidueConstants residue_constants_joint(const Word& u, const Word& v, const ModelParams& m, double radius = 0);

struct SingleAggregate {
    double C0 = 0, C1 = 0;
};

struct AggregateConstants {
    double A0 = 0, A1 = 0, A2 = 0;
    double B0 = 0, B1 = 0, B2 = 0;
    double C0 = 0, C1 = 0;
    double Ru = 0, Rv = 0, Ruv = 0;
};

// P(U_{n+k-1} <= 1) ~ (C0 + n C1) / R^n
SingleAggregate single_aggregate(const ResidueConstants& c, int k);
// The pair-level combination as typeset, which is not consistent with the single-word estimates.
SingleAggregate single_aggregate_printed(const ResidueConstants& c, int k);
double b0_printed(const ResidueConstants& cu, const ResidueConstants& cv, int k);

AggregateConstants aggregate_constants(const ResidueConstants& cu, const ResidueConstants& cv,
                                       const ResidueConstants& cuv, int k);
AggregateConstants aggregate_constants(const Word& u, const Word& v, const ModelParams& m);

struct RootsVariance {
    double value = 0;
    double rho_disc = 0;
    double error_scale = 0;
    int certificate_failures = 0;
    int near_coincident = 0;
    int polynomials = 0;
};

RootsVariance variance_via_roots(std::uint64_t n, int k, const ModelParams& m);

}  // namespace profilium
