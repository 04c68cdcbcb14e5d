#include "model.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace profilium {

mpq_class rationalize(double x, double tol, long max_den)
{
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        mpz_class ai(static_cast<long>(a));
        mpz_class h2 = ai * h1 + h0;
        mpz_class k2 = ai * k1 + k0;
        if (k2 > max_den)
            break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        mpq_class cand(h1, k1);
        cand.canonicalize();
        if (std::fabs(cand.get_d() - x) <= tol)
            return cand;
        double frac = r - a;
        if (frac < 1e-300)
            break;
        r = 1.0 / frac;
    }
    mpq_class out(x);
    out.canonicalize();
    return out;
}

ModelParams ModelParams::from_p(double p)
{
    if (!(p > 0.5 && p < 1.0))
        fail(Errc::domain, "p must satisfy 1/2 < p < 1, got " + std::to_string(p));
    ModelParams m;
    m.p_exact = rationalize(p);
    m.q_exact = 1 - m.p_exact;
    m.p = m.p_exact.get_d();
    m.q = m.q_exact.get_d();
    return m;
}

ModelParams ModelParams::with_nk(double p, std::uint64_t n, int k)
{
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    ModelParams m = from_p(p);
    m.n = n;
    m.k = k;
    m.alpha = n > 1 ? k / std::log(static_cast<double>(n)) : 0.0;
    return m;
}

ModelParams ModelParams::with_alpha(double p, double alpha, std::uint64_t n)
{
    if (!(alpha > 0))
        fail(Errc::domain, "alpha must be positive");
    if (n < 2)
        fail(Errc::domain, "n must be at least 2 when k is derived from alpha");
    ModelParams m = from_p(p);
    m.n = n;
    m.alpha = alpha;
    double kk = std::round(alpha * std::log(static_cast<double>(n)));
    if (kk < 1)
        fail(Errc::domain, "round(alpha ln n) is below 1");
    m.k = static_cast<int>(kk);
    return m;
}

double ModelParams::effective_alpha() const
{
    if (n > 1 && k >= 1)
        return k / std::log(static_cast<double>(n));
    return alpha;
}

ModelParams ModelParams::with_k(int kk) const
{
    ModelParams m = *this;
    m.k = kk;
    if (n > 1)
        m.alpha = kk / std::log(static_cast<double>(n));
    return m;
}

}  // namespace profilium
