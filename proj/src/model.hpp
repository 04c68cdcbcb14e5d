#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace profilium {

// Bernoulli source with P(a) = p > q = P(b), observed at n suffixes and depth k.
struct ModelParams {
    double p = 0.7;
    double q = 0.3;
    mpq_class p_exact{7, 10};
    mpq_class q_exact{3, 10};
    double alpha = 0.0;
    std::uint64_t n = 0;
    int k = 0;

    static ModelParams from_p(double p);
    // k given directly; alpha becomes k / ln n when n > 1.
    static ModelParams with_nk(double p, std::uint64_t n, int k);
    // k = round(alpha ln n); alpha keeps the requested value.
    static ModelParams with_alpha(double p, double alpha, std::uint64_t n);

    // alpha realised by the integer k at this n; the asymptotic kernels use this value.
    double effective_alpha() const;
    ModelParams with_k(int k) const;

    template <class T> T pv() const;
    template <class T> T qv() const;
};

template <> inline double ModelParams::pv<double>() const { return p; }
template <> inline double ModelParams::qv<double>() const { return q; }
template <> inline mpq_class ModelParams::pv<mpq_class>() const { return p_exact; }
template <> inline mpq_class ModelParams::qv<mpq_class>() const { return q_exact; }

// Smallest-denominator rational within tol of x (continued fractions).
mpq_class rationalize(double x, double tol = 1e-13, long max_den = 100000000L);

}  // namespace profilium
