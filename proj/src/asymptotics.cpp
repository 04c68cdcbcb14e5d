#include "asymptotics.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>
#include <vector>

#include "words.hpp"

namespace profilium {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double binom(int n, int r)
{
    if (r < 0 || r > n)
        return 0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0));
}

cplx log1p_c(cplx t)
{
    if (std::abs(t) < 1e-4)
        return t - t * t / 2.0 + t * t * t / 3.0;
    return std::log(1.0 + t);
}

}  // namespace

const char* regime_name(RegimeClass c)
{
    switch (c) {
    case RegimeClass::small: return "small";
    case RegimeClass::saddle: return "saddle";
    case RegimeClass::polar: return "polar";
    }
    return "unknown";
}

Thresholds thresholds(double p)
{
    if (!(p > 0.5 && p < 1.0))
        fail(Errc::domain, "thresholds need 1/2 < p < 1");
    const double q = 1 - p, lp = std::log(p), lq = std::log(q);
    return {-1.0 / lq, -(p * p + q * q) / (p * p * lp + q * q * lq)};
}

RegimeClass classify(double alpha, const Thresholds& t)
{
    if (alpha < t.alpha1)
        return RegimeClass::small;
    if (alpha < t.alpha2)
        return RegimeClass::saddle;
    return RegimeClass::polar;
}

Regime regime_thresholds(double p, double alpha)
{
    const auto t = thresholds(p);
    Regime r{t.alpha1, t.alpha2, classify(alpha, t), std::min(std::fabs(alpha - t.alpha1), std::fabs(alpha - t.alpha2))};
    if (r.margin < kBoundaryMargin)
        fail(Errc::boundary, "alpha lies on a regime threshold");
    return r;
}

KernelValue eval_L(cplx s, double p)
{
    const double a = std::log(p), b = std::log1p(-p), c = a - b;
    cplx L, w;
    if (s.real() >= 0) {
        const cplx t = std::exp(-s * c);
        L = -s * b + log1p_c(t);
        w = t / (1.0 + t);
    } else {
        const cplx t = std::exp(s * c);
        L = -s * a + log1p_c(t);
        w = 1.0 / (1.0 + t);
    }
    return {L, -(a * w + b * (1.0 - w)), w * (1.0 - w) * c * c};
}

KernelValue eval_h(cplx s, double p, double alpha)
{
    const auto L = eval_L(s, p);
    return {-s + alpha * L.value, -1.0 + alpha * L.d1, alpha * L.d2};
}

double class_log_term(double r, double c, double d, double p, double alpha, int k)
{
    if (r == 0)
        return (alpha / k) * std::log(2.0);
    return (alpha / k) * class_tq(r, c, d, p, k).logQ;
}

KernelValue eval_H(cplx s, double r, double c, double d, double p, double alpha, int k)
{
    const auto L = eval_L(s, p);
    const double B = class_log_term(r, c, d, p, alpha, k);
    const double a1 = alpha * (1 - r);
    return {-s + a1 * L.value - s * B, -1.0 + a1 * L.d1 - B, a1 * L.d2};
}

double discriminant(double r, double c, double d, double p, double alpha, int k)
{
    const double beta = 1 + class_log_term(r, c, d, p, alpha, k);
    return beta > 0 ? alpha * (1 - r) / beta : kNaN;
}

double kstep(double p) { return 2 * std::numbers::pi / std::log(p / (1 - p)); }

double saddle_closed_form(double p, double A)
{
    const double lp = std::log(p), lq = std::log1p(-p);
    const double ratio = -(A * lp + 1) / (A * lq + 1);
    if (!(ratio > 0))
        return kNaN;
    return std::log(ratio) / std::log(p / (1 - p));
}

namespace {

// Root of -1 + A L'(s); the kernel is beta (-s + A L(s)).
SaddleSolution saddle_for(double p, double A, double beta)
{
    auto f = [&](double s) { return -1.0 + A * eval_L(cplx(s, 0), p).d1.real(); };
    SaddleSolution out;
    out.kstep = kstep(p);
    out.closed_form = saddle_closed_form(p, A);
    double guess = std::isfinite(out.closed_form) ? out.closed_form : 0.0;
    double lo = guess - 1, hi = guess + 1;
    double step = 1;
    while (f(lo) > 0 && step < 1e4) {
        step *= 2;
        lo = guess - step;
    }
    step = 1;
    while (f(hi) < 0 && step < 1e4) {
        step *= 2;
        hi = guess + step;
    }
    if (!(f(lo) <= 0 && f(hi) >= 0))
        fail(Errc::regime, "no sign change brackets the saddle point");
    auto fn = [&](double s) {
        const auto L = eval_L(cplx(s, 0), p);
        return std::make_tuple(-1.0 + A * L.d1.real(), A * L.d2.real());
    };
    std::uintmax_t iters = 200;
    guess = std::clamp(guess, lo, hi);
    out.s = boost::math::tools::newton_raphson_iterate(fn, guess, lo, hi, std::numeric_limits<double>::digits - 4, iters);
    const auto L = eval_L(cplx(out.s, 0), p);
    out.residual = std::fabs(beta * (-1.0 + A * L.d1.real()));
    out.second_deriv = beta * A * L.d2.real();
    return out;
}

}  // namespace

SaddleSolution solve_saddle(double p, double alpha) { return saddle_for(p, alpha, 1.0); }

SaddleSolution solve_saddle(double p, double alpha, int k, double r, double c, double d)
{
    const double beta = 1 + class_log_term(r, c, d, p, alpha, k);
    if (!(beta > 0))
        fail(Errc::regime, "class has no saddle: nonpositive scale");
    return saddle_for(p, alpha * (1 - r) / beta, beta);
}

double g_atom(double X, double Q, double T)
{
    if (X <= 0 || T <= 0)
        return 0;
    if (X * T <= 30) {
        const double lX = std::log(X), lT = std::log(T), lQ = std::log(Q);
        const double a = T / Q, bx = X * T / Q;
        double sum = 0, peak = -std::numeric_limits<double>::infinity();
        for (int m = 2; m < 100000; ++m) {
            const double lt = -X * Q + m * lX + (m - 1) * lT + lQ - std::lgamma(m + 1.0);
            peak = std::max(peak, lt);
            sum += std::exp(lt) * (a * (m - 1.0) * (m - 1.0) + m * (2.0 - m) + bx * m);
            if (m > X * T + 2 && lt < peak - 60)
                break;
        }
        return sum;
    }
    const double d = Q - T;
    return std::exp(-X * d) * ((-std::expm1(-X * T)) * (1 + X * Q + X * X * T) - X * T * (1 + X * d));
}

GDirect g_direct(std::uint64_t n, int ell, int i, int j, const ModelParams& m)
{
    const int k = m.k;
    if (ell < 1 || ell >= k || i < 0 || i > ell || j < 0 || j > ell)
        fail(Errc::domain, "class (l,i,j) outside 1 <= l < k, 0 <= i,j <= l");
    if (k - ell > 64)
        fail(Errc::resource, "k(1-r) above 64");
    const auto tq = class_tq(ell, i, j, m.p);
    const int wl = k - ell;
    const double lp = std::log(m.p), lq = std::log(m.q), ln = std::log(static_cast<double>(n));
    GDirect out;
    bool any = false;
    for (int a = 0; a <= wl; ++a) {
        const double lX = ln + a * lp + (wl - a) * lq;
        const double X = std::exp(lX);
        // every exponential in the atom is bounded by exp(-X (Q - T)) or the series head
        if (X * (tq.Q - tq.T) < 690 || X * tq.T <= 30)
            any = true;
        out.value += binom(wl, a) * g_atom(X, tq.Q, tq.T);
    }
    out.underflow = !any || out.value == 0;
    return out;
}

GDirect g_direct(std::uint64_t n, double r, double c, double d, const ModelParams& m)
{
    const int ell = static_cast<int>(std::lround(r * m.k));
    return g_direct(n, ell, static_cast<int>(std::lround(c * ell)), static_cast<int>(std::lround(d * ell)), m);
}

namespace {

struct ClassEval {
    GAsymptotic g;
    double log_scale = 0;  // g.value = exp(log_scale) * g.complex_value.real()
};

// Class contribution computed relative to exp(log_base); avoids overflow in assembled sums.
ClassEval class_asymptotic(double ln_n, int k, double alpha, int ell, int i, int j, double p,
                           const Thresholds& th, const TruncationPolicy& policy, std::optional<RegimeClass> force,
                           double log_base)
{
    ClassEval ce;
    const auto tq = class_tq(ell, i, j, p);
    const double r = static_cast<double>(ell) / k;
    const double B = (alpha / k) * tq.logQ;
    const double beta = 1 + B;
    const double A = beta > 0 ? alpha * (1 - r) / beta : kNaN;
    ce.g.A = A;
    RegimeClass cls = std::isnan(A) ? RegimeClass::small : classify(A, th);
    if (!std::isnan(A) && std::min(std::fabs(A - th.alpha1), std::fabs(A - th.alpha2)) < kBoundaryMargin)
        ce.g.boundary = true;
    if (force)
        cls = *force;
    ce.g.regime = cls;
    const double c = static_cast<double>(i) / ell, d = static_cast<double>(j) / ell;
    auto H = [&](cplx s) { return eval_H(s, r, c, d, p, alpha, k); };
    if (cls == RegimeClass::small) {
        ce.g.complex_value = 0.0;
        return ce;
    }
    if (cls == RegimeClass::polar) {
        const auto W = eval_W(cplx(-2.0, 0), tq.T, tq.Q, policy);
        ce.g.m_used = W.terms;
        const double e = H(cplx(-2.0, 0)).value.real() * ln_n - log_base;
        ce.g.complex_value = std::exp(e) * W.value;
        return ce;
    }
    const auto ss = saddle_for(p, A, beta);
    const double K = ss.kstep;
    cplx sum = 0.0;
    int y_used = 0;
    for (int y = 0; y <= policy.y_max; ++y) {
        cplx shell = 0.0;
        for (int sgn : {1, -1}) {
            if (y == 0 && sgn < 0)
                continue;
            const cplx s(ss.s, sgn * y * K);
            const auto hv = H(s);
            const auto W = eval_W(s, tq.T, tq.Q, policy);
            ce.g.m_used = std::max(ce.g.m_used, W.terms);
            const cplx expo = hv.value * ln_n - log_base;
            shell += std::exp(expo) * W.value * complex_gamma(s + 2.0) / std::sqrt(2 * std::numbers::pi * hv.d2 * ln_n);
        }
        sum += shell;
        y_used = y;
        if (y >= 1 && std::abs(shell) <= policy.tail_tol * std::abs(sum))
            break;
    }
    ce.g.y_used = y_used;
    ce.g.complex_value = sum;
    return ce;
}

}  // namespace

GAsymptotic g_asymptotic(std::uint64_t n, int ell, int i, int j, const ModelParams& m, const TruncationPolicy& policy)
{
    if (n < 2)
        fail(Errc::domain, "n must be at least 2");
    const int k = m.k;
    if (ell < 1 || ell >= k || i < 0 || i > ell || j < 0 || j > ell)
        fail(Errc::domain, "class (l,i,j) outside 1 <= l < k, 0 <= i,j <= l");
    const double ln_n = std::log(static_cast<double>(n));
    const double alpha = m.effective_alpha();
    auto ce = class_asymptotic(ln_n, k, alpha, ell, i, j, m.p, thresholds(m.p), policy, std::nullopt, 0.0);
    ce.g.value = ce.g.complex_value.real();
    return ce.g;
}

GAsymptotic g_asymptotic(std::uint64_t n, double r, double c, double d, const ModelParams& m, const TruncationPolicy& policy)
{
    const int ell = static_cast<int>(std::lround(r * m.k));
    return g_asymptotic(n, ell, static_cast<int>(std::lround(c * ell)), static_cast<int>(std::lround(d * ell)), m, policy);
}

VarianceReport variance_asymptotic(std::uint64_t n, const ModelParams& m, const TruncationPolicy& policy)
{
    if (n < 2)
        fail(Errc::domain, "n must be at least 2");
    if (m.k < 1)
        fail(Errc::domain, "k must be at least 1");
    VarianceReport rep;
    rep.truncation = policy;
    const double alpha = rep.alpha_eff = m.effective_alpha();
    const auto reg = regime_thresholds(m.p, alpha);
    const Thresholds th{reg.alpha1, reg.alpha2};
    rep.regime = reg.cls;
    const double ln_n = std::log(static_cast<double>(n));
    if (reg.cls == RegimeClass::small) {
        rep.small_regime_flag = true;
        rep.flags = "small-regime: only a super-polynomially small upper bound exists";
        return rep;
    }
    const int k = m.k;
    std::optional<RegimeClass> force;
    if (reg.cls == RegimeClass::saddle) {
        const auto ss = solve_saddle(m.p, alpha);
        rep.exponent = eval_h(cplx(ss.s, 0), m.p, alpha).value.real();
        rep.log_factor = std::sqrt(ln_n);
        cplx c1 = 0.0, c1p = 0.0;
        for (int y = 0; y <= policy.y_max; ++y) {
            cplx shell = 0.0, shellp = 0.0;
            for (int sgn : {1, -1}) {
                if (y == 0 && sgn < 0)
                    continue;
                const cplx s(ss.s, sgn * y * ss.kstep);
                const auto hv = eval_h(s, m.p, alpha);
                const cplx phase = std::exp((hv.value - rep.exponent) * ln_n);
                const cplx den = std::sqrt(2 * std::numbers::pi * hv.d2);
                shell += phase * v1_kernel(s) / den;
                shellp += phase * v1_kernel_printed(s) / den;
            }
            c1 += shell;
            c1p += shellp;
            rep.y_used = y;
            if (y >= 1 && std::abs(shell) <= policy.tail_tol * std::abs(c1))
                break;
        }
        rep.C1 = c1.real();
        rep.C1_imag = c1.imag();
        rep.C1_printed = c1p.real();
    } else {
        rep.exponent = eval_h(cplx(-2.0, 0), m.p, alpha).value.real();
        rep.log_factor = 1;
        rep.C1 = 0.5;
        rep.C1_printed = eval_f1(cplx(-2.0, 0)).real();
        force = RegimeClass::polar;
    }
    // C2 = (log_factor / n^exponent) sum_{l,i,j} binom(l,i) binom(l,j) g(n, l/k, i/l, j/l)
    const int ell_max = policy.ell_max > 0 ? std::min(policy.ell_max, k - 1) : k - 1;
    const double log_base = rep.exponent * ln_n - std::log(rep.log_factor);
    double c2 = 0, last_shell = 0;
    for (int ell = 1; ell <= ell_max; ++ell) {
        double shell = 0;
        for (int i = 0; i <= ell; ++i)
            for (int j = 0; j <= ell; ++j) {
                auto ce = class_asymptotic(ln_n, k, alpha, ell, i, j, m.p, th, policy, force, log_base);
                rep.class_counts[static_cast<int>(ce.g.regime)] += 1;
                if (ce.g.boundary)
                    ++rep.boundary_classes;
                rep.m_used = std::max(rep.m_used, ce.g.m_used);
                shell += binom(ell, i) * binom(ell, j) * ce.g.complex_value.real();
            }
        c2 += shell;
        last_shell = shell;
    }
    rep.ell_used = ell_max;
    rep.C2 = c2;
    const double scale = std::exp(rep.exponent * ln_n) / rep.log_factor;
    rep.c1_term = scale * rep.C1;
    rep.c2_term = scale * 2 * rep.C2;
    rep.value = rep.c1_term + rep.c2_term;
    rep.printed_value = scale * (rep.C1_printed + 2 * rep.C2);
    rep.tail = std::fabs(scale * 2 * last_shell);
    if (rep.boundary_classes > 0)
        rep.flags = "boundary-classes=" + std::to_string(rep.boundary_classes);
    return rep;
}

double v1_term(std::uint64_t n, const ModelParams& m)
{
    const int k = m.k;
    const double lp = std::log(m.p), lq = std::log(m.q), ln = std::log(static_cast<double>(n));
    double v = 0;
    for (int a = 0; a <= k; ++a) {
        const double x = std::exp(ln + a * lp + (k - a) * lq);
        // phi(x) = 1 - (1+x)e^{-x}, and phi - phi^2 = phi (1+x) e^{-x}
        const double phi = x < 1e-3 ? x * x * (0.5 - x / 3 + x * x / 8) : -std::expm1(-x) - x * std::exp(-x);
        v += binom(k, a) * phi * (1 + x) * std::exp(-x);
    }
    return v;
}

VTerms v_terms(std::uint64_t n, const ModelParams& m, bool with_exact_v3)
{
    if (n < 1)
        fail(Errc::domain, "n must be at least 1");
    const int k = m.k;
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (k > 64)
        fail(Errc::resource, "k above 64");
    VTerms t;
    const double nd = static_cast<double>(n);
    t.V1 = v1_term(n, m);
    if (k <= kV2ExactCap) {
        const std::size_t W = std::size_t{1} << k;
        std::vector<Word> words(W);
        std::vector<double> pr(W);
        for (std::size_t b = 0; b < W; ++b) {
            words[b] = Word::from_bits(b, k);
            pr[b] = pro(words[b], m);
        }
        double v2 = 0, v3 = 0;
        for (std::size_t a = 0; a < W; ++a)
            for (std::size_t b = 0; b < W; ++b) {
                if (a == b)
                    continue;
                const auto ps = pair_stats(words[a], words[b], m);
                const double gap = ps.P - ps.Theta;
                v2 += nd * nd * nd * pr[a] * pr[b] * ps.K * std::exp(-nd * gap);
                v3 += std::exp(-nd * gap) * ((-std::expm1(-nd * ps.Theta)) * (1 + nd * ps.P + nd * nd * pr[a] * pr[b])
                                             - nd * ps.Theta * (1 + nd * gap));
            }
        t.V2 = v2;
        if (with_exact_v3)
            t.V3 = v3;
    } else {
        if (with_exact_v3)
            fail(Errc::resource, "ordered-pair V3 capped at k <= " + std::to_string(kV2ExactCap));
        // Theta <= c* P with c* the largest possible cross-correlation sum
        const double cstar = m.p * (1 - std::pow(m.p, k - 1)) / (1 - m.p);
        const double shrink = std::max(0.0, 1 - cstar);
        const double lp = std::log(m.p), lq = std::log(m.q);
        double v2 = 0;
        for (int a = 0; a <= k; ++a)
            for (int b = 0; b <= k; ++b) {
                const double pa = std::exp(a * lp + (k - a) * lq), pb = std::exp(b * lp + (k - b) * lq);
                v2 += binom(k, a) * binom(k, b) * nd * nd * nd * (2.0 * k - 1) * pa * pa * pb * pb
                    * std::exp(-nd * (pa + pb) * shrink);
            }
        t.V2 = v2;
        t.V2_is_bound = true;
    }
    double v3t = 0;
    for (int ell = 1; ell < k; ++ell)
        for (int i = 0; i <= ell; ++i)
            for (int j = 0; j <= ell; ++j)
                v3t += binom(ell, i) * binom(ell, j) * g_direct(n, ell, i, j, m).value;
    t.V3tilde = v3t;
    return t;
}

}  // namespace profilium
