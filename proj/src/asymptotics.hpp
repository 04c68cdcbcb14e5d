#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "error.hpp"
#include "model.hpp"

namespace profilium {

using cplx = std::complex<double>;

enum class RegimeClass { small, saddle, polar };
const char* regime_name(RegimeClass c);

struct Thresholds {
    double alpha1 = 0, alpha2 = 0;
};

struct Regime {
    double alpha1 = 0, alpha2 = 0;
    RegimeClass cls = RegimeClass::small;
    double margin = 0;
};

inline constexpr double kBoundaryMargin = 1e-6;

Thresholds thresholds(double p);
RegimeClass classify(double alpha, const Thresholds& t);
// Throws a boundary error when alpha is within kBoundaryMargin of a threshold.
Regime regime_thresholds(double p, double alpha);

struct KernelValue {
    cplx value, d1, d2;
};

// L(s) = log(p^{-s} + q^{-s}), continuous along vertical lines.
KernelValue eval_L(cplx s, double p);
// h(s) = -s + alpha L(s)
KernelValue eval_h(cplx s, double p, double alpha);
// (alpha/k) log((p^c q^{1-c})^{kr} + (p^d q^{1-d})^{kr})
double class_log_term(double r, double c, double d, double p, double alpha, int k);
// H(s,r,c,d) = -s + alpha(1-r) L(s) - s (alpha/k) log(...)
KernelValue eval_H(cplx s, double r, double c, double d, double p, double alpha, int k);
// A(r,c,d) = alpha(1-r) / ((alpha/k) log Q + 1); NaN when the denominator is not positive.
double discriminant(double r, double c, double d, double p, double alpha, int k);
double kstep(double p);

struct SaddleSolution {
    double s = 0;
    double second_deriv = 0;
    double residual = 0;
    double kstep = 0;
    double closed_form = 0;
};

// log[-(A ln p + 1)/(A ln q + 1)] / log(p/q); NaN outside (alpha1, -1/ln p).
double saddle_closed_form(double p, double A);
// Real root of h'(s) = 0.
SaddleSolution solve_saddle(double p, double alpha);
// Real root of dH/ds = 0 at (r,c,d).
SaddleSolution solve_saddle(double p, double alpha, int k, double r, double c, double d);

cplx complex_gamma(cplx z);
// f1(s) = 1 - 2^{-s} - s 2^{-s-2}
cplx eval_f1(cplx s);
// Mellin transform of phi - phi^2 with phi(x) = 1 - (1+x)e^{-x}: f1(s) Gamma(s+2)/s
cplx v1_kernel(cplx s);
// Typeset form f1(s) Gamma(s+1)
cplx v1_kernel_printed(cplx s);
cplx eval_Lm(int m, cplx a, cplx b, cplx x);

struct TruncationPolicy {
    int y_max = 40;
    int m_max = 400;
    int ell_max = 0;  // 0: every l in 1..k-1
    double tail_tol = 1e-10;
};

struct ClassTQ {
    double T = 0, Q = 0;
    double logT = 0, logQ = 0;
};

ClassTQ class_tq(int ell, int i, int j, double p);
ClassTQ class_tq(double r, double c, double d, double p, int k);

struct WValue {
    cplx value;
    double tail_bound = 0;
    int terms = 0;
    bool truncated = false;
};

// sum_{m=2}^{m_max} (T/Q)^{m-1} Poch(s+2, m-2)/m! L_m(T/Q, T/Q^2, s+m)
cplx eval_W_partial(cplx s, double T, double Q, int m_max);
WValue eval_W(cplx s, double T, double Q, const TruncationPolicy& policy);
WValue eval_W(cplx s, double r, double c, double d, double p, int k, const TruncationPolicy& policy);

struct VarianceReport {
    std::string method = "asymptotic";
    RegimeClass regime = RegimeClass::small;
    double alpha_eff = 0;
    double value = 0;
    double printed_value = 0;
    double C1 = 0, C1_printed = 0, C1_imag = 0, C2 = 0;
    double exponent = 0;    // h(rho) or h(-2)
    double log_factor = 1;  // sqrt(ln n) in the saddle regime
    double c1_term = 0, c2_term = 0;
    std::optional<double> error_exponent;
    int y_used = 0, m_used = 0, ell_used = 0;
    double tail = 0;
    std::array<int, 3> class_counts{0, 0, 0};
    int boundary_classes = 0;
    bool small_regime_flag = false;
    TruncationPolicy truncation;
    std::string flags;
};

VarianceReport variance_asymptotic(std::uint64_t n, const ModelParams& m, const TruncationPolicy& policy = {});

struct GDirect {
    double value = 0;
    bool underflow = false;
};

// g(n, l/k, i/l, j/l) by grouping w over its number of a's.
GDirect g_direct(std::uint64_t n, int ell, int i, int j, const ModelParams& m);
GDirect g_direct(std::uint64_t n, double r, double c, double d, const ModelParams& m);
// One atom g_{w,sigma,theta} with X = n pro(w), Q = Q_{sigma,theta}, T = T_{sigma,theta}.
double g_atom(double X, double Q, double T);

struct GAsymptotic {
    double value = 0;
    cplx complex_value;
    RegimeClass regime = RegimeClass::small;
    double A = 0;
    bool boundary = false;
    int y_used = 0;
    int m_used = 0;
};

GAsymptotic g_asymptotic(std::uint64_t n, int ell, int i, int j, const ModelParams& m, const TruncationPolicy& policy = {});
GAsymptotic g_asymptotic(std::uint64_t n, double r, double c, double d, const ModelParams& m,
                         const TruncationPolicy& policy = {});

struct VTerms {
    double V1 = 0, V2 = 0, V3tilde = 0;
    bool V2_is_bound = false;
    std::optional<double> V3;  // ordered-pair sum, k <= 8
    // V2 enters only when it was computed exactly
    double assembled() const { return V1 - (V2_is_bound ? 0.0 : V2) + 2 * V3tilde; }
};

inline constexpr int kV2ExactCap = 8;

double v1_term(std::uint64_t n, const ModelParams& m);
VTerms v_terms(std::uint64_t n, const ModelParams& m, bool with_exact_v3 = false);

}  // namespace profilium
