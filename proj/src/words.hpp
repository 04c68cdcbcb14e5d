#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "model.hpp"
#include "polynomial.hpp"

namespace profilium {

// Binary word packed into 64 bits. The first letter sits at bit len-1; bit value 1 means 'b'.
struct Word {
    std::uint64_t bits = 0;
    int len = 0;

    static Word parse(std::string_view s);
    static Word from_bits(std::uint64_t bits, int len);
    std::string str() const;
    int count_a() const;
    int count_b() const { return len - count_a(); }
    Word prefix(int l) const;
    Word suffix(int l) const;
    Word concat(const Word& o) const;
    friend bool operator==(const Word& a, const Word& b) { return a.len == b.len && a.bits == b.bits; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
};

template <class T>
T pro_counts(int a_count, int b_count, const T& p, const T& q)
{
    T r(1);
    for (int i = 0; i < a_count; ++i) r *= p;
    for (int i = 0; i < b_count; ++i) r *= q;
    return r;
}

template <class T>
T pro(const Word& u, const ModelParams& m)
{
    return pro_counts<T>(u.count_a(), u.count_b(), m.pv<T>(), m.qv<T>());
}

double pro(const Word& u, const ModelParams& m);

// Probability-weighted correlation polynomial: for every l with suffix_l(u) = prefix_l(v),
// add pro(v[l..]) at z^{|v|-l}.
template <class T>
Polynomial<T> correlation_poly(const Word& u, const Word& v, const ModelParams& m)
{
    const int lmax = std::min(u.len, v.len);
    std::vector<T> c(static_cast<std::size_t>(v.len), T(0));
    for (int l = 1; l <= lmax; ++l)
        if (u.suffix(l) == v.prefix(l))
            c[v.len - l] += pro<T>(v.suffix(v.len - l), m);
    return Polynomial<T>(std::move(c));
}

struct OverlapDecomposition {
    Word sigma;
    Word w;
    Word theta;
    int ell = 0;
    int i = 0;
    int j = 0;
    double r = 0, c = 0, d = 0;
};

std::optional<OverlapDecomposition> maximal_overlap(const Word& u, const Word& v);

struct PairStats {
    double P = 0;
    double Theta = 0;
    double K = 0;
    std::optional<double> Q;
    std::optional<double> T;
};

PairStats pair_stats(const Word& u, const Word& v, const ModelParams& m);

// First sum: sum_u pro(u)(C_uu(1)-1). Second: sum_{u != v} pro(u) C_uv(1) C_vu(1).
struct DecaySums {
    double self_overlap = 0;
    double cross_overlap = 0;
};

inline constexpr int kDecayCap = 32;
inline constexpr int kSingleEnumCap = 12;
inline constexpr int kPairEnumCap = 8;

// Exact evaluation by summing over letter-identification classes; k <= kDecayCap.
DecaySums correlation_decay_sums(int k, const ModelParams& m);
// Literal enumeration: the first sum over A^k (k <= 12), the second over A^k x A^k (k <= 8).
double self_overlap_sum_enumerated(int k, const ModelParams& m);
double cross_overlap_sum_enumerated(int k, const ModelParams& m);

}  // namespace profilium
