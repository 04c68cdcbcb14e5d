#pragma once
// Reference computations by plain enumeration over strings; independent of the library code.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace brute {

inline std::string bits_to_string(std::uint64_t bits, int len)
{
    std::string s(static_cast<std::size_t>(len), 'a');
    for (int i = 0; i < len; ++i)
        if ((bits >> (len - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = 'b';
    return s;
}

inline std::vector<std::string> all_words(int len)
{
    std::vector<std::string> out;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << len); ++b) out.push_back(bits_to_string(b, len));
    return out;
}

template <class T>
T prob(const std::string& s, const T& p)
{
    T r(1);
    const T q = T(1) - p;
    for (char c : s) r *= (c == 'a' ? p : q);
    return r;
}

inline int occurrences(const std::string& s, const std::string& u)
{
    int c = 0;
    for (std::size_t i = 0; i + u.size() <= s.size(); ++i)
        if (s.compare(i, u.size(), u) == 0) ++c;
    return c;
}

// sum over l with suffix_l(u) = prefix_l(v) of P(v[l..]) z^{|v|-l}
template <class T>
std::vector<T> correlation(const std::string& u, const std::string& v, const T& p)
{
    std::vector<T> c(v.size(), T(0));
    for (std::size_t l = 1; l <= std::min(u.size(), v.size()); ++l)
        if (u.compare(u.size() - l, l, v, 0, l) == 0) c[v.size() - l] += prob(v.substr(l), p);
    return c;
}

// Distinct length-k words occurring at least twice among the first n windows.
inline int profile(const std::string& s, std::uint64_t n, int k)
{
    std::map<std::string, int> cnt;
    for (std::uint64_t i = 0; i < n; ++i) ++cnt[s.substr(i, static_cast<std::size_t>(k))];
    int x = 0;
    for (const auto& [w, c] : cnt)
        if (c >= 2) ++x;
    return x;
}

inline mpq_class profile_variance(std::uint64_t n, int k, const mpq_class& p)
{
    const int N = static_cast<int>(n) + k - 1;
    mpq_class e1 = 0, e2 = 0;
    for (const auto& s : all_words(N)) {
        const mpq_class pr = prob(s, p);
        const int x = profile(s, n, k);
        e1 += pr * x;
        e2 += pr * x * x;
    }
    return e2 - e1 * e1;
}

// P(#u = a) for all strings of length N, a = 0, 1, >= 2 (index 2)
inline std::vector<mpq_class> single_counts(const std::string& u, int N, const mpq_class& p)
{
    std::vector<mpq_class> out(3, mpq_class(0));
    for (const auto& s : all_words(N)) out[static_cast<std::size_t>(std::min(occurrences(s, u), 2))] += prob(s, p);
    return out;
}

inline std::vector<std::vector<mpq_class>> joint_counts(const std::string& u, const std::string& v, int N,
                                                        const mpq_class& p)
{
    std::vector<std::vector<mpq_class>> out(3, std::vector<mpq_class>(3, mpq_class(0)));
    for (const auto& s : all_words(N))
        out[static_cast<std::size_t>(std::min(occurrences(s, u), 2))]
           [static_cast<std::size_t>(std::min(occurrences(s, v), 2))] += prob(s, p);
    return out;
}

// Class atom in closed form: e^{-X(Q-T)}[(1 - e^{-XT})(1 + XQ + X^2 T) - XT(1 + X(Q - T))]
inline long double atom(long double X, long double Q, long double T)
{
    const long double d = Q - T;
    return std::exp(-X * d) * ((1 - std::exp(-X * T)) * (1 + X * Q + X * X * T) - X * T * (1 + X * d));
}

}  // namespace brute
