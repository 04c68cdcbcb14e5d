#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "model.hpp"
#include "words.hpp"

namespace profilium {

// Occurrence classes 0, 1, >=2 for u (rows) and v (columns); single-word tables use column 0.
template <class T>
struct ExactDistribution {
    std::array<std::array<T, 3>, 3> table{};
    int n = 0;
    Word u;
    std::optional<Word> v;

    T total() const
    {
        T s(0);
        for (const auto& row : table)
            for (const auto& x : row)
                s += x;
        return s;
    }
    T marginal_u(int i) const { return table[i][0] + table[i][1] + table[i][2]; }
    T marginal_v(int j) const { return table[0][j] + table[1][j] + table[2][j]; }
};

// Counts distinct k-grams seen at least twice among the first n windows. Reusable across strings.
class ProfileCounter {
public:
    explicit ProfileCounter(int k);
    void reset(std::size_t n_windows);
    // Feed the next window code; returns true when this code reaches its second occurrence.
    bool add(std::uint64_t code)
    {
        if (direct_) {
            std::uint8_t& c = counts_[code];
            if (c == 0)
                touched_.push_back(code);
            if (c < 2 && ++c == 2)
                return true;
            return false;
        }
        return add_hashed(code);
    }
    int k() const { return k_; }
    std::uint64_t mask() const { return mask_; }

private:
    bool add_hashed(std::uint64_t code);

    int k_;
    std::uint64_t mask_;
    bool direct_;
    std::vector<std::uint8_t> counts_;
    std::vector<std::uint64_t> touched_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint8_t> state_;
    int shift_ = 64;
};

inline constexpr int kDirectCountCap = 24;
inline constexpr int kEnumLengthCap = 22;

// letters: 0 = 'a', 1 = 'b'; length must be n + k - 1.
std::uint64_t count_profile(const std::vector<std::uint8_t>& s, std::uint64_t n, int k);
std::uint64_t count_profile(std::string_view s, std::uint64_t n, int k);

// Integer moment tables of X over all 2^{n+k-1} strings grouped by number of a's.
struct ProfileMoments {
    int length = 0;
    std::vector<std::uint64_t> strings, sum_x, sum_x2;
};

ProfileMoments enumerate_profile_moments(std::uint64_t n, int k);

template <class T>
T variance_from_moments(const ProfileMoments& pm, const ModelParams& m)
{
    const T p = m.pv<T>(), q = m.qv<T>();
    T e1(0), e2(0);
    for (int a = 0; a <= pm.length; ++a) {
        const T w = pro_counts<T>(a, pm.length - a, p, q);
        e1 += w * T(static_cast<unsigned long>(pm.sum_x[a]));
        e2 += w * T(static_cast<unsigned long>(pm.sum_x2[a]));
    }
    return e2 - e1 * e1;
}

template <class T>
T exact_variance_enumeration(std::uint64_t n, int k, const ModelParams& m)
{
    return variance_from_moments<T>(enumerate_profile_moments(n, k), m);
}

// Brute-force class distribution over all strings of length N.
template <class T>
ExactDistribution<T> occurrence_enumeration(const Word& u, const std::optional<Word>& v, int N, const ModelParams& m);

// Automaton over the prefixes of {u} or {u, v}; N probability-weighted letters, counts capped at 2.
template <class T>
ExactDistribution<T> joint_occurrence_dp(const Word& u, const std::optional<Word>& v, int N, const ModelParams& m);

// sum_u Var(I_u) + sum_{u != v} Cov(I_u, I_v) from automaton tables at N = n + k - 1.
template <class T>
T variance_from_dp(std::uint64_t n, int k, const ModelParams& m);

struct SimulationConfig {
    std::uint64_t n = 0;
    int k = 1;
    std::uint64_t replicates = 2;
    std::uint64_t seed = 1;
    ModelParams params;
    unsigned threads = 0;  // 0: PROFILIUM_THREADS or hardware concurrency
};

struct ProfileSample {
    double mean = 0;
    double variance = 0;
    double stderr_variance = 0;
    std::uint64_t replicates = 0;
    double full_level_fraction = 0;
};

unsigned resolve_threads(unsigned requested);
// Substream seed for replicate r.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t r);
ProfileSample simulate_profile(const SimulationConfig& cfg);
ProfileSample summarize_samples(const std::vector<std::uint64_t>& xs, int k);

}  // namespace profilium
