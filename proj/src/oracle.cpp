#include "oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>

namespace profilium {

ProfileCounter::ProfileCounter(int k)
    : k_(k), mask_(k >= 64 ? ~0ULL : ((1ULL << k) - 1)), direct_(k <= kDirectCountCap)
{
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (k > 64)
        fail(Errc::resource, "k above 64 is not supported");
    if (direct_)
        counts_.assign(std::size_t{1} << k, 0);
}

void ProfileCounter::reset(std::size_t n_windows)
{
    if (direct_) {
        for (auto c : touched_)
            counts_[c] = 0;
        touched_.clear();
        return;
    }
    std::size_t cap = 16;
    while (cap < 2 * n_windows)
        cap <<= 1;
    if (keys_.size() != cap) {
        keys_.assign(cap, 0);
        state_.assign(cap, 0);
        shift_ = 64 - std::countr_zero(cap);
    } else {
        std::fill(state_.begin(), state_.end(), 0);
    }
}

bool ProfileCounter::add_hashed(std::uint64_t code)
{
    const std::size_t capmask = keys_.size() - 1;
    std::size_t i = static_cast<std::size_t>((code * 0x9E3779B97F4A7C15ULL) >> shift_);
    for (;; i = (i + 1) & capmask) {
        if (state_[i] == 0) {
            keys_[i] = code;
            state_[i] = 1;
            return false;
        }
        if (keys_[i] == code) {
            if (state_[i] == 1) {
                state_[i] = 2;
                return true;
            }
            return false;
        }
    }
}

std::uint64_t count_profile(const std::vector<std::uint8_t>& s, std::uint64_t n, int k)
{
    if (k > 64)
        fail(Errc::resource, "k above 64 is not supported");
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (s.size() != n + static_cast<std::uint64_t>(k) - 1)
        fail(Errc::domain, "string length must equal n + k - 1");
    if (n == 0)
        return 0;
    ProfileCounter pc(k);
    pc.reset(n);
    std::uint64_t code = 0, x = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        code = ((code << 1) | (s[i] & 1u)) & pc.mask();
        if (i + 1 >= static_cast<std::size_t>(k) && pc.add(code))
            ++x;
    }
    return x;
}

std::uint64_t count_profile(std::string_view s, std::uint64_t n, int k)
{
    std::vector<std::uint8_t> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != 'a' && s[i] != 'b')
            fail(Errc::domain, "letter outside {a,b}");
        v[i] = s[i] == 'b';
    }
    return count_profile(v, n, k);
}

ProfileMoments enumerate_profile_moments(std::uint64_t n, int k)
{
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    const std::uint64_t L = n + static_cast<std::uint64_t>(k) - 1;
    if (L > static_cast<std::uint64_t>(kEnumLengthCap))
        fail(Errc::resource, "enumeration capped at n + k - 1 <= " + std::to_string(kEnumLengthCap));
    ProfileMoments pm;
    pm.length = static_cast<int>(L);
    pm.strings.assign(L + 1, 0);
    pm.sum_x.assign(L + 1, 0);
    pm.sum_x2.assign(L + 1, 0);
    ProfileCounter pc(k);
    const std::uint64_t total = 1ULL << L;
    for (std::uint64_t s = 0; s < total; ++s) {
        std::uint64_t x = 0;
        if (n > 0) {
            pc.reset(n);
            for (int w = 0; w < static_cast<int>(n); ++w) {
                // window w covers letters w..w+k-1; letter i is bit L-1-i
                const std::uint64_t code = (s >> (L - k - w)) & pc.mask();
                if (pc.add(code))
                    ++x;
            }
        }
        const int a = static_cast<int>(L) - std::popcount(s);
        pm.strings[a] += 1;
        pm.sum_x[a] += x;
        pm.sum_x2[a] += x * x;
    }
    return pm;
}

namespace {

int occurrences(std::uint64_t s, int N, const Word& u)
{
    int c = 0;
    const std::uint64_t mask = u.len >= 64 ? ~0ULL : ((1ULL << u.len) - 1);
    for (int w = 0; w + u.len <= N; ++w)
        if (((s >> (N - u.len - w)) & mask) == u.bits)
            ++c;
    return c;
}

}  // namespace

template <class T>
ExactDistribution<T> occurrence_enumeration(const Word& u, const std::optional<Word>& v, int N, const ModelParams& m)
{
    if (N < 0)
        fail(Errc::domain, "length must be nonnegative");
    if (N > kEnumLengthCap)
        fail(Errc::resource, "enumeration capped at length " + std::to_string(kEnumLengthCap));
    if (v && (v->len != u.len || *v == u))
        fail(Errc::domain, "second word must be distinct and of equal length");
    // counts[class_u][class_v][#a]
    std::vector<std::uint64_t> cnt(9 * static_cast<std::size_t>(N + 1), 0);
    for (std::uint64_t s = 0; s < (1ULL << N); ++s) {
        const int cu = std::min(occurrences(s, N, u), 2);
        const int cv = v ? std::min(occurrences(s, N, *v), 2) : 0;
        const int a = N - std::popcount(s);
        ++cnt[(cu * 3 + cv) * (N + 1) + a];
    }
    ExactDistribution<T> d;
    d.n = N;
    d.u = u;
    d.v = v;
    const T p = m.pv<T>(), q = m.qv<T>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T s(0);
            for (int a = 0; a <= N; ++a) {
                const auto c = cnt[(i * 3 + j) * (N + 1) + a];
                if (c)
                    s += T(static_cast<unsigned long>(c)) * pro_counts<T>(a, N - a, p, q);
            }
            d.table[i][j] = s;
        }
    return d;
}

template <class T>
ExactDistribution<T> joint_occurrence_dp(const Word& u, const std::optional<Word>& v, int N, const ModelParams& m)
{
    if (N < 0)
        fail(Errc::domain, "length must be nonnegative");
    if (v && (v->len != u.len || *v == u))
        fail(Errc::domain, "second word must be distinct and of equal length");
    // States are the distinct prefixes of the patterns, the empty word first.
    std::vector<Word> states{Word{0, 0}};
    std::map<std::pair<int, std::uint64_t>, int> index{{{0, 0}, 0}};
    auto add_prefixes = [&](const Word& w) {
        for (int l = 1; l <= w.len; ++l) {
            const Word pre = w.prefix(l);
            if (index.emplace(std::make_pair(pre.len, pre.bits), static_cast<int>(states.size())).second)
                states.push_back(pre);
        }
    };
    add_prefixes(u);
    if (v)
        add_prefixes(*v);
    const int S = static_cast<int>(states.size());
    // goto(x, c) = longest suffix of xc that is a state; built through failure links in BFS order
    std::vector<std::array<int, 2>> go(S, {0, 0});
    std::vector<int> failure(S, 0);
    std::vector<int> order(S);
    for (int i = 0; i < S; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return states[a].len < states[b].len; });
    auto child = [&](int s, int c) -> int {
        const Word& x = states[s];
        if (x.len >= u.len)
            return -1;
        auto it = index.find({x.len + 1, (x.bits << 1) | static_cast<std::uint64_t>(c)});
        return it == index.end() ? -1 : it->second;
    };
    for (int s : order) {
        for (int c = 0; c < 2; ++c) {
            const int ch = child(s, c);
            if (ch >= 0) {
                failure[ch] = s == 0 ? 0 : go[failure[s]][c];
                go[s][c] = ch;
            } else {
                go[s][c] = s == 0 ? 0 : go[failure[s]][c];
            }
        }
    }
    const int vstate = v ? index.at({v->len, v->bits}) : -1;
    const int ustate = index.at({u.len, u.bits});
    const T p = m.pv<T>(), q = m.qv<T>();
    auto at = [](int s, int i, int j) { return (s * 3 + i) * 3 + j; };
    std::vector<T> cur(static_cast<std::size_t>(S) * 9, T(0)), nxt(cur.size(), T(0));
    cur[at(0, 0, 0)] = T(1);
    for (int step = 0; step < N; ++step) {
        std::fill(nxt.begin(), nxt.end(), T(0));
        for (int s = 0; s < S; ++s)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const T& w = cur[at(s, i, j)];
                    if (w == T(0))
                        continue;
                    for (int c = 0; c < 2; ++c) {
                        const int t = go[s][c];
                        const int ni = std::min(i + (t == ustate ? 1 : 0), 2);
                        const int nj = std::min(j + (t == vstate ? 1 : 0), 2);
                        nxt[at(t, ni, nj)] += w * (c == 0 ? p : q);
                    }
                }
        std::swap(cur, nxt);
    }
    ExactDistribution<T> d;
    d.n = N;
    d.u = u;
    d.v = v;
    for (int s = 0; s < S; ++s)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                d.table[i][j] += cur[at(s, i, j)];
    return d;
}

template <class T>
T variance_from_dp(std::uint64_t n, int k, const ModelParams& m)
{
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (k > kPairEnumCap)
        fail(Errc::resource, "pair sums capped at k <= " + std::to_string(kPairEnumCap));
    const int N = static_cast<int>(n) + k - 1;
    const std::size_t W = std::size_t{1} << k;
    std::vector<Word> words(W);
    std::vector<std::array<T, 2>> single(W);
    T total(0);
    for (std::size_t b = 0; b < W; ++b) {
        words[b] = Word::from_bits(b, k);
        const auto d = joint_occurrence_dp<T>(words[b], std::nullopt, N, m);
        single[b] = {d.marginal_u(0), d.marginal_u(1)};
        const T le1 = single[b][0] + single[b][1];
        total += (T(1) - le1) - (T(1) - le1) * (T(1) - le1);
    }
    for (std::size_t a = 0; a < W; ++a)
        for (std::size_t b = 0; b < W; ++b) {
            if (a == b)
                continue;
            const auto d = joint_occurrence_dp<T>(words[a], words[b], N, m);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    total += d.table[i][j] - single[a][i] * single[b][j];
        }
    return total;
}

template ExactDistribution<double> occurrence_enumeration<double>(const Word&, const std::optional<Word>&, int, const ModelParams&);
template ExactDistribution<mpq_class> occurrence_enumeration<mpq_class>(const Word&, const std::optional<Word>&, int, const ModelParams&);
template ExactDistribution<double> joint_occurrence_dp<double>(const Word&, const std::optional<Word>&, int, const ModelParams&);
template ExactDistribution<mpq_class> joint_occurrence_dp<mpq_class>(const Word&, const std::optional<Word>&, int, const ModelParams&);
template double variance_from_dp<double>(std::uint64_t, int, const ModelParams&);
template mpq_class variance_from_dp<mpq_class>(std::uint64_t, int, const ModelParams&);

unsigned resolve_threads(unsigned requested)
{
    unsigned t = requested;
    if (t == 0) {
        if (const char* env = std::getenv("PROFILIUM_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0)
                t = static_cast<unsigned>(v);
        }
    }
    if (t == 0)
        t = std::max(1u, std::thread::hardware_concurrency());
    return t;
}

namespace {

inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// splitmix64: output i of a stream is mix64(state + i * gamma)
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() { return mix64(state += 0x9E3779B97F4A7C15ULL); }
};

std::uint64_t one_replicate(ProfileCounter& pc, std::uint64_t n, int k, std::uint32_t threshold, std::uint64_t seed)
{
    SplitMix64 rng{seed};
    pc.reset(n);
    const std::uint64_t len = n + static_cast<std::uint64_t>(k) - 1;
    const std::uint64_t mask = pc.mask();
    std::uint64_t code = 0, x = 0, i = 0;
    auto push = [&](std::uint32_t r) {
        code = ((code << 1) | (r >= threshold ? 1u : 0u)) & mask;
        if (++i >= static_cast<std::uint64_t>(k) && pc.add(code))
            ++x;
    };
    while (i + 2 <= len) {
        const std::uint64_t r = rng.next();
        push(static_cast<std::uint32_t>(r));
        push(static_cast<std::uint32_t>(r >> 32));
    }
    if (i < len)
        push(static_cast<std::uint32_t>(rng.next()));
    return x;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t r)
{
    return mix64(mix64(seed) ^ mix64(r + 0x632BE59BD9B4E019ULL));
}

ProfileSample summarize_samples(const std::vector<std::uint64_t>& xs, int k)
{
    ProfileSample out;
    const std::size_t R = xs.size();
    out.replicates = R;
    if (R < 2)
        fail(Errc::domain, "at least two replicates are required");
    long double sum = 0;
    std::uint64_t full = 0;
    const std::uint64_t level = k < 64 ? (1ULL << k) : ~0ULL;
    for (auto x : xs) {
        sum += x;
        if (x == level)
            ++full;
    }
    const long double mean = sum / R;
    long double m2 = 0, m4 = 0;
    for (auto x : xs) {
        const long double d = static_cast<long double>(x) - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const long double s2 = m2 / (R - 1);
    const long double mu4 = m4 / R;
    // Var(s^2) ~ (mu4 - (R-3)/(R-1) sigma^4) / R
    const long double vv = (mu4 - (static_cast<long double>(R) - 3) / (R - 1) * s2 * s2) / R;
    out.mean = static_cast<double>(mean);
    out.variance = static_cast<double>(s2);
    out.stderr_variance = static_cast<double>(std::sqrt(std::max<long double>(vv, 0)));
    out.full_level_fraction = static_cast<double>(full) / R;
    return out;
}

ProfileSample simulate_profile(const SimulationConfig& cfg)
{
    if (cfg.replicates < 2)
        fail(Errc::domain, "at least two replicates are required");
    if (cfg.k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (cfg.k > 64)
        fail(Errc::resource, "k above 64 is not supported");
    const double scaled = std::ldexp(cfg.params.p, 32);
    const std::uint32_t threshold = scaled >= 4294967295.0 ? 0xFFFFFFFFu : static_cast<std::uint32_t>(std::llround(scaled));
    std::vector<std::uint64_t> xs(cfg.replicates, 0);
    const unsigned T = std::min<std::uint64_t>(resolve_threads(cfg.threads), cfg.replicates);
    auto work = [&](unsigned t) {
        ProfileCounter pc(cfg.k);
        for (std::uint64_t r = t; r < cfg.replicates; r += T)
            xs[r] = cfg.n == 0 ? 0 : one_replicate(pc, cfg.n, cfg.k, threshold, substream_seed(cfg.seed, r));
    };
    if (T <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < T; ++t)
            pool.emplace_back(work, t);
        for (auto& th : pool)
            th.join();
    }
    return summarize_samples(xs, cfg.k);
}

}  // namespace profilium
