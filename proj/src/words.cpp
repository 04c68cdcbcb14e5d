#include "words.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "error.hpp"

namespace profilium {

namespace {

std::uint64_t low_mask(int l) { return l >= 64 ? ~0ULL : ((1ULL << l) - 1); }

void require_nonempty(const Word& u)
{
    if (u.len < 1)
        fail(Errc::domain, "empty word");
}

}  // namespace

Word Word::parse(std::string_view s)
{
    if (s.empty())
        fail(Errc::domain, "empty word");
    if (s.size() > 64)
        fail(Errc::resource, "words longer than 64 letters are not supported");
    Word w;
    w.len = static_cast<int>(s.size());
    for (char ch : s) {
        if (ch != 'a' && ch != 'b')
            fail(Errc::domain, std::string("letter outside {a,b}: ") + ch);
        w.bits = (w.bits << 1) | (ch == 'b' ? 1u : 0u);
    }
    return w;
}

Word Word::from_bits(std::uint64_t bits, int len) { return Word{bits & low_mask(len), len}; }

std::string Word::str() const
{
    std::string s(static_cast<std::size_t>(len), 'a');
    for (int i = 0; i < len; ++i)
        if ((bits >> (len - 1 - i)) & 1u)
            s[i] = 'b';
    return s;
}

int Word::count_a() const { return len - std::popcount(bits); }

Word Word::prefix(int l) const { return Word{l == 0 ? 0 : bits >> (len - l), l}; }

Word Word::suffix(int l) const { return Word{bits & low_mask(l), l}; }

Word Word::concat(const Word& o) const
{
    if (len + o.len > 64)
        fail(Errc::resource, "concatenation exceeds 64 letters");
    return Word{o.len == 64 ? o.bits : (bits << o.len) | o.bits, len + o.len};
}

double pro(const Word& u, const ModelParams& m)
{
    require_nonempty(u);
    return pro<double>(u, m);
}

std::optional<OverlapDecomposition> maximal_overlap(const Word& u, const Word& v)
{
    require_nonempty(u);
    if (u.len != v.len)
        fail(Errc::domain, "maximal_overlap needs words of equal length");
    if (u == v)
        fail(Errc::domain, "maximal_overlap needs distinct words");
    const int k = u.len;
    for (int wl = k - 1; wl >= 1; --wl) {
        if (u.suffix(wl) == v.prefix(wl)) {
            OverlapDecomposition o;
            o.ell = k - wl;
            o.sigma = u.prefix(o.ell);
            o.w = u.suffix(wl);
            o.theta = v.suffix(o.ell);
            o.i = o.sigma.count_a();
            o.j = o.theta.count_a();
            o.r = static_cast<double>(o.ell) / k;
            o.c = static_cast<double>(o.i) / o.ell;
            o.d = static_cast<double>(o.j) / o.ell;
            return o;
        }
    }
    return std::nullopt;
}

PairStats pair_stats(const Word& u, const Word& v, const ModelParams& m)
{
    require_nonempty(u);
    if (u.len != v.len)
        fail(Errc::domain, "pair_stats needs words of equal length");
    if (u == v)
        fail(Errc::domain, "pair_stats needs distinct words");
    const double pu = pro(u, m), pv = pro(v, m);
    PairStats s;
    s.P = pu + pv;
    s.Theta = pu * correlation_poly<double>(u, v, m)(1.0) + pv * correlation_poly<double>(v, u, m)(1.0);
    s.K = (2.0 * u.len - 1.0) * pu * pv;
    if (auto o = maximal_overlap(u, v)) {
        const double ps = pro(o->sigma, m), pt = pro(o->theta, m);
        s.Q = ps + pt;
        s.T = ps * pt;
    }
    return s;
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Each equivalence class of letter positions is one free letter; a class whose positions
// carry total weight e contributes p^e + q^e.
double class_weight(Dsu& dsu, const std::vector<int>& mult, const ModelParams& m)
{
    const int n = static_cast<int>(mult.size());
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        e[dsu.find(i)] += mult[i];
    double r = 1.0;
    for (int i = 0; i < n; ++i)
        if (dsu.find(i) == i)
            r *= std::pow(m.p, e[i]) + std::pow(m.q, e[i]);
    return r;
}

}  // namespace

DecaySums correlation_decay_sums(int k, const ModelParams& m)
{
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (k > kDecayCap)
        fail(Errc::resource, "correlation_decay_sums: k above cap " + std::to_string(kDecayCap));
    DecaySums out;
    // sum_u pro(u) * sum_{l<k, overlap l} pro(u[l..]): positions 0..k-1 of u.
    for (int l = 1; l < k; ++l) {
        Dsu dsu(k);
        for (int i = 0; i < l; ++i)
            dsu.unite(k - l + i, i);
        std::vector<int> mult(static_cast<std::size_t>(k), 1);
        for (int i = l; i < k; ++i)
            mult[i] += 1;
        out.self_overlap += class_weight(dsu, mult, m);
    }
    // sum_{u,v} pro(u) pro(v[l..]) pro(u[m..]) over overlaps l of (u,v) and m of (v,u),
    // then remove the u = v diagonal. u at positions 0..k-1, v at k..2k-1.
    for (int l = 1; l < k; ++l) {
        for (int mm = 1; mm < k; ++mm) {
            std::vector<int> mult(static_cast<std::size_t>(2 * k), 0);
            for (int i = 0; i < k; ++i) mult[i] = 1;
            for (int i = l; i < k; ++i) mult[k + i] += 1;
            for (int i = mm; i < k; ++i) mult[i] += 1;
            Dsu all(2 * k);
            for (int i = 0; i < l; ++i) all.unite(k - l + i, k + i);
            for (int i = 0; i < mm; ++i) all.unite(2 * k - mm + i, i);
            Dsu diag = all;
            for (int i = 0; i < k; ++i) diag.unite(i, k + i);
            out.cross_overlap += class_weight(all, mult, m) - class_weight(diag, mult, m);
        }
    }
    return out;
}

namespace {

std::vector<Word> all_words(int k)
{
    std::vector<Word> w(std::size_t{1} << k);
    for (std::uint64_t b = 0; b < w.size(); ++b)
        w[b] = Word::from_bits(b, k);
    return w;
}

}  // namespace

double self_overlap_sum_enumerated(int k, const ModelParams& m)
{
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (k > kSingleEnumCap)
        fail(Errc::resource, "enumeration over A^k capped at k <= " + std::to_string(kSingleEnumCap));
    double s = 0;
    for (const Word& u : all_words(k))
        s += pro(u, m) * (correlation_poly<double>(u, u, m)(1.0) - 1.0);
    return s;
}

double cross_overlap_sum_enumerated(int k, const ModelParams& m)
{
    if (k < 1)
        fail(Errc::domain, "k must be at least 1");
    if (k > kPairEnumCap)
        fail(Errc::resource, "pair enumeration capped at k <= " + std::to_string(kPairEnumCap));
    const auto words = all_words(k);
    const std::size_t N = words.size();
    std::vector<double> c1(N * N);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
            c1[a * N + b] = correlation_poly<double>(words[a], words[b], m)(1.0);
    double s = 0;
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
            if (a != b)
                s += pro(words[a], m) * c1[a * N + b] * c1[b * N + a];
    return s;
}

}  // namespace profilium
