#include <doctest.h>

#include <cmath>

#include "brute.hpp"
#include "error.hpp"
#include "genfun.hpp"
#include "oracle.hpp"

using namespace profilium;

TEST_CASE("single-word series give the exact occurrence distribution")
{
    const auto m = ModelParams::from_p(0.7);
    for (int k = 1; k <= 3; ++k)
        for (const auto& us : brute::all_words(k)) {
            const auto g = build_single_gfs<mpq_class>(Word::parse(us), m);
            const auto c0 = series_coeffs(g.G0, 9);
            const auto c1 = series_coeffs(g.G1, 9);
            for (int N = 0; N <= 9; ++N) {
                const auto ref = brute::single_counts(us, N, m.p_exact);
                CHECK(c0[static_cast<std::size_t>(N)] == ref[0]);
                CHECK(c1[static_cast<std::size_t>(N)] == ref[1]);
            }
        }
}

TEST_CASE("joint series give the exact joint occurrence distribution")
{
    const auto m = ModelParams::from_p(0.6);
    for (int k = 1; k <= 3; ++k)
        for (const auto& us : brute::all_words(k))
            for (const auto& vs : brute::all_words(k)) {
                if (us == vs) continue;
                const auto g = build_joint_gfs<mpq_class>(Word::parse(us), Word::parse(vs), m);
                for (int N = 0; N <= 8; ++N) {
                    const auto ref = brute::joint_counts(us, vs, N, m.p_exact);
                    CHECK(series_coeff(g.G00, N) == ref[0][0]);
                    CHECK(series_coeff(g.G10, N) == ref[1][0]);
                    CHECK(series_coeff(g.G01, N) == ref[0][1]);
                    CHECK(series_coeff(g.G11, N) == ref[1][1]);
                }
            }
}

TEST_CASE("float series track the rational series")
{
    const auto m = ModelParams::from_p(0.7);
    const Word u = Word::parse("aba"), v = Word::parse("bab");
    const auto ge = build_joint_gfs<mpq_class>(u, v, m);
    const auto gd = build_joint_gfs<double>(u, v, m);
    const auto e = series_coeffs(ge.G11, 60);
    const auto d = series_coeffs(gd.G11, 60);
    for (std::size_t N = 0; N < e.size(); ++N) CHECK(d[N] == doctest::Approx(e[N].get_d()).epsilon(1e-12));
    CHECK_THROWS_AS(build_joint_gfs<double>(u, u, m), Error);
}

TEST_CASE("polynomial roots and winding numbers")
{
    const Polynomial<double> p(std::vector<double>{6, -5, 1});  // (z-2)(z-3)
    auto roots = polynomial_roots(p);
    REQUIRE(roots.size() == 2);
    double lo = std::min(std::abs(roots[0]), std::abs(roots[1]));
    double hi = std::max(std::abs(roots[0]), std::abs(roots[1]));
    CHECK(lo == doctest::Approx(2.0));
    CHECK(hi == doctest::Approx(3.0));
    const Polynomial<double> q(std::vector<double>{1, -2.5, 1});  // (z-0.5)(z-2)
    CHECK(winding_number(q, 1.0) == 1);
    CHECK(winding_number(q, 3.0) == 2);
    CHECK(winding_number(q, 0.25) == 0);
    CHECK(certificate_radius(q) == doctest::Approx(1.25));
}

TEST_CASE("dominant root of D_aa solves 0.21 z^2 + 0.3 z - 1 = 0")
{
    const auto m = ModelParams::from_p(0.7);
    const auto g = build_single_gfs<double>(Word::parse("aa"), m);
    const auto rc = dominant_root(g.D, certificate_radius(g.D));
    const double expect = (-0.3 + std::sqrt(0.09 + 0.84)) / 0.42;
    CHECK(rc.root == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rc.residual <= 1e-12);
}

TEST_CASE("single-word aggregate reproduces P(U <= 1) at moderate n")
{
    const auto m = ModelParams::from_p(0.7);
    for (const char* us : {"ab", "aa", "aab", "abab"}) {
        const Word u = Word::parse(us);
        const auto rc = residue_constants_single(u, m, 10.0);
        const auto agg = single_aggregate(rc, u.len);
        const auto g = build_single_gfs<double>(u, m);
        const int n = 120;
        const int N = n + u.len - 1;
        const double exact = series_coeff(g.G0, N) + series_coeff(g.G1, N);
        const double est = (agg.C0 + n * agg.C1) / std::pow(rc.R, n);
        CHECK(est == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("residue constants for u = ab")
{
    const auto m = ModelParams::from_p(0.7);
    const auto rc = residue_constants_single(Word::parse("ab"), m, 2.0);
    // D = 1 - z + 0.21 z^2 has roots 1/0.7 and 1/0.3
    CHECK(rc.R == doctest::Approx(1 / 0.7).epsilon(1e-12));
    CHECK(rc.c00 == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(rc.c11 == doctest::Approx(1.3125).epsilon(1e-12));
    CHECK(rc.cert.ok);
    CHECK(rc.cert.winding_count == 1);
}

TEST_CASE("variance from dominant roots converges geometrically at k = 2")
{
    const auto m = ModelParams::from_p(0.7);
    const double e10 = exact_variance_enumeration<double>(10, 2, m);
    const double e18 = exact_variance_enumeration<double>(18, 2, m);
    const double r10 = std::fabs(variance_via_roots(10, 2, m).value - e10) / e10;
    const double r18 = std::fabs(variance_via_roots(18, 2, m).value - e18) / e18;
    CHECK(r18 < 0.01);
    CHECK(r18 < r10);
    CHECK_THROWS_AS(variance_via_roots(10, 1, m), Error);
    CHECK_THROWS_AS(variance_via_roots(10, kPairEnumCap + 1, m), Error);
}
