#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "profilium/profilium.h"

namespace {

prof_model* make(double p)
{
    prof_model* m = nullptr;
    REQUIRE(prof_model_create(p, &m) == PROF_OK);
    return m;
}

}  // namespace

TEST_CASE("model lifecycle and validation")
{
    prof_model* m = nullptr;
    CHECK(prof_model_create(0.4, &m) == PROF_ERR_DOMAIN);
    CHECK(m == nullptr);
    CHECK(std::strlen(prof_last_error()) > 0);
    m = make(0.7);
    prof_exact_result r{};
    CHECK(prof_exact_variance(m, PROF_EXACT_ENUMERATION, 0, &r, nullptr, 0) == PROF_ERR_INVALID);
    REQUIRE(prof_model_set_alpha(m, 1.4, 4096) == PROF_OK);
    double p = 0, alpha = 0;
    uint64_t n = 0;
    int k = 0;
    REQUIRE(prof_model_get(m, &p, &alpha, &n, &k) == PROF_OK);
    CHECK(p == 0.7);
    CHECK(n == 4096);
    CHECK(k == 12);
    CHECK(std::strlen(prof_last_error()) == 0);
    CHECK(prof_model_set_nk(m, 10, 0) == PROF_ERR_DOMAIN);
    CHECK(prof_model_set_nk(nullptr, 10, 3) == PROF_ERR_INVALID);
    prof_model_destroy(m);
    prof_model_destroy(nullptr);
}

TEST_CASE("thresholds and regimes")
{
    double a1 = 0, a2 = 0;
    REQUIRE(prof_thresholds(0.7, &a1, &a2) == PROF_OK);
    CHECK(a1 == doctest::Approx(0.8305835450825374));
    CHECK(a2 == doctest::Approx(2.0485414258441348));
    prof_model* m = make(0.7);
    REQUIRE(prof_model_set_alpha(m, 2.6, 65536) == PROF_OK);
    prof_regime_info info{};
    REQUIRE(prof_regimes(m, 0, &info) == PROF_OK);
    CHECK(info.regime == PROF_REGIME_POLAR);
    CHECK(prof_regimes(m, a1, &info) == PROF_ERR_BOUNDARY);
    prof_model_destroy(m);
}

TEST_CASE("word helpers")
{
    prof_model* m = make(0.7);
    double pr = 0;
    REQUIRE(prof_word_probability(m, "aab", &pr) == PROF_OK);
    CHECK(pr == doctest::Approx(0.147));
    CHECK(prof_word_probability(m, "axb", &pr) != PROF_OK);
    double c[8];
    size_t len = 0;
    REQUIRE(prof_correlation_poly(m, "aa", "aa", c, 8, &len) == PROF_OK);
    CHECK(len == 2);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == doctest::Approx(0.7));
    CHECK(prof_correlation_poly(m, "aaa", "aaa", c, 1, &len) == PROF_ERR_INVALID);
    CHECK(len == 3);
    prof_pair_stats st{};
    REQUIRE(prof_pair_stats_compute(m, "abab", "abba", &st) == PROF_OK);
    CHECK(st.has_overlap == 1);
    CHECK(st.ell == 2);
    double s1 = 0, s2 = 0;
    REQUIRE(prof_correlation_decay_sums(m, 6, &s1, &s2) == PROF_OK);
    CHECK(s1 == doctest::Approx(0.28275343519999985));
    prof_model_destroy(m);
}

TEST_CASE("exact variance through the C interface")
{
    prof_model* m = make(0.7);
    REQUIRE(prof_model_set_nk(m, 2, 1) == PROF_OK);
    prof_exact_result r{};
    char buf[64];
    REQUIRE(prof_exact_variance(m, PROF_EXACT_ENUMERATION, 1, &r, buf, sizeof buf) == PROF_OK);
    CHECK(std::string(buf) == "609/2500");
    CHECK(r.value == doctest::Approx(0.2436));
    REQUIRE(prof_exact_variance(m, PROF_EXACT_DP, 1, &r, buf, sizeof buf) == PROF_OK);
    CHECK(std::string(buf) == "609/2500");
    CHECK(prof_exact_variance(m, PROF_EXACT_ENUMERATION, 1, &r, buf, 3) == PROF_ERR_INVALID);
    CHECK(prof_exact_variance(m, PROF_EXACT_ROOTS, 0, &r, nullptr, 0) == PROF_ERR_DOMAIN);
    REQUIRE(prof_model_set_nk(m, 18, 2) == PROF_OK);
    prof_exact_result e{}, rt{};
    REQUIRE(prof_exact_variance(m, PROF_EXACT_ENUMERATION, 0, &e, nullptr, 0) == PROF_OK);
    REQUIRE(prof_exact_variance(m, PROF_EXACT_ROOTS, 0, &rt, nullptr, 0) == PROF_OK);
    CHECK(std::fabs(rt.value - e.value) / e.value < 0.01);
    REQUIRE(prof_model_set_nk(m, 4096, 12) == PROF_OK);
    CHECK(prof_exact_variance(m, PROF_EXACT_ENUMERATION, 0, &e, nullptr, 0) == PROF_ERR_RESOURCE);
    prof_model_destroy(m);
}

TEST_CASE("simulation, asymptotics and variance terms")
{
    prof_model* m = make(0.7);
    REQUIRE(prof_model_set_alpha(m, 1.4, 1024) == PROF_OK);
    prof_sample a{}, b{};
    REQUIRE(prof_simulate(m, 200, 9, 1, &a) == PROF_OK);
    REQUIRE(prof_simulate(m, 200, 9, 2, &b) == PROF_OK);
    CHECK(a.variance == b.variance);
    CHECK(a.replicates == 200);
    CHECK(prof_simulate(m, 1, 9, 1, &a) == PROF_ERR_DOMAIN);
    prof_truncation t;
    prof_truncation_default(&t);
    CHECK(t.y_max == 40);
    prof_variance_report v{};
    REQUIRE(prof_asymptotic(m, &t, &v) == PROF_OK);
    CHECK(v.regime == PROF_REGIME_SADDLE);
    CHECK(std::isfinite(v.value));
    prof_vterms vt{};
    REQUIRE(prof_vterms_compute(m, 0, &vt) == PROF_OK);
    CHECK(vt.v2_is_bound == 1);
    CHECK(vt.assembled == doctest::Approx(vt.v1 + 2 * vt.v3tilde));
    prof_model_destroy(m);
}

TEST_CASE("landscape handle")
{
    prof_model* m = make(0.7);
    prof_landscape_options o;
    prof_landscape_options_default(&o);
    o.cd_points = 21;
    o.r_points = 11;
    prof_landscape* l = nullptr;
    REQUIRE(prof_landscape_compute(m, 1.4, &o, &l) == PROF_OK);
    prof_landscape_summary s{};
    REQUIRE(prof_landscape_get_summary(l, &s) == PROF_OK);
    CHECK(s.slices == 3);
    CHECK(s.r_points == 11);
    CHECK(s.F0 == doctest::Approx(s.h_rho).epsilon(1e-6));
    prof_landscape_slice sl{};
    CHECK(prof_landscape_get_slice(l, 0, &sl) == PROF_OK);
    CHECK(sl.r == doctest::Approx(0.1));
    CHECK(prof_landscape_get_slice(l, 3, &sl) == PROF_ERR_INVALID);
    double r = 0, F = 0;
    CHECK(prof_landscape_get_F(l, 0, &r, &F) == PROF_OK);
    prof_landscape_destroy(l);
    CHECK(prof_landscape_compute(m, 0.5, &o, &l) != PROF_OK);
    prof_model_destroy(m);
}
