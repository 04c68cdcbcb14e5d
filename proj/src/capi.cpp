#include "profilium/profilium.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "asymptotics.hpp"
#include "error.hpp"
#include "genfun.hpp"
#include "landscape.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "words.hpp"

using namespace profilium;

struct prof_model {
    ModelParams params;
    bool sized = false;
};

struct prof_landscape {
    LandscapeReport report;
};

namespace {

thread_local std::string g_last_error;

prof_status to_status(Errc c)
{
    switch (c) {
    case Errc::domain: return PROF_ERR_DOMAIN;
    case Errc::resource: return PROF_ERR_RESOURCE;
    case Errc::numeric: return PROF_ERR_NUMERIC;
    case Errc::boundary: return PROF_ERR_BOUNDARY;
    case Errc::regime: return PROF_ERR_REGIME;
    case Errc::certificate: return PROF_ERR_CERTIFICATE;
    case Errc::invalid_argument: return PROF_ERR_INVALID;
    }
    return PROF_ERR_INVALID;
}

prof_status set_error(prof_status s, const char* msg)
{
    g_last_error = msg;
    return s;
}

template <class F>
prof_status guarded(F&& f)
{
    try {
        f();
        g_last_error.clear();
        return PROF_OK;
    } catch (const Error& e) {
        return set_error(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(PROF_ERR_RESOURCE, "out of memory");
    } catch (const std::exception& e) {
        return set_error(PROF_ERR_NUMERIC, e.what());
    }
}

prof_regime_class to_c(RegimeClass c)
{
    switch (c) {
    case RegimeClass::small: return PROF_REGIME_SMALL;
    case RegimeClass::saddle: return PROF_REGIME_SADDLE;
    case RegimeClass::polar: return PROF_REGIME_POLAR;
    }
    return PROF_REGIME_SMALL;
}

void need(const void* ptr, const char* what)
{
    if (!ptr) fail(Errc::invalid_argument, std::string(what) + " is null");
}

const ModelParams& sized(const prof_model* m)
{
    need(m, "model");
    if (!m->sized) fail(Errc::invalid_argument, "model has no (n, k); call prof_model_set_nk or prof_model_set_alpha");
    return m->params;
}

}  // namespace

extern "C" {

const char* prof_last_error(void) { return g_last_error.c_str(); }

const char* prof_status_name(prof_status s)
{
    switch (s) {
    case PROF_OK: return "ok";
    case PROF_ERR_DOMAIN: return "domain";
    case PROF_ERR_RESOURCE: return "resource";
    case PROF_ERR_NUMERIC: return "numeric";
    case PROF_ERR_BOUNDARY: return "boundary";
    case PROF_ERR_REGIME: return "regime";
    case PROF_ERR_CERTIFICATE: return "certificate";
    case PROF_ERR_INVALID: return "invalid_argument";
    }
    return "unknown";
}

const char* prof_version(void) { return "0.1.0"; }

prof_status prof_model_create(double p, prof_model** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto* m = new prof_model;
        try {
            m->params = ModelParams::from_p(p);
        } catch (...) {
            delete m;
            throw;
        }
        *out = m;
    });
}

void prof_model_destroy(prof_model* m) { delete m; }

prof_status prof_model_set_nk(prof_model* m, uint64_t n, int k)
{
    return guarded([&] {
        need(m, "model");
        m->params = ModelParams::with_nk(m->params.p, n, k);
        m->sized = true;
    });
}

prof_status prof_model_set_alpha(prof_model* m, double alpha, uint64_t n)
{
    return guarded([&] {
        need(m, "model");
        m->params = ModelParams::with_alpha(m->params.p, alpha, n);
        m->sized = true;
    });
}

prof_status prof_model_get(const prof_model* m, double* p, double* alpha, uint64_t* n, int* k)
{
    return guarded([&] {
        need(m, "model");
        if (p) *p = m->params.p;
        if (alpha) *alpha = m->params.alpha;
        if (n) *n = m->params.n;
        if (k) *k = m->params.k;
    });
}

prof_status prof_model_effective_alpha(const prof_model* m, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = sized(m).effective_alpha();
    });
}

prof_status prof_thresholds(double p, double* alpha1, double* alpha2)
{
    return guarded([&] {
        ModelParams::from_p(p);
        const Thresholds t = thresholds(p);
        if (alpha1) *alpha1 = t.alpha1;
        if (alpha2) *alpha2 = t.alpha2;
    });
}

prof_status prof_regimes(const prof_model* m, double alpha, prof_regime_info* out)
{
    return guarded([&] {
        need(m, "model");
        need(out, "out");
        const double a = alpha > 0 ? alpha : sized(m).effective_alpha();
        const Regime r = regime_thresholds(m->params.p, a);
        out->alpha1 = r.alpha1;
        out->alpha2 = r.alpha2;
        out->margin = r.margin;
        out->regime = to_c(r.cls);
    });
}

prof_status prof_word_probability(const prof_model* m, const char* u, double* out)
{
    return guarded([&] {
        need(m, "model");
        need(u, "word");
        need(out, "out");
        *out = pro(Word::parse(u), m->params);
    });
}

prof_status prof_correlation_poly(const prof_model* m, const char* u, const char* v, double* coeffs, size_t capacity,
                                  size_t* len)
{
    return guarded([&] {
        need(m, "model");
        need(u, "u");
        need(v, "v");
        need(len, "len");
        const auto poly = correlation_poly<double>(Word::parse(u), Word::parse(v), m->params);
        const auto& c = poly.coeffs();
        if (c.size() > capacity || (!coeffs && !c.empty())) {
            *len = c.size();
            fail(Errc::invalid_argument, "coefficient buffer too small");
        }
        for (std::size_t i = 0; i < c.size(); ++i) coeffs[i] = c[i];
        *len = c.size();
    });
}

prof_status prof_pair_stats_compute(const prof_model* m, const char* u, const char* v, prof_pair_stats* out)
{
    return guarded([&] {
        need(m, "model");
        need(u, "u");
        need(v, "v");
        need(out, "out");
        const Word wu = Word::parse(u), wv = Word::parse(v);
        const PairStats s = pair_stats(wu, wv, m->params);
        *out = prof_pair_stats{};
        out->P = s.P;
        out->Theta = s.Theta;
        out->K = s.K;
        out->Q = s.Q.value_or(NAN);
        out->T = s.T.value_or(NAN);
        if (const auto ov = maximal_overlap(wu, wv)) {
            out->has_overlap = 1;
            out->ell = ov->ell;
            out->i = ov->i;
            out->j = ov->j;
        }
    });
}

prof_status prof_correlation_decay_sums(const prof_model* m, int k, double* self_sum, double* cross_sum)
{
    return guarded([&] {
        need(m, "model");
        const DecaySums s = correlation_decay_sums(k, m->params);
        if (self_sum) *self_sum = s.self_overlap;
        if (cross_sum) *cross_sum = s.cross_overlap;
    });
}

prof_status prof_exact_variance(const prof_model* m, prof_exact_method method, int exact_mode, prof_exact_result* out,
                                char* rational_buf, size_t buf_len)
{
    return guarded([&] {
        need(out, "out");
        const ModelParams& mp = sized(m);
        *out = prof_exact_result{};
        if (method == PROF_EXACT_ROOTS) {
            if (exact_mode) fail(Errc::invalid_argument, "the roots method has no exact mode");
            const RootsVariance rv = variance_via_roots(mp.n, mp.k, mp);
            out->value = rv.value;
            out->error_scale = rv.error_scale;
            out->certificate_failures = rv.certificate_failures;
            out->near_coincident = rv.near_coincident;
            return;
        }
        if (method != PROF_EXACT_ENUMERATION && method != PROF_EXACT_DP)
            fail(Errc::invalid_argument, "unknown exact method");
        if (exact_mode) {
            const mpq_class v = method == PROF_EXACT_DP ? variance_from_dp<mpq_class>(mp.n, mp.k, mp)
                                                        : exact_variance_enumeration<mpq_class>(mp.n, mp.k, mp);
            out->value = v.get_d();
            if (rational_buf && buf_len > 0) {
                const std::string s = v.get_str();
                if (s.size() + 1 > buf_len) fail(Errc::invalid_argument, "rational buffer too small");
                std::memcpy(rational_buf, s.c_str(), s.size() + 1);
            }
        } else {
            out->value = method == PROF_EXACT_DP ? variance_from_dp<double>(mp.n, mp.k, mp)
                                                 : exact_variance_enumeration<double>(mp.n, mp.k, mp);
            if (rational_buf && buf_len > 0) rational_buf[0] = '\0';
        }
    });
}

prof_status prof_simulate(const prof_model* m, uint64_t replicates, uint64_t seed, unsigned threads, prof_sample* out)
{
    return guarded([&] {
        need(out, "out");
        const ModelParams& mp = sized(m);
        SimulationConfig cfg;
        cfg.n = mp.n;
        cfg.k = mp.k;
        cfg.replicates = replicates;
        cfg.seed = seed;
        cfg.params = mp;
        cfg.threads = threads;
        const ProfileSample s = simulate_profile(cfg);
        out->mean = s.mean;
        out->variance = s.variance;
        out->stderr_variance = s.stderr_variance;
        out->full_level_fraction = s.full_level_fraction;
        out->replicates = s.replicates;
    });
}

void prof_truncation_default(prof_truncation* t)
{
    if (!t) return;
    const TruncationPolicy d;
    t->y_max = d.y_max;
    t->m_max = d.m_max;
    t->ell_max = d.ell_max;
    t->tail_tol = d.tail_tol;
}

prof_status prof_asymptotic(const prof_model* m, const prof_truncation* t, prof_variance_report* out)
{
    return guarded([&] {
        need(out, "out");
        const ModelParams& mp = sized(m);
        TruncationPolicy pol;
        if (t) {
            pol.y_max = t->y_max;
            pol.m_max = t->m_max;
            pol.ell_max = t->ell_max;
            pol.tail_tol = t->tail_tol;
        }
        const VarianceReport r = variance_asymptotic(mp.n, mp, pol);
        *out = prof_variance_report{};
        out->value = r.value;
        out->printed_value = r.printed_value;
        out->c1 = r.C1;
        out->c1_printed = r.C1_printed;
        out->c2 = r.C2;
        out->c1_term = r.c1_term;
        out->c2_term = r.c2_term;
        out->exponent = r.exponent;
        out->log_factor = r.log_factor;
        out->alpha_eff = r.alpha_eff;
        out->tail = r.tail;
        out->regime = to_c(r.regime);
        out->small_regime_flag = r.small_regime_flag ? 1 : 0;
        out->y_used = r.y_used;
        out->m_used = r.m_used;
        out->ell_used = r.ell_used;
        out->boundary_classes = r.boundary_classes;
        out->classes_small = r.class_counts[0];
        out->classes_saddle = r.class_counts[1];
        out->classes_polar = r.class_counts[2];
    });
}

prof_status prof_vterms_compute(const prof_model* m, int with_exact_v3, prof_vterms* out)
{
    return guarded([&] {
        need(out, "out");
        const ModelParams& mp = sized(m);
        const VTerms v = v_terms(mp.n, mp, with_exact_v3 != 0);
        out->v1 = v.V1;
        out->v2 = v.V2;
        out->v3tilde = v.V3tilde;
        out->has_v3 = v.V3.has_value() ? 1 : 0;
        out->v3 = v.V3.value_or(NAN);
        out->v2_is_bound = v.V2_is_bound ? 1 : 0;
        out->assembled = v.assembled();
    });
}

void prof_landscape_options_default(prof_landscape_options* o)
{
    if (!o) return;
    static const LandscapeOptions d;
    o->r_values = d.r_values.data();
    o->r_count = d.r_values.size();
    o->cd_points = d.cd_points;
    o->r_points = d.r_points;
    o->r_max = d.r_max;
    o->r0 = d.r0;
    o->finite_k = d.finite_k;
}

prof_status prof_landscape_compute(const prof_model* m, double alpha, const prof_landscape_options* o,
                                   prof_landscape** out)
{
    return guarded([&] {
        need(m, "model");
        need(out, "out");
        *out = nullptr;
        const double a = alpha > 0 ? alpha : m->params.alpha;
        if (!(a > 0)) fail(Errc::invalid_argument, "alpha must be positive");
        LandscapeOptions opt;
        if (o) {
            if (o->r_values && o->r_count) opt.r_values.assign(o->r_values, o->r_values + o->r_count);
            opt.cd_points = o->cd_points;
            opt.r_points = o->r_points;
            opt.r_max = o->r_max;
            opt.r0 = o->r0;
            opt.finite_k = o->finite_k;
        }
        auto* l = new prof_landscape;
        try {
            l->report = landscape(m->params.p, a, opt);
        } catch (...) {
            delete l;
            throw;
        }
        *out = l;
    });
}

void prof_landscape_destroy(prof_landscape* l) { delete l; }

prof_status prof_landscape_get_summary(const prof_landscape* l, prof_landscape_summary* out)
{
    return guarded([&] {
        need(l, "landscape");
        need(out, "out");
        const LandscapeReport& r = l->report;
        out->regime = to_c(r.regime);
        out->alpha = r.alpha;
        out->F0 = r.F0;
        out->F_prime0 = r.F_prime0;
        out->h_rho = r.h_rho;
        out->max_second_diff = r.max_second_diff;
        out->concave = r.concave ? 1 : 0;
        out->tail_bound = r.tail_bound;
        out->tail_max = r.tail_max;
        out->tail_ok = r.tail_ok ? 1 : 0;
        out->slices = r.slices.size();
        out->r_points = r.r_grid.size();
    });
}

prof_status prof_landscape_get_slice(const prof_landscape* l, size_t i, prof_landscape_slice* out)
{
    return guarded([&] {
        need(l, "landscape");
        need(out, "out");
        if (i >= l->report.slices.size()) fail(Errc::invalid_argument, "slice index out of range");
        const LandscapeSlice& s = l->report.slices[i];
        out->r = s.r;
        out->omega_nonempty = s.omega_nonempty ? 1 : 0;
        out->c_star = s.c_star;
        out->d_star = s.d_star;
        out->g_max = s.g_max;
        out->c_m = s.c_m;
        out->F = s.F;
        out->cells_off_diagonal = s.cells_off_diagonal;
    });
}

prof_status prof_landscape_get_F(const prof_landscape* l, size_t i, double* r, double* F)
{
    return guarded([&] {
        need(l, "landscape");
        if (i >= l->report.r_grid.size()) fail(Errc::invalid_argument, "grid index out of range");
        if (r) *r = l->report.r_grid[i];
        if (F) *F = l->report.F[i];
    });
}

}  // extern "C"
