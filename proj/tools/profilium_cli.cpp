// profilium: exact, asymptotic and simulated variance of the suffix-tree internal profile.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "profilium/profilium.h"

namespace {

struct RunConfig {
    std::string command;
    double p = 0.7;
    std::optional<double> alpha;
    std::optional<int> k;
    std::vector<std::uint64_t> n_list;
    std::uint64_t replicates = 10000;
    std::uint64_t seed = 1;
    std::string mode = "float";
    std::string method = "all";
    std::string format = "csv";
    std::string output;
    unsigned threads = 0;
    bool reproducible = false;
    bool exact_v3 = false;
    prof_truncation trunc{};
    int cd_points = 101;
    int r_points = 61;
    double r_max = 0.6;
    std::vector<double> r_values{0.1, 0.2, 0.4};
};

struct Row {
    std::string method;
    double p = 0;
    std::optional<double> alpha;
    std::optional<std::uint64_t> n;
    std::optional<int> k;
    std::string value;
    std::string stderr_;
    std::string regime;
    std::string truncation;
    std::string runtime_ms;
    std::uint64_t seed = 0;
    std::string detail;
};

struct CliError {
    int exit_code;
    std::string kind;
    std::string message;
};

std::string num(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    // shortest form that reads back to the same double
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

int exit_code_for(prof_status s)
{
    switch (s) {
    case PROF_OK: return 0;
    case PROF_ERR_RESOURCE: return 3;
    case PROF_ERR_NUMERIC:
    case PROF_ERR_CERTIFICATE: return 4;
    default: return 2;
    }
}

void check(prof_status s)
{
    if (s != PROF_OK) throw CliError{exit_code_for(s), prof_status_name(s), prof_last_error()};
}

const char* regime_str(prof_regime_class c)
{
    switch (c) {
    case PROF_REGIME_SMALL: return "small";
    case PROF_REGIME_SADDLE: return "saddle";
    case PROF_REGIME_POLAR: return "polar";
    }
    return "";
}

struct ModelDeleter {
    void operator()(prof_model* m) const { prof_model_destroy(m); }
};
using ModelPtr = std::unique_ptr<prof_model, ModelDeleter>;

struct LandscapeDeleter {
    void operator()(prof_landscape* l) const { prof_landscape_destroy(l); }
};

class Runner {
public:
    explicit Runner(const RunConfig& cfg) : cfg_(cfg) {}

    std::vector<Row> run()
    {
        const std::string& c = cfg_.command;
        if (c == "regimes") regimes();
        else if (c == "landscape") landscape();
        else {
            for (std::uint64_t n : cfg_.n_list) {
                ModelPtr m = sized_model(n);
                if (c == "exact") exact(m.get(), cfg_.method == "all");
                else if (c == "simulate") simulate(m.get(), false);
                else if (c == "asymptotic") asymptotic(m.get(), false);
                else if (c == "vterms") vterms(m.get(), false);
                else if (c == "compare") compare(m.get());
            }
        }
        std::stable_sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) {
            return a.n.value_or(0) < b.n.value_or(0);
        });
        return std::move(rows_);
    }

private:
    using clock = std::chrono::steady_clock;

    ModelPtr sized_model(std::uint64_t n)
    {
        prof_model* raw = nullptr;
        check(prof_model_create(cfg_.p, &raw));
        ModelPtr m(raw);
        if (cfg_.k) check(prof_model_set_nk(m.get(), n, *cfg_.k));
        else check(prof_model_set_alpha(m.get(), *cfg_.alpha, n));
        return m;
    }

    Row base(const prof_model* m, std::string method)
    {
        Row r;
        r.method = std::move(method);
        r.p = cfg_.p;
        r.seed = cfg_.seed;
        if (m) {
            std::uint64_t n = 0;
            int k = 0;
            double alpha = 0;
            prof_model_get(m, nullptr, &alpha, &n, &k);
            r.n = n;
            r.k = k;
            r.alpha = cfg_.alpha ? *cfg_.alpha : alpha;
            prof_regime_info info{};
            if (prof_regimes(m, 0, &info) == PROF_OK) r.regime = regime_str(info.regime);
            else r.regime = std::string("boundary");
        } else if (cfg_.alpha) {
            r.alpha = *cfg_.alpha;
        }
        return r;
    }

    void stamp(Row& r, clock::time_point t0)
    {
        if (cfg_.reproducible) return;
        const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", ms);
        r.runtime_ms = buf;
    }

    // In compare, a failing method becomes a skipped row instead of aborting the run.
    template <class F>
    void attempt(const prof_model* m, const std::string& method, bool soft, F&& f)
    {
        try {
            f();
        } catch (const CliError& e) {
            if (!soft) throw;
            Row r = base(m, method);
            r.value = "skipped(" + e.kind + ": " + e.message + ")";
            rows_.push_back(std::move(r));
        }
    }

    std::string trunc_summary() const
    {
        const auto& t = cfg_.trunc;
        char buf[128];
        std::snprintf(buf, sizeof buf, "y<=%d;m<=%d;ell<=%s;tail_tol=%g", t.y_max, t.m_max,
                      t.ell_max > 0 ? std::to_string(t.ell_max).c_str() : "k-1", t.tail_tol);
        return buf;
    }

    void regimes()
    {
        double a1 = 0, a2 = 0;
        check(prof_thresholds(cfg_.p, &a1, &a2));
        Row r1 = base(nullptr, "alpha1");
        r1.value = num(a1);
        Row r2 = base(nullptr, "alpha2");
        r2.value = num(a2);
        rows_.push_back(r1);
        rows_.push_back(r2);
        if (cfg_.alpha || cfg_.k) {
            for (std::uint64_t n : cfg_.n_list) {
                ModelPtr m = sized_model(n);
                prof_regime_info info{};
                double eff = 0;
                check(prof_model_effective_alpha(m.get(), &eff));
                Row r = base(m.get(), "classify");
                r.value = num(eff);
                r.detail = "alpha_eff=" + num(eff);
                const prof_status s = prof_regimes(m.get(), 0, &info);
                if (s == PROF_OK) {
                    r.regime = regime_str(info.regime);
                    r.detail += ";margin=" + num(info.margin);
                } else {
                    r.regime = "boundary";
                    r.detail += std::string(";") + prof_last_error();
                }
                rows_.push_back(std::move(r));
            }
        }
    }

    std::vector<prof_exact_method> exact_methods() const
    {
        if (cfg_.method == "enumeration") return {PROF_EXACT_ENUMERATION};
        if (cfg_.method == "dp") return {PROF_EXACT_DP};
        if (cfg_.method == "roots") return {PROF_EXACT_ROOTS};
        return {PROF_EXACT_ENUMERATION, PROF_EXACT_DP, PROF_EXACT_ROOTS};
    }

    void exact(const prof_model* m, bool soft)
    {
        for (prof_exact_method meth : exact_methods()) {
            const char* name = meth == PROF_EXACT_ENUMERATION ? "enumeration" : meth == PROF_EXACT_DP ? "dp" : "roots";
            const bool exact_mode = cfg_.mode == "exact" && meth != PROF_EXACT_ROOTS;
            attempt(m, name, soft, [&] {
                const auto t0 = clock::now();
                prof_exact_result res{};
                std::vector<char> buf(1 << 16);
                check(prof_exact_variance(m, meth, exact_mode ? 1 : 0, &res, buf.data(), buf.size()));
                Row r = base(m, name);
                r.value = exact_mode ? std::string(buf.data()) : num(res.value);
                r.truncation = exact_mode ? "rational" : "float";
                if (exact_mode) r.detail = "decimal=" + num(res.value);
                if (meth == PROF_EXACT_ROOTS) {
                    r.detail = "error_scale=" + num(res.error_scale) +
                               ";certificate_failures=" + std::to_string(res.certificate_failures) +
                               ";near_coincident=" + std::to_string(res.near_coincident);
                }
                stamp(r, t0);
                rows_.push_back(std::move(r));
            });
        }
    }

    void simulate(const prof_model* m, bool soft)
    {
        attempt(m, "simulate", soft, [&] {
            const auto t0 = clock::now();
            prof_sample s{};
            check(prof_simulate(m, cfg_.replicates, cfg_.seed, cfg_.threads, &s));
            Row r = base(m, "simulate");
            r.value = num(s.variance);
            r.stderr_ = num(s.stderr_variance);
            r.truncation = "replicates=" + std::to_string(s.replicates);
            r.detail = "mean=" + num(s.mean) + ";full_level_fraction=" + num(s.full_level_fraction);
            stamp(r, t0);
            rows_.push_back(std::move(r));
        });
    }

    void asymptotic(const prof_model* m, bool soft)
    {
        attempt(m, "asymptotic", soft, [&] {
            const auto t0 = clock::now();
            prof_variance_report v{};
            check(prof_asymptotic(m, &cfg_.trunc, &v));
            Row r = base(m, "asymptotic");
            r.value = num(v.value);
            r.regime = regime_str(v.regime);
            r.truncation = trunc_summary();
            std::ostringstream d;
            d << "alpha_eff=" << num(v.alpha_eff) << ";C1=" << num(v.c1) << ";C2=" << num(v.c2)
              << ";exponent=" << num(v.exponent) << ";log_factor=" << num(v.log_factor)
              << ";c1_term=" << num(v.c1_term) << ";c2_term=" << num(v.c2_term)
              << ";printed_value=" << num(v.printed_value) << ";C1_printed=" << num(v.c1_printed)
              << ";classes=" << v.classes_small << "/" << v.classes_saddle << "/" << v.classes_polar
              << ";boundary_classes=" << v.boundary_classes << ";y_used=" << v.y_used << ";m_used=" << v.m_used
              << ";tail=" << num(v.tail);
            if (v.small_regime_flag) d << ";small_regime=1";
            r.detail = d.str();
            stamp(r, t0);
            rows_.push_back(std::move(r));
        });
    }

    void vterms(const prof_model* m, bool soft)
    {
        attempt(m, "vterms", soft, [&] {
            const auto t0 = clock::now();
            prof_vterms v{};
            check(prof_vterms_compute(m, cfg_.exact_v3 ? 1 : 0, &v));
            Row r = base(m, "vterms");
            r.value = num(v.assembled);
            r.truncation = v.v2_is_bound ? "V2=bound(omitted)" : "V2=exact";
            r.detail = "V1=" + num(v.v1) + ";V2=" + num(v.v2) + ";V3tilde=" + num(v.v3tilde);
            if (v.has_v3) r.detail += ";V3=" + num(v.v3);
            stamp(r, t0);
            rows_.push_back(std::move(r));
        });
    }

    void compare(const prof_model* m)
    {
        exact(m, true);
        asymptotic(m, true);
        vterms(m, true);
        if (cfg_.replicates >= 2) simulate(m, true);
    }

    void landscape()
    {
        prof_model* raw = nullptr;
        check(prof_model_create(cfg_.p, &raw));
        ModelPtr m(raw);
        prof_landscape_options o;
        prof_landscape_options_default(&o);
        o.r_values = cfg_.r_values.data();
        o.r_count = cfg_.r_values.size();
        o.cd_points = cfg_.cd_points;
        o.r_points = cfg_.r_points;
        o.r_max = cfg_.r_max;
        if (cfg_.k) o.finite_k = *cfg_.k;
        const auto t0 = clock::now();
        prof_landscape* lraw = nullptr;
        check(prof_landscape_compute(m.get(), *cfg_.alpha, &o, &lraw));
        std::unique_ptr<prof_landscape, LandscapeDeleter> l(lraw);
        prof_landscape_summary s{};
        check(prof_landscape_get_summary(l.get(), &s));
        const std::string grid = "cd_points=" + std::to_string(cfg_.cd_points) + ";r_points=" + std::to_string(cfg_.r_points);
        for (std::size_t i = 0; i < s.slices; ++i) {
            prof_landscape_slice sl{};
            check(prof_landscape_get_slice(l.get(), i, &sl));
            Row r = base(nullptr, "landscape.slice");
            r.regime = regime_str(s.regime);
            r.truncation = grid;
            r.value = num(sl.g_max);
            r.detail = "r=" + num(sl.r) + ";omega_nonempty=" + std::to_string(sl.omega_nonempty) + ";c_star=" +
                       num(sl.c_star) + ";d_star=" + num(sl.d_star) + ";c_m=" + num(sl.c_m) + ";F=" + num(sl.F) +
                       ";cells_off_diagonal=" + std::to_string(sl.cells_off_diagonal);
            rows_.push_back(std::move(r));
        }
        for (std::size_t i = 0; i < s.r_points; ++i) {
            double rr = 0, F = 0;
            check(prof_landscape_get_F(l.get(), i, &rr, &F));
            Row r = base(nullptr, "landscape.F");
            r.regime = regime_str(s.regime);
            r.truncation = grid;
            r.value = num(F);
            r.detail = "r=" + num(rr);
            rows_.push_back(std::move(r));
        }
        Row r = base(nullptr, "landscape.summary");
        r.regime = regime_str(s.regime);
        r.truncation = grid;
        r.value = num(s.F0);
        r.detail = "F0=" + num(s.F0) + ";F_prime0=" + num(s.F_prime0) + ";h_rho=" + num(s.h_rho) +
                   ";max_second_diff=" + num(s.max_second_diff) + ";concave=" + std::to_string(s.concave) +
                   ";tail_bound=" + num(s.tail_bound) + ";tail_max=" + num(s.tail_max) +
                   ";tail_ok=" + std::to_string(s.tail_ok);
        stamp(r, t0);
        rows_.push_back(std::move(r));
    }

    const RunConfig& cfg_;
    std::vector<Row> rows_;
};

const std::vector<std::string> kColumns{"method", "p",      "alpha",      "n",          "k",    "value",
                                        "stderr", "regime", "truncation", "runtime_ms", "seed", "detail"};

std::vector<std::string> cells(const Row& r)
{
    return {r.method,
            num(r.p),
            r.alpha ? num(*r.alpha) : "",
            r.n ? std::to_string(*r.n) : "",
            r.k ? std::to_string(*r.k) : "",
            r.value,
            r.stderr_,
            r.regime,
            r.truncation,
            r.runtime_ms,
            std::to_string(r.seed),
            r.detail};
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::pair<std::string, std::string>> resolved(const RunConfig& c)
{
    std::string ns;
    for (std::size_t i = 0; i < c.n_list.size(); ++i) ns += (i ? "," : "") + std::to_string(c.n_list[i]);
    std::string rs;
    for (std::size_t i = 0; i < c.r_values.size(); ++i) rs += (i ? "," : "") + num(c.r_values[i]);
    return {{"command", c.command},
            {"p", num(c.p)},
            {"alpha", c.alpha ? num(*c.alpha) : ""},
            {"k", c.k ? std::to_string(*c.k) : ""},
            {"n", ns},
            {"replicates", std::to_string(c.replicates)},
            {"seed", std::to_string(c.seed)},
            {"mode", c.mode},
            {"method", c.method},
            {"y_max", std::to_string(c.trunc.y_max)},
            {"m_max", std::to_string(c.trunc.m_max)},
            {"ell_max", std::to_string(c.trunc.ell_max)},
            {"tail_tol", num(c.trunc.tail_tol)},
            {"exact_v3", c.exact_v3 ? "true" : "false"},
            {"cd_points", std::to_string(c.cd_points)},
            {"r_points", std::to_string(c.r_points)},
            {"r_max", num(c.r_max)},
            {"r_values", rs},
            {"reproducible", c.reproducible ? "true" : "false"},
            {"version", prof_version()}};
}

void write_csv(std::ostream& os, const RunConfig& cfg, const std::vector<Row>& rows)
{
    for (const auto& [k, v] : resolved(cfg)) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < kColumns.size(); ++i) os << (i ? "," : "") << kColumns[i];
    os << "\n";
    for (const Row& r : rows) {
        const auto c = cells(r);
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << csv_quote(c[i]);
        os << "\n";
    }
}

void write_json(std::ostream& os, const RunConfig& cfg, const std::vector<Row>& rows)
{
    nlohmann::ordered_json doc;
    doc["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : resolved(cfg)) doc["config"][k] = v;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const Row& r : rows) {
        nlohmann::ordered_json o;
        const auto c = cells(r);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::string& key = kColumns[i];
            const std::string& s = c[i];
            char* end = nullptr;
            if (s.empty()) {
                o[key] = nullptr;
                continue;
            }
            if (key == "n" || key == "k" || key == "seed") {
                o[key] = std::strtoull(s.c_str(), nullptr, 10);
                continue;
            }
            const double d = std::strtod(s.c_str(), &end);
            if (key != "method" && end && *end == '\0' && std::isfinite(d)) o[key] = d;
            else o[key] = s;
        }
        doc["rows"].push_back(std::move(o));
    }
    os << doc.dump(2) << "\n";
}

void print_error(const CliError& e)
{
    nlohmann::ordered_json j;
    j["error"] = e.kind;
    j["message"] = e.message;
    j["exit_code"] = e.exit_code;
    std::cerr << j.dump() << "\n";
}

void validate(RunConfig& c)
{
    auto bad = [](const std::string& msg) { throw CliError{2, "invalid_argument", msg}; };
    if (!(c.p > 0.5 && c.p < 1)) bad("--p must lie in (0.5, 1)");
    if (c.mode != "exact" && c.mode != "float") bad("--mode must be exact or float");
    if (c.format != "csv" && c.format != "json") bad("--format must be csv or json");
    const std::vector<std::string> methods{"all", "enumeration", "dp", "roots"};
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
        bad("--method must be one of all, enumeration, dp, roots");
    if (c.alpha && c.k && c.command != "landscape") bad("give either --alpha or --k, not both");
    if (c.alpha && !(*c.alpha > 0)) bad("--alpha must be positive");
    if (c.k && *c.k < 1) bad("--k must be at least 1");
    const bool sized = c.command != "regimes" && c.command != "landscape";
    if (sized) {
        if (c.n_list.empty()) bad(c.command + " needs --n");
        if (!c.alpha && !c.k) bad(c.command + " needs --alpha or --k");
    }
    if (c.command == "regimes" && (c.alpha || c.k) && c.n_list.empty()) {
        if (c.k) bad("regimes with --k needs --n");
        c.n_list.push_back(0);
    }
    for (std::uint64_t n : c.n_list)
        if (n < 2 && !(c.command == "regimes" && n == 0)) bad("every --n must be at least 2");
    if (c.command == "simulate" && c.replicates < 2) bad("--replicates must be at least 2");
    if (c.command == "landscape") {
        if (!c.alpha) bad("landscape needs --alpha");
        if (c.cd_points < 3 || c.r_points < 3) bad("--cd-points and --r-points must be at least 3");
    }
    if (c.trunc.y_max < 0 || c.trunc.m_max < 2 || c.trunc.ell_max < 0 || !(c.trunc.tail_tol > 0))
        bad("truncation overrides out of range");
}

}  // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    prof_truncation_default(&cfg.trunc);

    CLI::App app{"Variance of the internal profile of random suffix trees: exact, asymptotic and simulated."};
    app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.add_option("--p", cfg.p, "Probability of letter a, in (0.5, 1)")->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "Depth ratio; k = round(alpha ln n)");
    app.add_option("--k", cfg.k, "Depth directly");
    app.add_option("--n", cfg.n_list, "String lengths (comma separated)")->delimiter(',');
    app.add_option("--replicates", cfg.replicates, "Monte Carlo replicates")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Simulation seed")->capture_default_str();
    app.add_option("--mode", cfg.mode, "exact (rational) or float")->capture_default_str();
    app.add_option("--method", cfg.method, "exact: all, enumeration, dp or roots")->capture_default_str();
    app.add_option("--format", cfg.format, "csv or json")->capture_default_str();
    app.add_option("--output", cfg.output, "Output file (default stdout)");
    app.add_option("--threads", cfg.threads, "Worker threads (0: PROFILIUM_THREADS or hardware)");
    app.add_flag("--reproducible", cfg.reproducible, "Leave runtime_ms blank for byte-stable output");
    app.add_flag("--exact-v3", cfg.exact_v3, "Also evaluate the ordered-pair V3 sum (k <= 8)");
    app.add_option("--y-max", cfg.trunc.y_max, "Largest |y| in the periodic sum")->capture_default_str();
    app.add_option("--m-max", cfg.trunc.m_max, "Terms of the W series")->capture_default_str();
    app.add_option("--ell-max", cfg.trunc.ell_max, "Largest overlap length (0: all)")->capture_default_str();
    app.add_option("--tail-tol", cfg.trunc.tail_tol, "Tail tolerance")->capture_default_str();
    app.add_option("--cd-points", cfg.cd_points, "Landscape grid points per axis")->capture_default_str();
    app.add_option("--r-points", cfg.r_points, "Landscape points along r")->capture_default_str();
    app.add_option("--r-max", cfg.r_max, "Landscape r range")->capture_default_str();
    app.add_option("--r-values", cfg.r_values, "Landscape slices")->delimiter(',');

    const std::vector<std::pair<const char*, const char*>> subs{
        {"regimes", "Thresholds and regime classification"},
        {"exact", "Exact variance by enumeration, automaton DP or dominant roots"},
        {"simulate", "Monte Carlo variance"},
        {"asymptotic", "Asymptotic variance with its components"},
        {"vterms", "The three variance terms"},
        {"landscape", "Class-exponent landscape and its profile"},
        {"compare", "Every applicable method side by side"},
    };
    for (const auto& [name, desc] : subs) {
        auto* s = app.add_subcommand(name, desc);
        s->fallthrough();
        s->callback([&cfg, n = std::string(name)] { cfg.command = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Error& e) {
        print_error(CliError{2, "invalid_argument", e.what()});
        return 2;
    }

    try {
        validate(cfg);
        Runner runner(cfg);
        const std::vector<Row> rows = runner.run();
        std::ofstream file;
        if (!cfg.output.empty()) {
            file.open(cfg.output, std::ios::binary);
            if (!file) throw CliError{3, "resource", "cannot open " + cfg.output};
        }
        std::ostream& os = cfg.output.empty() ? std::cout : file;
        if (cfg.format == "json") write_json(os, cfg, rows);
        else write_csv(os, cfg, rows);
        os.flush();
        if (!os) throw CliError{3, "resource", "write failed"};
    } catch (const CliError& e) {
        print_error(e);
        return e.exit_code;
    } catch (const std::exception& e) {
        print_error(CliError{4, "numeric", e.what()});
        return 4;
    }
    return 0;
}
