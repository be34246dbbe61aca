#pragma once

#include "asymptotics.hpp"
#include "brute_force.hpp"
#include "cseries.hpp"
#include "golden.hpp"
#include "numerics.hpp"
#include "poisson_mellin.hpp"
#include "profile_exact.hpp"
#include "simulator.hpp"
#include "xi_engine.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace patricia::cli {

inline constexpr const char* code_version = "0.1.0";

enum ExitCode { exit_ok = 0, exit_usage = 2, exit_numerical = 3, exit_verification = 4 };

struct RunConfig {
    std::string subcommand;
    std::string p = "0.7";
    unsigned n = 256;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    unsigned precision_bits = env_precision_bits();
    CTruncation trunc;
    double epsilon = 0.5;
    std::string format = "csv";
    std::string out;
    // subcommand specifics
    std::string u = "1";
    std::string v = "0.6";
    bool gradient = false;
    std::string step = "1e-6";
    unsigned ell_max = 12;
    bool second = false;
    std::string table = "c";
    std::string suite = "all";
    std::string inject_fault;
    std::vector<std::string> argv;
};

// A flat table of decimal strings plus reproducibility metadata.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> r)
    {
        r.resize(columns.size());
        rows.push_back(std::move(r));
    }
};

inline std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

inline std::string num(const HPReal& x) { return to_sig(x, 15); }

inline std::vector<std::pair<std::string, std::string>> base_meta(const RunConfig& c)
{
    std::string args;
    for (const auto& a : c.argv) args += (args.empty() ? "" : " ") + a;
    return {{"subcommand", c.subcommand},
            {"code_version", code_version},
            {"flags", args},
            {"p", c.p},
            {"seed", std::to_string(c.seed)},
            {"precision_bits", std::to_string(c.precision_bits)},
            {"truncation", "J0=" + std::to_string(c.trunc.J0) + " L0=" + std::to_string(c.trunc.L0) +
                               " K0=" + std::to_string(c.trunc.K0) + " R0=" + std::to_string(c.trunc.R0)}};
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

inline void write_csv(std::ostream& os, const Table& t)
{
    for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Table& t)
{
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    j["data"] = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json row = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < r.size(); ++i) row[t.columns[i]] = r[i];
        j["data"].push_back(row);
    }
    os << j.dump(2) << '\n';
}

inline void write(std::ostream& os, const Table& t, const std::string& format)
{
    if (format == "json") write_json(os, t);
    else write_csv(os, t);
}

inline Table cmd_simulate(const RunConfig& c)
{
    Bias b(c.p);
    SimulationSummary s = run_trials(c.n, b, c.trials, c.seed, c.threads);
    Table t;
    t.meta = base_meta(c);
    t.meta.push_back({"n", std::to_string(c.n)});
    t.meta.push_back({"trials", std::to_string(c.trials)});
    t.columns = {"stat", "k", "mean", "variance", "count"};
    for (std::size_t k = 0; k < s.profile_sum.size(); ++k)
        t.add({"profile", std::to_string(k), num(s.mean(k)), num(s.variance(k)), ""});
    for (auto [h, cnt] : s.height_hist) t.add({"height", std::to_string(h), "", "", std::to_string(cnt)});
    for (auto [f, cnt] : s.fillup_hist) t.add({"fillup", std::to_string(f), "", "", std::to_string(cnt)});
    for (auto [d, cnt] : s.depth_hist) t.add({"depth", std::to_string(d), "", "", std::to_string(cnt)});
    return t;
}

inline Table cmd_profile(const RunConfig& c)
{
    Bias b(c.p);
    ProfileTable pt = build_profile(c.n, b, c.second);
    Table t;
    t.meta = base_meta(c);
    t.meta.push_back({"N_max", std::to_string(c.n)});
    t.columns = {"n", "k", "mu"};
    if (c.second) t.columns.push_back("var");
    for (unsigned n = 1; n <= c.n; ++n)
        for (unsigned k = 0; k < std::max(n, 1u); ++k) {
            std::vector<std::string> r{std::to_string(n), std::to_string(k), num(pt.mean(n, k))};
            if (c.second) r.push_back(num(pt.variance(n, k)));
            t.add(r);
        }
    return t;
}

inline Table cmd_xi(const RunConfig& c)
{
    Bias b(c.p);
    XiSequence xi = xi_limits(c.ell_max, b);
    Table t;
    t.meta = base_meta(c);
    t.meta.push_back({"ell_max", std::to_string(c.ell_max)});
    t.meta.push_back({"c1_calibrated", num(xi.c1)});
    t.columns = {"ell", "xi", "xi_times_factorial", "xi_asymptotic"};
    HPReal f = 1;
    for (unsigned l = 1; l <= c.ell_max; ++l) {
        if (l > 1) f *= l - 1;
        t.add({std::to_string(l), num(xi[l]), num(xi[l] * f), num(xi_asymptotic(l, b))});
    }
    return t;
}

inline Table cmd_identity(const RunConfig& c)
{
    Bias b(c.p);
    Table t;
    t.meta = base_meta(c);
    HPReal d = d_of_p(b, 80, 80);
    t.meta.push_back({"D(p)", num(d)});
    t.columns = {"N", "Q_N", "partial_sum", "Q_N_p_pow", "residual"};
    for (const auto& w : d_identity_witness(b, std::min(c.n, 100u)))
        t.add({std::to_string(w.N), num(w.Q_N), num(w.lhs), num(w.rhs), num(HPReal(w.lhs - w.rhs))});
    return t;
}

inline Table cmd_cseries(const RunConfig& c)
{
    HPReal p(c.p), u(c.u), v(c.v);
    CComponents cc = c_components(p, u, v, c.trunc);
    Table t;
    t.meta = base_meta(c);
    for (const auto& w : cc.warnings) t.meta.push_back({"warning", w});
    t.columns = {"p", "u", "v", "C", "C1", "C2", "C30", "C32", "C31_0", "C31_sum"};
    std::vector<std::string> r{c.p, c.u, c.v, num(cc.total), num(cc.c1), num(cc.c2), num(cc.c30), num(cc.c32),
                               num(cc.c31_0), num(cc.c31_sum)};
    if (c.gradient) {
        t.columns.insert(t.columns.end(), {"dC_dp", "dC_du", "dC_dv"});
        CGradient g = grad_c(p, u, v, c.trunc, HPReal(c.step));
        r.insert(r.end(), {num(g.dp), num(g.du), num(g.dv)});
    }
    t.add(r);
    return t;
}

inline Table cmd_tables(const RunConfig& c)
{
    Table t;
    t.meta = base_meta(c);
    t.meta.push_back({"table", c.table});
    if (c.table == "c") {
        t.columns = {"p", "u", "v", "C", "published", "rel_diff"};
        for (const auto& r : golden::c_table) {
            HPReal v = c_total(HPReal(r[0]), HPReal(r[1]), HPReal(r[2]), c.trunc);
            t.add({r[0], r[1], r[2], num(v), r[3], to_sig(rel_diff(v, HPReal(r[3])), 3)});
        }
    } else if (c.table == "h1") {
        t.columns = {"u_tilde", "h1", "published", "rel_diff"};
        for (const auto& r : golden::h1_table) {
            HPReal v = h1(HPReal(r[0]), c.trunc.J0, c.trunc.L0);
            t.add({r[0], num(v), r[1], to_sig(rel_diff(v, HPReal(r[1])), 3)});
        }
        t.meta.push_back({"note", "u~ = 0 entries of the published tables disagree with each other"});
    } else if (c.table == "grad") {
        t.columns = {"p", "u", "v", "dC_dp", "dC_du", "dC_dv", "pub_dC_dp", "pub_dC_du", "pub_dC_dv", "rel_diff_dp",
                     "rel_diff_du", "rel_diff_dv"};
        for (const auto& r : golden::gradient_table_p070) {
            CGradient g = grad_c(HPReal(r[0]), HPReal(r[1]), HPReal(r[2]), c.trunc, HPReal(c.step));
            t.add({r[0], r[1], r[2], num(g.dp), num(g.du), num(g.dv), r[4], r[5], r[6],
                   to_sig(rel_diff(g.dp, HPReal(r[4])), 3), to_sig(rel_diff(g.du, HPReal(r[5])), 3),
                   to_sig(rel_diff(g.dv, HPReal(r[6])), 3)});
        }
    } else {
        throw domain_error("unknown table '" + c.table + "' (expected c, h1 or grad)");
    }
    return t;
}

inline Table cmd_asymptotics(const RunConfig& c)
{
    Bias b(c.p);
    double p = to_double(b.p), n = c.n;
    Table t;
    t.meta = base_meta(c);
    t.meta.push_back({"n", std::to_string(c.n)});
    t.meta.push_back({"epsilon", num(c.epsilon)});
    t.columns = {"quantity", "point", "window_low", "window_high"};
    Prediction h = predict_height(n, p, c.epsilon);
    t.add({"height", num(h.point_estimate), num(h.window_low), num(h.window_high)});
    if (n >= 16) {
        Prediction f = predict_fillup(n, p, c.epsilon);
        t.add({"fillup", num(f.point_estimate), num(f.window_low), num(f.window_high)});
    }
    DepthLimits d = depth_limits(p);
    t.add({"depth_over_ln_n", num(d.typical), num(d.liminf), num(d.limsup)});
    t.add({"entropy", num(entropy(p)), "", ""});
    return t;
}

// Verification suites: each check reports a value and a verdict.
struct Check {
    std::string suite;
    std::string name;
    std::string value;
    bool pass;
};

inline std::vector<Check> suite_conservation(const Bias& b, const std::string& fault)
{
    std::vector<Check> out;
    ProfileTable t = mean_profile(200, b);
    if (fault == "mu") t.mu[50][5] *= HPReal("1.000001");
    HPReal worst = 0;
    for (unsigned n = 1; n <= t.N_max; ++n) {
        PairwiseSum s;
        for (unsigned k = 0; k < std::max(n, 1u); ++k) s.add(t.mean(n, k));
        worst = std::max(worst, abs_hp(s.value() - n) / n);
    }
    HPReal tol = boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 12);
    out.push_back({"conservation", "sum_k mu_{n,k} = n, n <= 200", to_sig(worst, 3), worst <= tol});
    return out;
}

inline std::vector<Check> suite_coupling(const Bias& b)
{
    int agree = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto s = draw_streams(32, b, derive_seed(99, i));
        PatriciaTrie pt = build_patricia(s);
        RefinementTree rt = run_renyi(s);
        agree += shape(pt) == shape(rt) && stats(pt).external_profile == stats(rt).external_profile;
    }
    return {{"coupling", "isomorphic trees over 200 trials (n = 32)", std::to_string(agree) + "/200", agree == 200}};
}

inline std::vector<Check> suite_dual_route(const Bias& b)
{
    ProfileTable t = mean_profile(TransformContext::default_cutoff(10), b, 4u);
    TransformContext ctx(t);
    HPReal worst = 0;
    for (unsigned n : {5u, 10u})
        for (unsigned k = 1; k <= 4; ++k)
            for (const char* rho : {"0.5", "-1.5"}) {
                HPReal g = poisson_G(k, HPReal(n), ctx).value;
                worst = std::max(worst, abs_hp(residue_G(k, HPReal(n), HPReal(rho), ctx) - g) / g);
            }
    HPReal fe = 0;
    for (unsigned k = 1; k <= 4; ++k) fe = std::max(fe, abs_hp(functional_equation_residual(k, HPReal("7.5"), ctx)));
    return {{"dual_route", "residue vs Poisson transform, relative", to_sig(worst, 3), worst < HPReal("1e-8")},
            {"dual_route", "functional equation residual at z = 7.5", to_sig(fe, 3), fe < HPReal("1e-20")}};
}

inline std::vector<Check> suite_identity(const Bias& b)
{
    std::vector<Check> out;
    if (b.p > HPReal("0.5")) {
        HPReal d = abs_hp(d_of_p(b, 80, 80));
        out.push_back({"identity", "|D(p)|", to_sig(d, 3), d < HPReal("1e-12")});
    }
    HPReal worst = 0;
    for (const auto& w : d_identity_witness(b, 100))
        worst = std::max(worst, abs_hp(w.lhs - w.rhs) / std::max({abs_hp(w.lhs), abs_hp(w.rhs), HPReal(1)}));
    HPReal tol = boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 32);
    out.push_back({"identity", "telescoping witness, N <= 100", to_sig(worst, 3), worst <= tol});
    return out;
}

// Magnitude and overall decrease of the depoissonization error at central k.
inline std::vector<Check> suite_depoisson(const Bias& b)
{
    double h = entropy(to_double(b.p));
    auto central = [&](unsigned n) { return static_cast<unsigned>(std::lround(std::log(n) / h)); };
    ProfileTable t = second_moment_profile(TransformContext::default_cutoff(400), b, central(400));
    TransformContext ctx(t);
    auto err = [&](unsigned n) {
        unsigned k = central(n);
        return std::pair{rel_diff(depoisson_mu(n, k, ctx), t.mean(n, k)),
                         rel_diff(depoisson_var(n, k, ctx), t.variance(n, k))};
    };
    auto [m50, v50] = err(50);
    auto [m400, v400] = err(400);
    return {{"depoisson", "mean relative error n=50 -> n=400", to_sig(m50, 3) + " -> " + to_sig(m400, 3),
             m400 < m50 && m400 < HPReal("0.05")},
            {"depoisson", "variance relative error n=50 -> n=400", to_sig(v50, 3) + " -> " + to_sig(v400, 3),
             v400 < v50 && v400 < HPReal("0.15")}};
}

inline std::vector<Check> suite_bounds(const Bias& b)
{
    ProfileTable t = mean_profile(60, b);
    std::vector<Check> out;
    if (b.p > HPReal("0.5")) {
        HPReal C = calibrate_mu_upper(t, 60);
        bool ok = true;
        for (unsigned n = 2; n <= 60; ++n)
            for (unsigned k = 1; k < n; ++k) ok = ok && mu_upper(n, k, b, C) >= t.mean(n, k);
        out.push_back({"bounds", "upper bound with one fitted constant dominates mu for n <= 60", to_sig(C, 6), ok});
    }
    TailBounds tb = tail_bounds(t, 2, 1);
    out.push_back({"bounds", "height tail at (n, k) = (2, 1)", to_sig(tb.height_tail, 3), tb.height_tail == 0});
    return out;
}

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"conservation", "coupling", "dual_route", "identity", "depoisson",
                                                "bounds"};
    return names;
}

inline std::vector<Check> run_suite(const std::string& name, const Bias& b, const std::string& fault)
{
    if (name == "conservation") return suite_conservation(b, fault);
    if (name == "coupling") return suite_coupling(b);
    if (name == "dual_route") return suite_dual_route(b);
    if (name == "identity") return suite_identity(b);
    if (name == "depoisson") return suite_depoisson(b);
    if (name == "bounds") return suite_bounds(b);
    throw domain_error("unknown suite '" + name + "'");
}

inline std::pair<Table, bool> cmd_verify(const RunConfig& c)
{
    Bias b(c.p);
    Table t;
    t.meta = base_meta(c);
    t.meta.push_back({"suite", c.suite});
    if (!c.inject_fault.empty()) t.meta.push_back({"inject_fault", c.inject_fault});
    t.columns = {"suite", "check", "value", "result"};
    bool all = true;
    std::vector<std::string> names = c.suite == "all" ? suite_names() : std::vector<std::string>{c.suite};
    for (const auto& s : names)
        for (const auto& ch : run_suite(s, b, c.inject_fault)) {
            all = all && ch.pass;
            t.add({ch.suite, ch.name, ch.value, ch.pass ? "pass" : "fail"});
        }
    t.meta.push_back({"status", all ? "pass" : "fail"});
    return {t, all};
}

} // namespace patricia::cli
