// Acceptance harness: one pass/fail line per criterion.
#include "patricia/golden.hpp"
#include "patricia/patricia.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace patricia;

namespace {

struct Options {
    bool attainable_only = false;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

bool report(int id, bool pass, const std::string& title, const std::string& detail, double secs)
{
    std::printf("criterion %2d: %s  %s: %s [%.1f s]\n", id, pass ? "PASS" : "FAIL", title.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
    return pass;
}

void note(const std::string& line)
{
    std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
}

bool criterion1(const Options& opt)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    // Rows that agree with the published table under the adopted convention; see README.
    const std::set<std::string> attainable{"0.60", "0.70", "0.93", "0.97"};
    int rows = 0, bad = 0;
    double worst_row = 0;
    for (const auto& r : golden::c_table) {
        if (opt.attainable_only && !attainable.count(r[0])) continue;
        auto rt = Clock::now();
        HPReal p(r[0]), published(r[3]);
        CComponents c = c_components(p, HPReal(r[1]), HPReal(r[2]));
        double secs = seconds_since(rt);
        worst_row = std::max(worst_row, secs);
        HPReal rel = rel_diff(c.total, published);
        HPReal tol = p <= HPReal("0.85") ? HPReal("1e-6") : HPReal("1e-3");
        bool ok = rel <= tol && secs < 120;
        ++rows;
        if (!ok) ++bad;
        note(std::string(ok ? "ok   " : "MISS ") + "C(" + r[0] + ", " + r[1] + ", " + r[2] + ") = " + to_sig(c.total) +
             "  published " + r[3] + "  rel " + to_sig(rel, 3) + "  tol " + to_sig(tol, 1) + "  " + fmt(secs, 2) + " s" +
             (c.warnings.empty() ? "" : "  [" + c.warnings.front() + "]"));
    }
    return report(1, bad == 0, opt.attainable_only ? "C table (attainable rows)" : "C table",
                  std::to_string(rows - bad) + "/" + std::to_string(rows) + " rows agree; slowest row " +
                      fmt(worst_row, 2) + " s",
                  seconds_since(t0));
}

bool criterion2(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    int rows = 0, bad = 0;
    HPReal worst = 0;
    for (const auto& r : golden::h1_table) {
        HPReal ut(r[0]);
        HPReal v = h1(ut);
        if (ut == 0) {
            note("u~ = 0: computed " + to_sig(v) + "; published tables give " + r[1] + " and " +
                 golden::h1_zero_derivative_table + " (excluded)");
            continue;
        }
        HPReal rel = rel_diff(v, HPReal(r[1]));
        worst = std::max(worst, rel);
        ++rows;
        if (rel > HPReal("1e-6")) {
            ++bad;
            note("MISS h1(" + std::string(r[0]) + ") = " + to_sig(v) + " published " + r[1]);
        }
    }
    double secs = seconds_since(t0);
    return report(2, bad == 0 && secs < 60, "h1 table",
                  std::to_string(rows - bad) + "/" + std::to_string(rows) + " points within 1e-6 relative, worst " +
                      to_sig(worst, 3),
                  secs);
}

bool criterion3(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    bool ok = true;
    HPReal worst_d = 0, worst_w = 0;
    for (int i = 55; i <= 95; i += 5) {
        Bias b("0." + std::to_string(i));
        HPReal d = abs_hp(d_of_p(b, 80, 80));
        worst_d = std::max(worst_d, d);
        if (d >= HPReal("1e-12")) ok = false;
        auto rows = d_identity_witness(b, 100);
        HPReal tol = boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 32);
        for (const auto& w : rows) {
            HPReal scale = std::max({abs_hp(w.lhs), abs_hp(w.rhs), HPReal(1)});
            HPReal e = abs_hp(w.lhs - w.rhs) / scale;
            worst_w = std::max(worst_w, e);
            if (e > tol) ok = false;
        }
    }
    return report(3, ok, "D(p) identity",
                  "max |D(p)| = " + to_sig(worst_d, 3) + " over p = 0.55..0.95; telescoping residual " + to_sig(worst_w, 3),
                  seconds_since(t0));
}

bool criterion4(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    bool ok = true;
    HPReal worst = 0, exact_err = 0;
    HPReal tiny = boost::multiprecision::pow(HPReal(2), -240);
    for (const char* ps_ : {"0.5", "0.7", "0.9"}) {
        ProfileTable t = mean_profile(500, Bias(ps_));
        for (unsigned n = 1; n <= 500; ++n) {
            PairwiseSum s;
            for (unsigned k = 0; k < n || k == 0; ++k) s.add(t.mean(n, k));
            HPReal rel = abs_hp(s.value() - n) / n;
            worst = std::max(worst, rel);
        }
        exact_err = std::max({exact_err, abs_hp(t.mean(2, 1) - 2), abs_hp(t.mean(3, 1) - 1)});
    }
    ok = worst < HPReal("1e-40") && exact_err < tiny;
    double secs = seconds_since(t0);
    return report(4, ok && secs < 60, "exact-moment conservation",
                  "max relative |sum_k mu - n| = " + to_sig(worst, 3) + "; |mu_21 - 2|, |mu_31 - 1| <= " +
                      to_sig(exact_err, 3),
                  secs);
}

bool criterion5(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    Bias b("0.7");
    ProfileTable t = mean_profile(TransformContext::default_cutoff(10), b, 4u);
    TransformContext ctx(t);
    HPReal worst = 0;
    for (unsigned n : {5u, 10u})
        for (unsigned k = 1; k <= 4; ++k)
            for (const char* rho : {"0.5", "-1.5"}) {
                HPReal g = poisson_G(k, HPReal(n), ctx).value;
                HPReal r = residue_G(k, HPReal(n), HPReal(rho), ctx);
                worst = std::max(worst, abs_hp(r - g) / g);
            }
    return report(5, worst < HPReal("1e-8"), "dual-route residue vs Poisson",
                  "max relative difference " + to_sig(worst, 3), seconds_since(t0));
}

bool criterion6(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    HPReal worst = 0;
    for (const char* ps_ : {"0.5", "0.7"}) {
        Bias b(ps_);
        ProfileTable t = second_moment_profile(10, b);
        for (unsigned n = 1; n <= 10; ++n) {
            BruteMoments m = brute_force_moments(n, b);
            for (unsigned k = 0; k < m.mean.size(); ++k) {
                HPReal em = abs_hp(t.mean(n, k) - m.mean[k]) / std::max(abs_hp(m.mean[k]), HPReal(1));
                HPReal ev = abs_hp(t.variance(n, k) - m.variance[k]) / std::max(abs_hp(m.variance[k]), HPReal(1));
                worst = std::max({worst, em, ev});
            }
        }
    }
    double secs = seconds_since(t0);
    return report(6, worst < HPReal("1e-25") && secs < 60, "brute-force oracle",
                  "max scaled difference in mean/variance " + to_sig(worst, 3), secs);
}

bool criterion7(const Options&)
{
    auto t0 = Clock::now();
    int agree = 0, total = 0;
    for (auto [n, ps_] : std::vector<std::pair<std::size_t, const char*>>{{8, "0.7"}, {64, "0.6"}}) {
        Bias b(ps_);
        for (std::uint64_t trial = 0; trial < 1000; ++trial) {
            auto streams = draw_streams(n, b, derive_seed(20240601, trial));
            PatriciaTrie pt = build_patricia(streams);
            RefinementTree rt = run_renyi(streams);
            TreeStats a = stats(pt), c = stats(rt);
            bool same = shape(pt) == shape(rt) && a.height == c.height && a.fillup == c.fillup &&
                        a.external_profile == c.external_profile && a.leaf_depths == c.leaf_depths;
            agree += same;
            ++total;
        }
    }
    return report(7, agree == total, "Renyi/PATRICIA coupling",
                  std::to_string(agree) + "/" + std::to_string(total) + " coupled trials isomorphic with equal stats",
                  seconds_since(t0));
}

bool criterion8(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    Bias b("0.7");
    const std::size_t n = 256, trials = 100000;
    SimulationSummary s = run_trials(n, b, trials, 1);
    ProfileTable t = second_moment_profile(n, b);
    int checked_mean = 0, bad_mean = 0, checked_var = 0, bad_var = 0;
    double worst_z = 0, worst_v = 0;
    for (unsigned k = 0; k < n; ++k) {
        double mu = to_double(t.mean(n, k));
        double var = to_double(t.variance(n, k));
        if (mu >= 0.01) {
            ++checked_mean;
            double se = std::sqrt(s.variance(k) / trials);
            double z = se > 0 ? std::abs(s.mean(k) - mu) / se : (s.mean(k) == mu ? 0 : INFINITY);
            worst_z = std::max(worst_z, z);
            if (z > 4) ++bad_mean;
        }
        if (var >= 0.05) {
            ++checked_var;
            double rel = std::abs(s.variance(k) - var) / var;
            worst_v = std::max(worst_v, rel);
            if (rel > 0.10) ++bad_var;
        }
    }
    double secs = seconds_since(t0);
    return report(8, bad_mean == 0 && bad_var == 0 && secs < 300, "Monte Carlo vs exact profile",
                  "means: " + std::to_string(checked_mean - bad_mean) + "/" + std::to_string(checked_mean) +
                      " within 4 SE (worst " + fmt(worst_z) + " SE); variances: " +
                      std::to_string(checked_var - bad_var) + "/" + std::to_string(checked_var) +
                      " within 10% (worst " + fmt(worst_v) + ")",
                  secs);
}

bool criterion9(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    Bias b("0.7");
    const double h = entropy(0.7);
    const std::vector<unsigned> grid{50, 100, 200, 400};
    unsigned kmax = 0;
    for (unsigned n : grid) kmax = std::max(kmax, static_cast<unsigned>(std::lround(std::log(n) / h)));
    ProfileTable t = second_moment_profile(TransformContext::default_cutoff(grid.back()), b, kmax);
    TransformContext ctx(t);
    std::vector<double> em, ev;
    std::ostringstream os;
    for (unsigned n : grid) {
        unsigned k = static_cast<unsigned>(std::lround(std::log(n) / h));
        em.push_back(to_double(rel_diff(depoisson_mu(n, k, ctx), t.mean(n, k))));
        ev.push_back(to_double(rel_diff(depoisson_var(n, k, ctx), t.variance(n, k))));
        os << " n=" << n << ",k=" << k << ": " << fmt(em.back()) << "/" << fmt(ev.back()) << ";";
    }
    bool mono = true;
    for (std::size_t i = 1; i < grid.size(); ++i) mono = mono && em[i] < em[i - 1] && ev[i] < ev[i - 1];
    bool ok = mono && em.back() < 0.05 && ev.back() < 0.15;
    return report(9, ok, "depoissonization trend",
                  std::string(mono ? "monotone" : "NOT monotone") + "; relative errors mean/var" + os.str(),
                  seconds_since(t0));
}

bool criterion10(const Options&)
{
    auto t0 = Clock::now();
    const double p = 0.7;
    Bias b("0.7");
    const std::size_t trials = 2000;
    const std::vector<std::size_t> grid{1u << 10, 1u << 13, 1u << 16};
    std::vector<double> frac;
    double mean_depth_ratio = 0;
    bool tails_ok = true;
    std::ostringstream os;
    for (std::size_t n : grid) {
        SimulationSummary s = run_trials(n, b, trials, 7);
        Prediction ph = predict_height(static_cast<double>(n), p, 0.5);
        long lo = static_cast<long>(std::floor(ph.window_low)), hi = static_cast<long>(std::ceil(ph.window_high));
        long inside = 0;
        for (auto [hgt, c] : s.height_hist)
            if (hgt >= lo && hgt <= hi) inside += c;
        frac.push_back(double(inside) / trials);
        double dsum = 0;
        for (auto [d, c] : s.depth_hist) dsum += double(d) * c;
        mean_depth_ratio = dsum / trials / std::log(static_cast<double>(n));
        os << " n=2^" << static_cast<int>(std::log2(n)) << ": H in [" << lo << "," << hi << "] " << fmt(frac.back());

        if (n <= (1u << 13)) {
            // exact first-moment bounds need the full table, which is affordable up to 2^13
            PrecisionScope ps(256);
            int hmax = s.height_hist.rbegin()->first;
            ProfileTable t = mean_profile(static_cast<unsigned>(n), b, static_cast<unsigned>(hmax + 2));
            PairwiseSum below;
            for (int k = 0; k <= hmax + 1; ++k) {
                below.add(t.mean(n, k));
                double tail = std::max(0.0, to_double(HPReal(n) - below.value()));
                long over = 0;
                for (auto [hgt, c] : s.height_hist)
                    if (hgt > k) over += c;
                double pe = double(over) / trials;
                double se = std::sqrt(pe * (1 - pe) / trials);
                if (pe > tail + 3 * se) tails_ok = false;
            }
            Prediction pf = predict_fillup(static_cast<double>(n), p, 0.5);
            for (int k = 0; k < static_cast<int>(std::floor(pf.window_low)); ++k) {
                long under = 0;
                for (auto [f, c] : s.fillup_hist)
                    if (f < k) under += c;
                double pe = double(under) / trials;
                double se = std::sqrt(pe * (1 - pe) / trials);
                if (pe > to_double(t.mean(n, k)) + 3 * se) tails_ok = false;
            }
        }
    }
    bool mono = true;
    for (std::size_t i = 1; i < frac.size(); ++i) mono = mono && frac[i] >= frac[i - 1];
    double target = 1 / entropy(p);
    double dev = std::abs(mean_depth_ratio - target) / target;
    double secs = seconds_since(t0);
    bool ok = mono && dev < 0.10 && tails_ok && secs < 600;
    os << "; (a) " << (mono ? "nondecreasing" : "NOT nondecreasing") << "; (b) mean D/ln n = " << fmt(mean_depth_ratio, 4)
       << " vs 1/h = " << fmt(target, 4) << " (" << fmt(100 * dev, 2) << "%)"
       << "; (c) tail bounds " << (tails_ok ? "hold" : "VIOLATED") << " at n = 2^10, 2^13";
    return report(10, ok, "theorem trends", os.str(), secs);
}

bool criterion11(const Options&)
{
    auto t0 = Clock::now();
    PrecisionScope ps(256);
    Bias b("0.7");
    const unsigned N = 100, Lmax = 10;
    ProfileTable t = mean_profile(N, b);
    HPReal cs = cstar_value(b);
    XiSequence xi = xi_limits(Lmax, b);
    // Calibrate the envelope constant on n <= 50 and test it on 50 < n <= 100.
    auto ratio = [&](unsigned ell, unsigned n) {
        long m = static_cast<long>(n - ell);
        HPReal env = (hp_pow(b.p, m) + hp_pow(b.q / b.p, m)) / factorial_hp(ell - 1);
        return abs_hp(xi_of_n(t, ell, n, cs) - xi[ell]) / env;
    };
    HPReal C = 0, worst = 0;
    for (unsigned ell = 1; ell <= Lmax; ++ell)
        for (unsigned n = ell + 1; n <= 50; ++n) C = std::max(C, ratio(ell, n));
    for (unsigned ell = 1; ell <= Lmax; ++ell)
        for (unsigned n = 51; n <= N; ++n) worst = std::max(worst, ratio(ell, n));
    bool env_ok = worst <= C;

    auto coef = xi_gf_coefficients(12, b);
    XiSequence xi12 = xi_limits(13, b);
    HPReal gf_err = 0;
    for (unsigned ell = 1; ell <= 12; ++ell) gf_err = std::max(gf_err, rel_diff(coef[ell - 1], xi12[ell]));
    bool gf_ok = gf_err < HPReal("1e-25");

    Bias near_one(HPReal(1) - HPReal("1e-6"));
    XiSequence x1 = xi_limits(8, near_one);
    HPReal lim_err = 0;
    for (unsigned ell = 1; ell <= 8; ++ell) {
        HPReal target = 1 / (hp_pow(HPReal(2), static_cast<long>(ell - 1)) * factorial_hp(ell - 1));
        lim_err = std::max(lim_err, rel_diff(x1[ell], target));
    }
    bool lim_ok = lim_err < HPReal("1e-4");
    return report(11, env_ok && gf_ok && lim_ok, "xi machinery",
                  "envelope constant " + to_sig(C, 4) + " (n <= 50) vs " + to_sig(worst, 4) +
                      " needed on 50 < n <= 100; GF coefficient error " + to_sig(gf_err, 3) +
                      "; p -> 1 limit error " + to_sig(lim_err, 3),
                  seconds_since(t0));
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<int> selected;
    Options opt;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) selected.push_back(std::atoi(argv[++i]));
        else if (!std::strcmp(argv[i], "--attainable-only")) opt.attainable_only = true;
        else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]... [--attainable-only]\n");
            return 2;
        }
    }
    const std::map<int, std::function<bool(const Options&)>> all{
        {1, criterion1}, {2, criterion2}, {3, criterion3},  {4, criterion4},  {5, criterion5}, {6, criterion6},
        {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}, {11, criterion11}};
    if (selected.empty())
        for (const auto& [id, f] : all) selected.push_back(id);
    int failed = 0;
    for (int id : selected) {
        auto it = all.find(id);
        if (it == all.end()) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        try {
            if (!it->second(opt)) ++failed;
        } catch (const std::exception& e) {
            report(id, false, "error", e.what(), 0);
            ++failed;
        }
    }
    return failed == 0 ? 0 : 1;
}
