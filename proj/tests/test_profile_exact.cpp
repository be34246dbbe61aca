#include "patricia/brute_force.hpp"
#include "patricia/profile_exact.hpp"
#include "patricia/simulator.hpp"
#include "patricia/xi_engine.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace patricia;

namespace {

HPReal tiny() { return boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 12); }

} // namespace

TEST_CASE("small mean profiles by hand", "[profile_exact]")
{
    PrecisionScope ps(256);
    for (const char* p : {"0.5", "0.6", "0.7", "0.95"}) {
        ProfileTable t = second_moment_profile(12, Bias(p));
        CHECK(abs_hp(t.mean(2, 1) - 2) < tiny());
        CHECK(abs_hp(t.mean(3, 1) - 1) < tiny());
        CHECK(abs_hp(t.mean(3, 2) - 2) < tiny());
        CHECK(t.mean(1, 0) == 1);
        CHECK(abs_hp(t.second(2, 1) - 4) < tiny());
        CHECK(abs_hp(t.variance(3, 1)) < tiny());
        for (unsigned n = 2; n <= 12; ++n)
            for (unsigned k = 0; k <= n + 2; ++k) {
                if (k >= n) REQUIRE(t.mean(n, k) == 0);
                REQUIRE(t.mean(n, k) >= 0);
                REQUIRE(t.mean(n, k) <= n + tiny());
                if (k < n) REQUIRE(t.variance(n, k) >= -tiny());
            }
    }
    CHECK_THROWS_AS(mean_profile(0, Bias("0.7")), domain_error);
}

TEST_CASE("conservation of leaves", "[profile_exact]")
{
    PrecisionScope ps(256);
    for (const char* p : {"0.5", "0.7", "0.9"}) {
        ProfileTable t = mean_profile(150, Bias(p));
        for (unsigned n = 1; n <= 150; ++n) {
            PairwiseSum s;
            for (unsigned k = 0; k < std::max(n, 1u); ++k) s.add(t.mean(n, k));
            REQUIRE(abs_hp(s.value() - n) / n < tiny());
        }
    }
}

TEST_CASE("recurrence matches exhaustive enumeration", "[profile_exact]")
{
    PrecisionScope ps(256);
    for (const char* p : {"0.5", "0.7"}) {
        Bias b(p);
        ProfileTable t = second_moment_profile(10, b);
        for (unsigned n = 1; n <= 10; ++n) {
            BruteMoments m = brute_force_moments(n, b);
            REQUIRE(abs_hp(m.total_probability - 1) < tiny());
            for (unsigned k = 0; k < m.mean.size(); ++k) {
                REQUIRE(abs_hp(t.mean(n, k) - m.mean[k]) < HPReal("1e-25") * std::max(m.mean[k], HPReal(1)));
                REQUIRE(abs_hp(t.variance(n, k) - m.variance[k]) < HPReal("1e-25") * std::max(m.variance[k], HPReal(1)));
            }
        }
    }
}

TEST_CASE("symmetric bias gives a p/q-symmetric recurrence", "[profile_exact]")
{
    PrecisionScope ps(256);
    // swapping p and q permutes the split weights; at p = 1/2 the table is unchanged by construction
    Bias b("0.5");
    ProfileTable t = mean_profile(30, b);
    std::vector<HPReal> half(31);
    half[0] = 1;
    for (unsigned i = 1; i <= 30; ++i) half[i] = half[i - 1] / 2;
    for (unsigned n = 2; n <= 30; ++n) {
        auto w = detail::split_weights(n, half, half);
        for (unsigned j = 0; j <= n; ++j) REQUIRE(w[j] == w[n - j]);
    }
    // mu_{4,1}: split sizes (1,3),(3,1) give one depth-1 leaf each; (2,2) gives none
    HPReal w13 = HPReal(4) / 16, d = 1 - HPReal(2) / 16;
    CHECK(abs_hp(t.mean(4, 1) - 2 * w13 / d) < tiny());
}

TEST_CASE("depth distribution", "[profile_exact]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    ProfileTable t = mean_profile(50, b);
    auto d2 = depth_pmf(t, 2);
    CHECK(abs_hp(d2[1] - 1) < tiny());
    auto d3 = depth_pmf(t, 3);
    CHECK(abs_hp(d3[1] - HPReal(1) / 3) < tiny());
    CHECK(abs_hp(d3[2] - HPReal(2) / 3) < tiny());
    auto d50 = depth_pmf(t, 50);
    CHECK(abs_hp(pairwise_sum(d50) - 1) < tiny());
    CHECK_THROWS_AS(depth_pmf(t, 51), domain_error);

    // empirical depth histogram at n = 50
    const std::size_t trials = 20000;
    SimulationSummary s = run_trials(50, b, trials, 123);
    for (unsigned k = 1; k < 50; ++k) {
        double pk = to_double(d50[k]);
        if (pk < 1e-3) continue;
        double emp = s.depth_hist.count(k) ? double(s.depth_hist.at(k)) / trials : 0.0;
        double se = std::sqrt(pk * (1 - pk) / trials);
        REQUIRE(std::abs(emp - pk) <= 4 * se);
    }
}

TEST_CASE("first-moment tail bounds against simulation", "[profile_exact]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    ProfileTable t = second_moment_profile(256, b);
    TailBounds tb = tail_bounds(mean_profile(2, b), 2, 1);
    CHECK(tb.height_tail == 0);
    CHECK_FALSE(tb.cheb.has_value());
    TailBounds tb2 = tail_bounds(t, 256, 10);
    REQUIRE(tb2.cheb.has_value());
    CHECK(*tb2.cheb >= 0);

    const std::size_t trials = 20000;
    SimulationSummary s = run_trials(256, b, trials, 77);
    for (unsigned k = 0; k < 60; ++k) {
        long over = 0, under = 0;
        for (auto [h, c] : s.height_hist)
            if (h > static_cast<int>(k)) over += c;
        for (auto [f, c] : s.fillup_hist)
            if (f < static_cast<int>(k)) under += c;
        double ph = double(over) / trials, pf = double(under) / trials;
        TailBounds bk = tail_bounds(t, 256, k);
        REQUIRE(ph <= to_double(bk.height_tail) + 3 * std::sqrt(ph * (1 - ph) / trials));
        if (k <= 8) REQUIRE(pf <= to_double(bk.fillup_lower) + 3 * std::sqrt(pf * (1 - pf) / trials));
    }
}

TEST_CASE("C_* product", "[profile_exact]")
{
    PrecisionScope ps(256);
    CHECK_THROWS_AS(cstar(Bias("0.5"), HPReal("1e-30")), domain_error);
    Bias b("0.7");
    CertifiedValue a = cstar(b, HPReal("1e-30")), c = cstar(b, HPReal("1e-60"));
    CHECK(a.terms < c.terms);
    CHECK(rel_diff(a.value, c.value) <= a.error_bound);
    CHECK(a.error_bound < HPReal("2e-30"));
    // factor limits as p -> 1: factor j >= 3 tends to 1
    Bias near(HPReal(1) - HPReal("1e-12"));
    HPReal p = near.p, q = near.q;
    HPReal f3 = (1 + hp_pow(q / p, 1L)) / (1 - hp_pow(p, 3L) - hp_pow(q, 3L));
    CHECK(f3 > 1e10);  // (1 - p^3 - q^3) ~ 3q, so the factor blows up like 1/(3q)
    HPReal f2 = 2 / (1 - p * p - q * q);
    CHECK(rel_diff(f2, 1 / (p * q)) < HPReal("1e-20"));
}

TEST_CASE("xi_l(n) converges to the limit coefficients", "[profile_exact]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    ProfileTable t = mean_profile(120, b);
    HPReal cs = cstar_value(b);
    XiSequence xi = xi_limits(10, b);
    CHECK(abs_hp(xi_of_n(t, 1, 120, cs) - 1) < HPReal("1e-15"));
    CHECK(abs_hp(xi_of_n(t, 2, 120, cs) - HPReal("0.5")) < HPReal("1e-12"));
    for (unsigned ell = 1; ell <= 6; ++ell) {
        HPReal e40 = abs_hp(xi_of_n(t, ell, 40, cs) - xi[ell]);
        HPReal e80 = abs_hp(xi_of_n(t, ell, 80, cs) - xi[ell]);
        REQUIRE(e80 < e40);
    }
    CHECK_THROWS_AS(xi_of_n(t, 0, 10, cs), domain_error);
    CHECK_THROWS_AS(xi_of_n(t, 10, 10, cs), domain_error);
}
