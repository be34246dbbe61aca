#include "patricia/profile_exact.hpp"
#include "patricia/xi_engine.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace patricia;

TEST_CASE("limit coefficients: closed forms", "[xi_engine]")
{
    PrecisionScope ps(256);
    HPReal tol("1e-70");
    for (const char* p : {"0.5", "0.6", "0.7", "0.93"}) {
        Bias b(p);
        XiSequence xi = xi_limits(12, b);
        CHECK(xi[1] == 1);
        CHECK(abs_hp(xi[2] - HPReal("0.5")) < tol);
        HPReal xi3 = (b.p / 4 + b.q / 6) / (1 + b.p);
        CHECK(abs_hp(xi[3] - xi3) < tol);
    }
    CHECK_THROWS_AS(xi_limits(0, Bias("0.7")), domain_error);
}

TEST_CASE("limit coefficients decay factorially", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    XiSequence a = xi_limits(40, b), c = xi_limits(120, b);
    CHECK(a.c1 == c.c1);  // the maximum of xi_l (l-1)! is attained early
    HPReal f = 1;
    for (unsigned l = 1; l <= 120; ++l) {
        if (l > 1) f *= l - 1;
        REQUIRE(c[l] * f <= c.c1);
        REQUIRE(c[l] > 0);
    }
}

TEST_CASE("near p = 1 the coefficients approach 1/(2^(l-1) (l-1)!)", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b(HPReal(1) - HPReal("1e-6"));
    XiSequence xi = xi_limits(8, b);
    for (unsigned l = 1; l <= 8; ++l) {
        HPReal target = 1 / (hp_pow(HPReal(2), static_cast<long>(l - 1)) * factorial_hp(l - 1));
        REQUIRE(rel_diff(xi[l], target) < HPReal("1e-4"));
    }
}

TEST_CASE("generating function product", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    CHECK(xi_gf(HPReal(0), b).value == 1);
    auto coef = xi_gf_coefficients(12, b);
    XiSequence xi = xi_limits(13, b);
    for (unsigned l = 1; l <= 13; ++l) REQUIRE(rel_diff(coef[l - 1], xi[l]) < HPReal("1e-25"));
    // X(z) = exp(z/2 + O(q z^2)) for |q z| <= 1
    for (const char* p : {"0.7", "0.9", "0.99"}) {
        Bias bb(p);
        for (const char* z : {"0.25", "1", "3"}) {
            HPReal Z(z);
            if (bb.q * Z > 1) continue;
            ProductValue X = xi_gf(Z, bb);
            REQUIRE(X.tail_bound < HPReal("1e-60"));
            REQUIRE(abs_hp(log_hp(X.value) - Z / 2) <= HPReal("0.05") * bb.q * Z * Z);
        }
    }
}

TEST_CASE("Poisson transform of l! xi_l", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    for (const char* z : {"0.001", "1", "50", "1e4"}) CHECK(xi_poisson(HPReal(z), b) > 0);
    CHECK_THROWS_AS(xi_poisson(HPReal(0), b), domain_error);

    // the ratio to the exact coefficients tends to 1, monotonically once l >= 20
    XiSequence xi = xi_limits(2560, b);
    HPReal prev = 10;
    for (unsigned l = 20; l <= 2560; l *= 2) {
        HPReal r = xi_asymptotic(l, b) / xi[l];
        REQUIRE(r > 1);
        REQUIRE(r < prev);
        prev = r;
    }
    CHECK(prev < HPReal("1.08"));

    // growth: xi~(z) = z^{1/2 + log q/log p} exp(-log^2 z / (2 log(1/p))) Theta(1)
    auto normalized = [&](const HPReal& z, const HPReal& expo) {
        HPReal lz = log_hp(z);
        return xi_poisson(z, b) / (hp_pow(z, expo) * exp_hp(-lz * lz / (2 * log_hp(1 / b.p))));
    };
    HPReal e = log_hp(b.q) / log_hp(b.p);
    HPReal lo = 1e9, hi = 0, lo_pub = 1e9, hi_pub = 0;
    for (const char* z : {"100", "300", "1000", "3000", "10000"}) {
        HPReal a = normalized(HPReal(z), e + HPReal("0.5"));
        HPReal c = normalized(HPReal(z), e + HPReal("1.5"));
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        lo_pub = std::min(lo_pub, c);
        hi_pub = std::max(hi_pub, c);
    }
    CHECK(hi / lo < HPReal("1.001"));
    // the exponent 3/2 + log q/log p leaves a residual factor 1/z
    CHECK(hi_pub / lo_pub > 50);
}

TEST_CASE("diagonal approximation and the upper bound", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    ProfileTable t = mean_profile(80, b);
    XiSequence xi = xi_limits(20, b);
    HPReal cs = cstar_value(b);
    HPReal prev = 1;
    for (unsigned n : {20u, 40u, 80u}) {
        HPReal err = abs_hp(knessl_mu(n, 1, b, xi, cs) / t.mean(n, n - 1) - 1);
        REQUIRE(err < prev);
        prev = err;
    }
    CHECK(prev < HPReal("1e-10"));
    CHECK_THROWS_AS(knessl_mu(5, 5, b, xi, cs), domain_error);

    HPReal C = calibrate_mu_upper(t, 60);
    for (unsigned n = 2; n <= 60; ++n)
        for (unsigned k = 1; k < n; ++k) REQUIRE(mu_upper(n, k, b, C) >= t.mean(n, k));
}

TEST_CASE("xi_l(n) error envelope", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    ProfileTable t = mean_profile(100, b);
    XiSequence xi = xi_limits(10, b);
    HPReal cs = cstar_value(b);
    // The observed error carries an extra factor (n - l) over (p^{n-l} + (q/p)^{n-l})/(l-1)!;
    // with that factor one constant fitted on n <= 50 covers n <= 100.
    auto ratio = [&](unsigned l, unsigned n) {
        long m = static_cast<long>(n - l);
        HPReal env = m * (hp_pow(b.p, m) + hp_pow(b.q / b.p, m)) / factorial_hp(l - 1);
        return abs_hp(xi_of_n(t, l, n, cs) - xi[l]) / env;
    };
    HPReal C = 0;
    for (unsigned l = 1; l <= 10; ++l)
        for (unsigned n = l + 1; n <= 50; ++n) C = std::max(C, ratio(l, n));
    for (unsigned l = 1; l <= 10; ++l)
        for (unsigned n = 51; n <= 100; ++n) REQUIRE(ratio(l, n) <= C);
}

TEST_CASE("small-level approximation", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    ProfileTable t = mean_profile(200, b, 4u);
    for (unsigned m = 2; m <= 20; ++m) CHECK(mu_smallj(m, 0, b) == 0);
    HPReal prev = 1;
    for (unsigned m : {20u, 40u, 80u}) {
        HPReal err = abs_hp(mu_smallj(m, 1, b) / t.mean(m, 1) - 1);
        REQUIRE(err < prev);
        prev = err;
    }
    for (unsigned j = 1; j <= 4; ++j) CHECK(t.mean(200, j) - t.mean(200, j - 1) > 0);
}

TEST_CASE("the double series D(p) vanishes", "[xi_engine]")
{
    PrecisionScope ps(256);
    for (const char* p : {"0.55", "0.65", "0.75", "0.85", "0.95"}) {
        Bias b(p);
        HPReal d80 = d_of_p(b, 80, 80);
        REQUIRE(abs_hp(d80) < HPReal("1e-12"));
        REQUIRE(abs_hp(d80 - d_of_p(b, 120, 120)) < HPReal("1e-15"));
    }
    // single (L, M) = (0, 0) term is xi_1 = 1, so the cancellation is not termwise
    CHECK(abs_hp(d_of_p(Bias("0.7"), 1, 1)) > HPReal("0.01"));
}

TEST_CASE("telescoping witness", "[xi_engine]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    auto rows = d_identity_witness(b, 60);
    CHECK(rows[0].Q_N == 1);
    HPReal tol = boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 32);
    for (const auto& w : rows) REQUIRE(abs_hp(w.lhs - w.rhs) <= tol * std::max({abs_hp(w.lhs), abs_hp(w.rhs), HPReal(1)}));
    // Q_N p^{N(N+1)/2} decays superexponentially
    for (unsigned N = 10; N + 10 <= 60; N += 10) REQUIRE(abs_hp(rows[N + 10].rhs) < abs_hp(rows[N].rhs) * HPReal("1e-20"));
    CHECK_THROWS_AS(d_identity_witness(b, 0), domain_error);
}
