#include "patricia/poisson_mellin.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace patricia;

namespace {

const ProfileTable& table_07()
{
    static const ProfileTable t = [] {
        PrecisionScope ps(256);
        return second_moment_profile(TransformContext::default_cutoff(100), Bias("0.7"), 12u);
    }();
    return t;
}

} // namespace

TEST_CASE("T(s) at integers", "[poisson_mellin]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    HPReal tol("1e-70");
    CHECK(T(0L, b) == 2);
    CHECK(abs_hp(T(-1L, b) - 1) < tol);
    CHECK(abs_hp(T(-2L, b) - (1 - 2 * b.p * b.q)) < tol);
    CHECK(abs_hp(T(HPReal("-2"), b) - T(-2L, b)) < tol);
}

TEST_CASE("Poisson transform of the mean profile", "[poisson_mellin]")
{
    PrecisionScope ps(256);
    const ProfileTable& t = table_07();
    TransformContext ctx(t);
    HPReal tol("1e-60");
    for (const char* z : {"0.5", "3", "40"}) {
        HPReal Z(z);
        CHECK(abs_hp(poisson_G(0, Z, ctx).value - Z * exp_hp(-Z)) < tol);
        HPReal total = 0;
        for (unsigned k = 0; k <= 12; ++k) {
            HPReal g = poisson_G(k, Z, ctx).value;
            REQUIRE(g >= 0);
            REQUIRE(g <= Z);
            total += g;
        }
        CHECK(total <= Z * (1 + tol));
    }
    for (unsigned k = 1; k <= 6; ++k)
        for (const char* z : {"2", "7.5", "20"}) REQUIRE(abs_hp(functional_equation_residual(k, HPReal(z), ctx)) < HPReal("1e-20"));
    CHECK_THROWS_AS(poisson_G(1, HPReal(0), ctx), domain_error);
    CHECK_THROWS_AS(poisson_G(1, HPReal(5000), ctx), precision_error);
    CHECK_THROWS_AS(functional_equation_residual(0, HPReal(1), ctx), domain_error);
}

TEST_CASE("depoissonization corrections", "[poisson_mellin]")
{
    PrecisionScope ps(256);
    const ProfileTable& t = table_07();
    TransformContext ctx(t);
    double h = -(0.7 * std::log(0.7) + 0.3 * std::log(0.3));
    for (unsigned n : {50u, 100u}) {
        unsigned k = static_cast<unsigned>(std::lround(std::log(n) / h));
        REQUIRE(rel_diff(depoisson_mu(n, k, ctx), t.mean(n, k)) < HPReal("0.05"));
        REQUIRE(rel_diff(depoisson_var(n, k, ctx), t.variance(n, k)) < HPReal("0.15"));
        REQUIRE(poisson_variance(k, HPReal(n), ctx).value >= 0);
    }
    ProfileTable no_second = mean_profile(300, Bias("0.7"), 4u);
    TransformContext c2(no_second);
    CHECK_THROWS_AS(poisson_variance(1, HPReal(10), c2), domain_error);
}

TEST_CASE("A_k(s) structure", "[poisson_mellin]")
{
    PrecisionScope ps(256);
    const ProfileTable& t = table_07();
    TransformContext ctx(t);
    HPReal tol("1e-50");
    CHECK(abs_hp(a_k(HPReal(-1), 2, 400, ctx)) < tol);
    CHECK(abs_hp(a_k(HPReal(-2), 3, 400, ctx)) < tol);
    for (const char* s : {"-0.5", "0", "1.5", "3"}) CHECK(abs_hp(a_k(HPReal(s), 0, 400, ctx) - 1) < tol);
    for (unsigned k = 1; k <= 3; ++k) {
        HPReal lo = a_k(HPReal("-1.000001"), k, 400, ctx);
        HPReal hi = a_k(HPReal("-0.999999"), k, 400, ctx);
        REQUIRE(abs_hp(lo - hi) < HPReal("1e-4"));
    }
    CHECK_THROWS_AS(a_k(HPReal(1), 13, 400, ctx), domain_error);
    CHECK_THROWS_AS(a_k(HPReal(1), 2, 2000, ctx), precision_error);
}

TEST_CASE("kappa and the residue representation", "[poisson_mellin]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    HPReal n(10);
    // k = j leaves the single term T(-m) n^m e^{-n}/m!
    for (unsigned m : {1u, 4u, 9u}) {
        HPReal single = T(-static_cast<long>(m), b) * hp_pow(n, static_cast<long>(m)) * exp_hp(-n) / factorial_hp(m);
        REQUIRE(rel_diff(kappa(m, 3, n, 3, HPReal("0.5"), b), single) < HPReal("1e-60"));
    }
    // with rho close enough to zero the tail starts at l = 0 and both forms coincide
    for (unsigned m : {1u, 3u, 6u})
        for (unsigned j = 0; j <= 3; ++j)
            REQUIRE(rel_diff(kappa(m, j, n, 3, HPReal("-0.5"), b), kappa(m, j, n, 3, HPReal("0.5"), b)) < HPReal("1e-50"));
    CHECK_THROWS_AS(kappa(1, 4, n, 3, HPReal("0.5"), b), domain_error);
    CHECK_THROWS_AS(kappa(1, 1, n, 3, HPReal("-2"), b), domain_error);

    PrecisionScope inner(256);
    ProfileTable t = mean_profile(TransformContext::default_cutoff(10), b, 4u);
    TransformContext ctx(t);
    for (unsigned k = 1; k <= 4; ++k)
        for (const char* rho : {"0.5", "-0.5", "-1.5"}) {
            HPReal g = poisson_G(k, n, ctx).value;
            REQUIRE(rel_diff(residue_G(k, n, HPReal(rho), ctx), g) < HPReal("1e-8"));
        }
}
