#include "patricia/asymptotics.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

using namespace patricia;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("entropy", "[asymptotics]")
{
    CHECK_THAT(entropy(0.5), WithinRel(std::log(2.0), 1e-15));
    for (double p : {0.1, 0.3, 0.45}) CHECK_THAT(entropy(p), WithinRel(entropy(1 - p), 1e-14));
    CHECK(entropy(1.0) == 0);
    CHECK(entropy(0.7) < entropy(0.6));
}

TEST_CASE("height and fillup predictions", "[asymptotics]")
{
    double n = std::ldexp(1.0, 20);
    CHECK_THAT(predict_height(n, 0.5).point_estimate, WithinAbs(26.3245553203368, 1e-9));
    CHECK_THAT(predict_fillup(n, 0.5).point_estimate, WithinAbs(16.2068382780575, 1e-9));
    CHECK_THAT(predict_height(n, 0.7).point_estimate, WithinAbs(40.418696117905, 1e-9));
    CHECK_THAT(predict_fillup(n, 0.7).point_estimate, WithinAbs(10.7114185525605, 1e-9));

    for (double p : {0.5, 0.6, 0.9})
        for (double m : {1e3, 1e6, 1e12}) {
            Prediction h = predict_height(m, p, 0.5), f = predict_fillup(m, p, 0.5);
            Prediction hn = predict_height(m, p, 0.25), fn = predict_fillup(m, p, 0.25);
            CHECK(h.window_low <= h.point_estimate);
            CHECK(h.point_estimate <= h.window_high);
            CHECK(f.window_low <= f.point_estimate);
            CHECK(f.point_estimate <= f.window_high);
            // smaller epsilon gives a nested, narrower window
            CHECK(h.window_low <= hn.window_low);
            CHECK(hn.window_high <= h.window_high);
            CHECK(f.window_low <= fn.window_low);
            CHECK(fn.window_high <= f.window_high);
            CHECK(f.point_estimate < h.point_estimate);
        }
}

TEST_CASE("depth limits", "[asymptotics]")
{
    for (double p : {0.55, 0.7, 0.9}) {
        DepthLimits d = depth_limits(p);
        CHECK(d.liminf < d.typical);
        CHECK(d.typical < d.limsup);
        CHECK_FALSE(d.degenerate);
    }
    DepthLimits half = depth_limits(0.5);
    CHECK(half.degenerate);
    CHECK_THAT(half.liminf, WithinRel(1 / std::log(2.0), 1e-15));
    CHECK_THAT(half.typical, WithinRel(half.liminf, 1e-15));
    CHECK_THAT(half.limsup, WithinRel(half.liminf, 1e-15));
}

TEST_CASE("prediction domains", "[asymptotics]")
{
    CHECK_THROWS_AS(predict_height(2, 0.7), std::domain_error);
    CHECK_THROWS_AS(predict_fillup(15, 0.7), std::domain_error);
    CHECK_THROWS_AS(predict_height(100, 0.4), std::domain_error);
    CHECK_THROWS_AS(predict_fillup(100, 1.0), std::domain_error);
    CHECK_THROWS_AS(depth_limits(0.3), std::domain_error);
}
