#include "patricia/simulator.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace patricia;

TEST_CASE("streams are reproducible and Bernoulli(p)", "[simulator]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    auto a = draw_streams(3, b, 42), c = draw_streams(3, b, 42);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::uint64_t pos = 0; pos < 256; ++pos) REQUIRE(a[i].bit(pos) == c[i].bit(pos));
    CHECK(draw_streams(1, b, 7).size() == 1);
    CHECK_THROWS_AS(draw_streams(0, b, 7), domain_error);

    const std::uint64_t N = 1000000;
    std::uint64_t ones = 0;
    for (std::uint64_t pos = 0; pos < N; ++pos) ones += a[0].bit(pos);
    double mean = double(ones) / N;
    CHECK(std::abs(mean - 0.7) < 3 * std::sqrt(0.21 / N));
    CHECK(bias_threshold(Bias("0.5")) == (std::uint64_t(1) << 63));
}

TEST_CASE("small PATRICIA tries", "[simulator]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    PatriciaTrie one = build_patricia(draw_streams(1, b, 5));
    TreeStats s1 = stats(one);
    CHECK(s1.height == 0);
    CHECK(s1.fillup == -1);
    CHECK(s1.leaf_depths == std::vector<int>{0});
    CHECK(s1.external_profile == std::vector<long>{1});

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        TreeStats s2 = stats(build_patricia(draw_streams(2, b, seed)));
        REQUIRE(s2.height == 1);
        REQUIRE(s2.fillup == 0);
        REQUIRE(s2.external_profile == std::vector<long>{0, 2});
    }

    PatriciaTrie t3 = build_patricia(draw_streams(3, b, 11));
    long leaves = 0;
    for (const auto& nd : t3.nodes) {
        if (nd.leaf >= 0) ++leaves;
        else CHECK((nd.left >= 0 && nd.right >= 0));
    }
    CHECK(leaves == 3);
    TreeStats s3 = stats(t3);
    long total = 0;
    for (long x : s3.external_profile) total += x;
    CHECK(total == 3);
}

TEST_CASE("stats from leaf depths", "[simulator]")
{
    TreeStats s = stats_from_depths({1, 2, 2}, {0, 1});
    CHECK(s.height == 2);
    CHECK(s.fillup == 0);
    CHECK(s.external_profile == std::vector<long>{0, 1, 2});
    CHECK(s.internal_profile == std::vector<long>{1, 1, 0});
}

TEST_CASE("query process with forced answers reproduces the worked example", "[simulator]")
{
    // objects 1..5; bit 1 means the object's label is in the query
    std::vector<FixedBits> streams{{{1, 1, 1}}, {{0, 0, 0}}, {{0, 1}}, {{0, 0, 1}}, {{1, 1, 0}}};
    RefinementTree rt = run_renyi(streams);
    CHECK(shape(rt) == "(((LL)L)(LL))");
    const auto& root = rt.blocks[0];
    CHECK(rt.blocks[root.child1].members == std::vector<int>{0, 4});
    CHECK(rt.blocks[root.child0].members == std::vector<int>{1, 2, 3});
    TreeStats s = stats(rt);
    CHECK(s.leaf_depths == std::vector<int>{2, 3, 2, 3, 2});
    CHECK(s.height == 3);
    CHECK(s.fillup == 1);
    CHECK(rt.query_log.size() == 4);  // the inconclusive query on {1,5} is not logged
    CHECK(shape(build_patricia(streams)) == shape(rt));
}

TEST_CASE("query process basics and the coupling", "[simulator]")
{
    PrecisionScope ps(256);
    Bias b("0.6");
    RefinementTree two = run_renyi(draw_streams(2, b, 3));
    CHECK(two.levels.size() == 2);
    CHECK(two.query_log.size() == 1);

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::size_t n = 2 + seed % 40;
        auto streams = draw_streams(n, Bias(seed % 2 ? "0.7" : "0.5"), seed);
        PatriciaTrie pt = build_patricia(streams);
        RefinementTree rt = run_renyi(streams);
        REQUIRE(shape(pt) == shape(rt));
        TreeStats a = stats(pt), c = stats(rt);
        REQUIRE(a.leaf_depths == c.leaf_depths);
        REQUIRE(a.internal_profile == c.internal_profile);
        // every level refines the previous one
        for (std::size_t lv = 1; lv < rt.levels.size(); ++lv)
            for (int blk : rt.levels[lv]) REQUIRE(rt.blocks[rt.blocks[blk].parent].level == static_cast<int>(lv) - 1);
    }
}

TEST_CASE("trial summaries", "[simulator]")
{
    PrecisionScope ps(256);
    Bias b("0.7");
    SimulationSummary one = run_trials(40, b, 1, 9);
    TreeStats s = patricia_stats_fast(40, trial_seed(9, 0), bias_threshold(b), 0.7);
    auto streams = draw_streams(40, b, trial_seed(9, 0));
    CHECK(stats(build_patricia(streams)).leaf_depths == s.leaf_depths);
    for (std::size_t k = 0; k < s.external_profile.size(); ++k) CHECK(one.mean(k) == s.external_profile[k]);
    CHECK(one.height_hist.at(s.height) == 1);
    CHECK(one.fillup_hist.at(s.fillup) == 1);

    SimulationSummary a = run_trials(100, b, 300, 4, 1), c = run_trials(100, b, 300, 4, 3);
    CHECK(a.profile_sum == c.profile_sum);
    CHECK(a.profile_sumsq == c.profile_sumsq);
    CHECK(a.height_hist == c.height_hist);
    CHECK(a.depth_hist == c.depth_hist);
}

TEST_CASE("pathwise ordering of fillup, depth and height", "[simulator]")
{
    PrecisionScope ps(256);
    Bias b("0.5");
    std::uint64_t thr = bias_threshold(b);
    for (std::uint64_t t = 0; t < 10000; ++t) {
        std::uint64_t ts = trial_seed(17, t);
        TreeStats s = patricia_stats_fast(1024, ts, thr, 0.5);
        int d = s.leaf_depths[random_leaf(ts, 1024)];
        REQUIRE(s.fillup + 1 <= d);
        REQUIRE(d <= s.height);
        long total = 0;
        for (long x : s.external_profile) total += x;
        REQUIRE(total == 1024);
    }
}
