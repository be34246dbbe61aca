#pragma once

#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace patricia {

// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based generator: a 64-bit uniform word for every (seed, stream, position).
inline std::uint64_t counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t position)
{
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
    return splitmix64(h ^ (position * 0x8cb92ba72f3d8dd7ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x243f6a8885a308d3ULL));
}

// floor(p * 2^64), so that bit = [uniform64 < threshold].
inline std::uint64_t bias_threshold(const Bias& bias)
{
    HPReal t = boost::multiprecision::floor(bias.p * boost::multiprecision::pow(HPReal(2), 64));
    return t.convert_to<std::uint64_t>();
}

struct BitSource {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
    std::uint64_t threshold = 0;

    int bit(std::uint64_t position) const
    {
        return counter_uniform(seed, stream_index, position) < threshold ? 1 : 0;
    }
};

inline std::vector<BitSource> draw_streams(std::size_t n, const Bias& bias, std::uint64_t seed)
{
    if (n < 1) throw domain_error("draw_streams requires n >= 1");
    std::uint64_t t = bias_threshold(bias);
    std::vector<BitSource> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = BitSource{seed, i, t};
    return out;
}

inline std::uint64_t stream_guard(std::size_t n, double p)
{
    double h = n > 1 ? std::log(static_cast<double>(n)) / std::log(1.0 / p) : 0.0;
    return static_cast<std::uint64_t>(64.0 * (h + 64.0));
}

// A stream with prescribed bits, for worked examples; reading past the end is an error.
struct FixedBits {
    std::vector<int> bits;

    int bit(std::uint64_t position) const
    {
        if (position >= bits.size()) throw std::out_of_range("FixedBits: stream exhausted");
        return bits[position];
    }
};

template <class Stream>
std::uint64_t stream_guard_for(const std::vector<Stream>& streams)
{
    if constexpr (requires(const Stream& s) { s.threshold; }) {
        double p = static_cast<double>(streams[0].threshold) / 18446744073709551616.0;
        return stream_guard(streams.size(), std::max(p, 0.5));
    } else {
        return stream_guard(streams.size(), 0.5);
    }
}

struct TreeStats {
    int height = 0;
    int fillup = -1;
    std::vector<int> leaf_depths;
    std::vector<long> external_profile;
    std::vector<long> internal_profile;
};

inline TreeStats stats_from_depths(std::vector<int> leaf_depths, const std::vector<int>& internal_depths)
{
    TreeStats s;
    s.leaf_depths = std::move(leaf_depths);
    int hmax = 0, hmin = s.leaf_depths.empty() ? 0 : s.leaf_depths.front();
    for (int d : s.leaf_depths) {
        hmax = std::max(hmax, d);
        hmin = std::min(hmin, d);
    }
    s.height = hmax;
    s.fillup = hmin - 1;
    s.external_profile.assign(hmax + 1, 0);
    for (int d : s.leaf_depths) ++s.external_profile[d];
    s.internal_profile.assign(hmax + 1, 0);
    for (int d : internal_depths) ++s.internal_profile[d];
    return s;
}

// PATRICIA trie: binary trie over the streams with unary paths compressed.
struct PatriciaTrie {
    struct Node {
        int left = -1;
        int right = -1;
        int leaf = -1;
        std::uint64_t skip_from = 0;  // first bit position examined at this node
        std::uint64_t bit_index = 0;  // distinguishing bit position (internal nodes)
    };
    std::vector<Node> nodes;
    std::size_t leaf_count = 0;
    int root = -1;
};

template <class Stream>
PatriciaTrie build_patricia(const std::vector<Stream>& streams)
{
    PatriciaTrie t;
    t.leaf_count = streams.size();
    if (streams.empty()) return t;
    std::uint64_t guard = stream_guard_for(streams);

    std::vector<int> ids(streams.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    std::vector<int> scratch(ids.size());

    std::function<int(int, int, std::uint64_t)> build = [&](int lo, int hi, std::uint64_t pos) -> int {
        int id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[id].skip_from = pos;
        if (hi - lo == 1) {
            t.nodes[id].leaf = ids[lo];
            return id;
        }
        for (;; ++pos) {
            if (pos >= guard) throw std::runtime_error("stream length guard exceeded while building trie");
            int ones = 0;
            for (int i = lo; i < hi; ++i) ones += streams[ids[i]].bit(pos);
            if (ones == 0 || ones == hi - lo) continue;
            int a = lo, b = hi;
            for (int i = lo; i < hi; ++i) {
                if (streams[ids[i]].bit(pos)) scratch[--b] = ids[i];
                else scratch[a++] = ids[i];
            }
            std::reverse(scratch.begin() + b, scratch.begin() + hi);
            std::copy(scratch.begin() + lo, scratch.begin() + hi, ids.begin() + lo);
            t.nodes[id].bit_index = pos;
            int l = build(lo, a, pos + 1);
            int r = build(a, hi, pos + 1);
            t.nodes[id].left = l;
            t.nodes[id].right = r;
            return id;
        }
    };
    t.root = build(0, static_cast<int>(ids.size()), 0);
    return t;
}

inline TreeStats stats(const PatriciaTrie& t)
{
    std::vector<int> leaf_depths(t.leaf_count, 0);
    std::vector<int> internal;
    if (t.root < 0) return stats_from_depths({}, {});
    std::vector<std::pair<int, int>> stack{{t.root, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const auto& nd = t.nodes[id];
        if (nd.leaf >= 0) {
            leaf_depths[nd.leaf] = d;
        } else {
            internal.push_back(d);
            stack.push_back({nd.left, d + 1});
            stack.push_back({nd.right, d + 1});
        }
    }
    return stats_from_depths(std::move(leaf_depths), internal);
}

// Canonical plane-tree encoding: "L" for a leaf, "(xy)" for an internal node (0-branch first).
inline std::string shape(const PatriciaTrie& t)
{
    std::string out;
    std::function<void(int)> rec = [&](int id) {
        const auto& nd = t.nodes[id];
        if (nd.leaf >= 0) {
            out += 'L';
            return;
        }
        out += '(';
        rec(nd.left);
        rec(nd.right);
        out += ')';
    };
    if (t.root >= 0) rec(t.root);
    return out;
}

// Renyi query process: refinement of partitions of {0..n-1}.
struct RefinementTree {
    struct Block {
        std::vector<int> members;
        int parent = -1;
        int child0 = -1;  // block of objects that answered 0
        int child1 = -1;
        int level = 0;
    };
    std::vector<Block> blocks;
    std::vector<std::vector<int>> levels;  // block ids per level
    struct Query {
        int level;
        int block;
        std::vector<int> included;
    };
    std::vector<Query> query_log;  // accepted queries only
};

template <class Stream>
RefinementTree run_renyi(const std::vector<Stream>& streams)
{
    RefinementTree rt;
    std::size_t n = streams.size();
    if (n == 0) return rt;
    std::uint64_t guard = stream_guard_for(streams);

    std::vector<std::uint64_t> k(n, 0);  // next unread bit per object
    RefinementTree::Block root;
    root.members.resize(n);
    for (std::size_t i = 0; i < n; ++i) root.members[i] = static_cast<int>(i);
    rt.blocks.push_back(root);
    rt.levels.push_back({0});

    for (int level = 0;; ++level) {
        std::vector<int> next;
        for (int b : rt.levels[level]) {
            if (rt.blocks[b].members.size() < 2) continue;
            std::vector<int> inc, exc;
            for (;;) {
                inc.clear();
                exc.clear();
                for (int j : rt.blocks[b].members) {
                    if (k[j] >= guard) throw std::runtime_error("stream length guard exceeded in query process");
                    (streams[j].bit(k[j]++) ? inc : exc).push_back(j);
                }
                if (!inc.empty() && !exc.empty()) break;  // inconclusive queries are resampled
            }
            rt.query_log.push_back({level, b, inc});
            RefinementTree::Block c0, c1;
            c0.members = exc;
            c1.members = inc;
            c0.parent = c1.parent = b;
            c0.level = c1.level = level + 1;
            int i0 = static_cast<int>(rt.blocks.size());
            rt.blocks.push_back(std::move(c0));
            rt.blocks.push_back(std::move(c1));
            rt.blocks[b].child0 = i0;
            rt.blocks[b].child1 = i0 + 1;
            next.push_back(i0);
            next.push_back(i0 + 1);
        }
        if (next.empty()) break;
        rt.levels.push_back(std::move(next));
    }
    return rt;
}

inline TreeStats stats(const RefinementTree& rt)
{
    std::size_t n = rt.blocks.empty() ? 0 : rt.blocks[0].members.size();
    std::vector<int> leaf_depths(n, 0);
    std::vector<int> internal;
    for (const auto& b : rt.blocks) {
        if (b.members.size() == 1) leaf_depths[b.members[0]] = b.level;
        else if (b.child0 >= 0) internal.push_back(b.level);
    }
    return stats_from_depths(std::move(leaf_depths), internal);
}

inline std::string shape(const RefinementTree& rt)
{
    std::string out;
    std::function<void(int)> rec = [&](int b) {
        const auto& blk = rt.blocks[b];
        if (blk.child0 < 0) {
            out += 'L';
            return;
        }
        out += '(';
        rec(blk.child0);
        rec(blk.child1);
        out += ')';
    };
    if (!rt.blocks.empty()) rec(0);
    return out;
}

// Fast path for bulk trials: leaf depths and internal depths of the PATRICIA trie only.
inline TreeStats patricia_stats_fast(std::size_t n, std::uint64_t seed, std::uint64_t threshold, double p)
{
    std::uint64_t guard = stream_guard(n, std::max(p, 0.5));
    std::vector<int> ids(n), scratch(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<int>(i);
    std::vector<int> leaf_depths(n, 0), internal;
    internal.reserve(n);
    struct Frame {
        int lo, hi, depth;
        std::uint64_t pos;
    };
    std::vector<Frame> stack{{0, static_cast<int>(n), 0, 0}};
    std::vector<unsigned char> bits(n);
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.hi - f.lo == 1) {
            leaf_depths[ids[f.lo]] = f.depth;
            continue;
        }
        for (std::uint64_t pos = f.pos;; ++pos) {
            if (pos >= guard) throw std::runtime_error("stream length guard exceeded while building trie");
            int ones = 0;
            for (int i = f.lo; i < f.hi; ++i) {
                bits[i] = counter_uniform(seed, static_cast<std::uint64_t>(ids[i]), pos) < threshold;
                ones += bits[i];
            }
            if (ones == 0 || ones == f.hi - f.lo) continue;
            int a = f.lo, b = f.hi;
            for (int i = f.lo; i < f.hi; ++i) {
                if (bits[i]) scratch[--b] = ids[i];
                else scratch[a++] = ids[i];
            }
            std::copy(scratch.begin() + f.lo, scratch.begin() + f.hi, ids.begin() + f.lo);
            internal.push_back(f.depth);
            stack.push_back({f.lo, a, f.depth + 1, pos + 1});
            stack.push_back({a, f.hi, f.depth + 1, pos + 1});
            break;
        }
    }
    return stats_from_depths(std::move(leaf_depths), internal);
}

struct SimulationSummary {
    std::size_t n = 0;
    std::string p;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<long double> profile_sum;     // sum over trials of B_{n,k}
    std::vector<long double> profile_sumsq;   // sum over trials of B_{n,k}^2
    std::map<int, long> height_hist;
    std::map<int, long> fillup_hist;
    std::map<int, long> depth_hist;

    double mean(std::size_t k) const { return k < profile_sum.size() ? double(profile_sum[k] / trials) : 0.0; }
    double variance(std::size_t k) const
    {
        if (k >= profile_sum.size() || trials < 2) return 0.0;
        long double m = profile_sum[k] / trials;
        return double((profile_sumsq[k] - trials * m * m) / (trials - 1));
    }
};

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return derive_seed(seed, trial); }

// Uniform leaf choice for D_n, from a dedicated counter stream.
inline std::size_t random_leaf(std::uint64_t tseed, std::size_t n)
{
    std::uint64_t u = counter_uniform(tseed, 0xffffffffffffffffULL, 0);
    return static_cast<std::size_t>((static_cast<unsigned __int128>(u) * n) >> 64);
}

inline SimulationSummary run_trials(std::size_t n, const Bias& bias, std::size_t trials, std::uint64_t seed,
                                    unsigned threads = 0)
{
    if (trials < 1) throw domain_error("run_trials requires trials >= 1");
    if (n < 1) throw domain_error("run_trials requires n >= 1");
    std::uint64_t thr = bias_threshold(bias);
    double p = to_double(bias.p);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

    struct Partial {
        std::vector<long long> sum, sumsq;
        std::map<int, long> h, f, d;
    };
    std::vector<Partial> parts(threads);
    auto work = [&](unsigned w) {
        Partial& P = parts[w];
        for (std::size_t t = w; t < trials; t += threads) {
            std::uint64_t ts = trial_seed(seed, t);
            TreeStats s = patricia_stats_fast(n, ts, thr, p);
            if (P.sum.size() < s.external_profile.size()) {
                P.sum.resize(s.external_profile.size(), 0);
                P.sumsq.resize(s.external_profile.size(), 0);
            }
            for (std::size_t k = 0; k < s.external_profile.size(); ++k) {
                long long b = s.external_profile[k];
                P.sum[k] += b;
                P.sumsq[k] += b * b;
            }
            ++P.h[s.height];
            ++P.f[s.fillup];
            ++P.d[s.leaf_depths[random_leaf(ts, n)]];
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();

    SimulationSummary out;
    out.n = n;
    out.p = bias.text;
    out.trials = trials;
    out.seed = seed;
    std::vector<long long> sum, sumsq;
    for (const auto& P : parts) {
        if (sum.size() < P.sum.size()) {
            sum.resize(P.sum.size(), 0);
            sumsq.resize(P.sum.size(), 0);
        }
        for (std::size_t k = 0; k < P.sum.size(); ++k) {
            sum[k] += P.sum[k];
            sumsq[k] += P.sumsq[k];
        }
        for (auto [k, c] : P.h) out.height_hist[k] += c;
        for (auto [k, c] : P.f) out.fillup_hist[k] += c;
        for (auto [k, c] : P.d) out.depth_hist[k] += c;
    }
    out.profile_sum.assign(sum.begin(), sum.end());
    out.profile_sumsq.assign(sumsq.begin(), sumsq.end());
    return out;
}

} // namespace patricia
