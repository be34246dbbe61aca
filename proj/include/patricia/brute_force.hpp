#pragma once

#include "numerics.hpp"

#include <map>
#include <vector>

namespace patricia {

// Exact law of the external profile for small n, by enumerating first-split sizes recursively.
// Each block of size m >= 2 splits into (j, m-j) with probability C(m,j) p^j q^(m-j) / (1 - p^m - q^m).
using ProfileLaw = std::map<std::vector<int>, HPReal>;

inline ProfileLaw profile_law(unsigned n, const Bias& bias, std::map<unsigned, ProfileLaw>& memo)
{
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    ProfileLaw law;
    if (n == 1) {
        law[{1}] = 1;
    } else {
        HPReal d = 1 - hp_pow(bias.p, static_cast<long>(n)) - hp_pow(bias.q, static_cast<long>(n));
        for (unsigned j = 1; j < n; ++j) {
            HPReal w = HPReal(binomial(n, j).str()) * hp_pow(bias.p, static_cast<long>(j)) *
                       hp_pow(bias.q, static_cast<long>(n - j)) / d;
            ProfileLaw a = profile_law(j, bias, memo);
            ProfileLaw b = profile_law(n - j, bias, memo);
            for (const auto& [pa, wa] : a) {
                for (const auto& [pb, wb] : b) {
                    std::vector<int> prof(std::max(pa.size(), pb.size()) + 1, 0);
                    for (std::size_t k = 0; k < pa.size(); ++k) prof[k + 1] += pa[k];
                    for (std::size_t k = 0; k < pb.size(); ++k) prof[k + 1] += pb[k];
                    law[prof] += w * wa * wb;
                }
            }
        }
    }
    memo[n] = law;
    return law;
}

struct BruteMoments {
    std::vector<HPReal> mean;
    std::vector<HPReal> variance;
    HPReal total_probability;
};

inline BruteMoments brute_force_moments(unsigned n, const Bias& bias)
{
    std::map<unsigned, ProfileLaw> memo;
    ProfileLaw law = profile_law(n, bias, memo);
    std::size_t K = 0;
    for (const auto& [prof, w] : law) K = std::max(K, prof.size());
    BruteMoments m;
    m.mean.assign(std::max<std::size_t>(K, n), HPReal(0));
    std::vector<HPReal> sq(m.mean.size(), HPReal(0));
    m.total_probability = 0;
    for (const auto& [prof, w] : law) {
        m.total_probability += w;
        for (std::size_t k = 0; k < prof.size(); ++k) {
            m.mean[k] += w * prof[k];
            sq[k] += w * prof[k] * prof[k];
        }
    }
    m.variance.resize(m.mean.size());
    for (std::size_t k = 0; k < m.mean.size(); ++k) m.variance[k] = sq[k] - m.mean[k] * m.mean[k];
    return m;
}

} // namespace patricia
