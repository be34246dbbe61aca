#pragma once

#include "numerics.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace patricia {

// Exact moments of the external profile: mu[n][k] = E[B_{n,k}], s[n][k] = E[B_{n,k}^2].
// Columns k > k_max are not computed (k_max = N_max for the full triangle).
struct ProfileTable {
    Bias bias;
    unsigned N_max = 0;
    unsigned k_max = 0;
    bool has_second = false;
    std::vector<std::vector<HPReal>> mu;  // mu[n][k], 0 <= n <= N_max, 0 <= k <= min(n, k_max)
    std::vector<std::vector<HPReal>> s;

    bool covers(unsigned n, unsigned k) const { return n <= N_max && (k <= k_max || k >= n); }

    HPReal mean(unsigned n, unsigned k) const
    {
        if (n > N_max) throw domain_error("profile table: n out of range");
        if (k < mu[n].size()) return mu[n][k];
        if (k >= n && n != 1) return HPReal(0);
        if (n == 1) return HPReal(k == 0 ? 1 : 0);
        throw domain_error("profile table: column k not computed");
    }
    HPReal second(unsigned n, unsigned k) const
    {
        if (!has_second) throw domain_error("profile table: second-moment layer absent");
        if (n > N_max) throw domain_error("profile table: n out of range");
        if (k < s[n].size()) return s[n][k];
        if (k >= n && n != 1) return HPReal(0);
        if (n == 1) return HPReal(k == 0 ? 1 : 0);
        throw domain_error("profile table: column k not computed");
    }
    HPReal variance(unsigned n, unsigned k) const
    {
        HPReal m = mean(n, k);
        return second(n, k) - m * m;
    }
};

namespace detail {

// w[j] = C(n,j) p^j q^(n-j), j = 0..n
inline std::vector<HPReal> split_weights(unsigned n, const std::vector<HPReal>& ppow, const std::vector<HPReal>& qpow)
{
    std::vector<HPReal> w(n + 1);
    HPReal c = 1;
    for (unsigned j = 0; j <= n; ++j) {
        if (j > 0) {
            c *= n - j + 1;
            c /= j;
        }
        w[j] = c * ppow[j] * qpow[n - j];
    }
    return w;
}

} // namespace detail

inline ProfileTable build_profile(unsigned N_max, const Bias& bias, bool second_layer,
                                  std::optional<unsigned> k_limit = std::nullopt)
{
    if (N_max == 0) throw domain_error("profile table: N_max must be at least 1");
    ProfileTable t;
    t.bias = bias;
    t.N_max = N_max;
    t.k_max = k_limit ? std::min(*k_limit, N_max) : N_max;
    t.has_second = second_layer;
    t.mu.resize(N_max + 1);
    if (second_layer) t.s.resize(N_max + 1);

    std::vector<HPReal> ppow(N_max + 1), qpow(N_max + 1);
    ppow[0] = qpow[0] = 1;
    for (unsigned i = 1; i <= N_max; ++i) {
        ppow[i] = ppow[i - 1] * bias.p;
        qpow[i] = qpow[i - 1] * bias.q;
    }

    t.mu[0] = {HPReal(0)};
    if (second_layer) t.s[0] = {HPReal(0)};
    t.mu[1] = {HPReal(1)};
    if (second_layer) t.s[1] = {HPReal(1)};

    HPReal acc, acc2, tmp;
    for (unsigned n = 2; n <= N_max; ++n) {
        auto w = detail::split_weights(n, ppow, qpow);
        std::vector<HPReal> a(n);
        for (unsigned j = 1; j < n; ++j) a[j] = w[j] + w[n - j];
        HPReal d = 1 - ppow[n] - qpow[n];
        unsigned kk = std::min(n - 1, t.k_max);
        t.mu[n].assign(kk + 1, HPReal(0));
        if (second_layer) t.s[n].assign(kk + 1, HPReal(0));
        for (unsigned k = 1; k <= kk; ++k) {
            // column k-1 is nonzero only for j >= k (plus j = 1 when k = 1)
            unsigned jlo = (k == 1) ? 1 : k;
            acc = 0;
            for (unsigned j = jlo; j < n; ++j) {
                if (k - 1 >= t.mu[j].size()) continue;
                mpfr_fma(acc.backend().data(), a[j].backend().data(), t.mu[j][k - 1].backend().data(),
                         acc.backend().data(), MPFR_RNDN);
            }
            t.mu[n][k] = acc / d;
            if (second_layer) {
                acc = 0;
                acc2 = 0;
                for (unsigned j = jlo; j < n; ++j) {
                    if (k - 1 >= t.s[j].size()) continue;
                    mpfr_fma(acc.backend().data(), a[j].backend().data(), t.s[j][k - 1].backend().data(),
                             acc.backend().data(), MPFR_RNDN);
                    unsigned jj = n - j;
                    if (k - 1 < t.mu[jj].size()) {
                        mpfr_mul(tmp.backend().data(), t.mu[j][k - 1].backend().data(),
                                 t.mu[jj][k - 1].backend().data(), MPFR_RNDN);
                        mpfr_fma(acc2.backend().data(), w[j].backend().data(), tmp.backend().data(),
                                 acc2.backend().data(), MPFR_RNDN);
                    }
                }
                t.s[n][k] = (acc + 2 * acc2) / d;
            }
        }
    }
    return t;
}

inline ProfileTable mean_profile(unsigned N_max, const Bias& bias, std::optional<unsigned> k_limit = std::nullopt)
{
    return build_profile(N_max, bias, false, k_limit);
}

inline ProfileTable second_moment_profile(unsigned N_max, const Bias& bias,
                                          std::optional<unsigned> k_limit = std::nullopt)
{
    return build_profile(N_max, bias, true, k_limit);
}

inline std::vector<HPReal> depth_pmf(const ProfileTable& t, unsigned n)
{
    if (n < 1 || n > t.N_max) throw domain_error("depth_pmf: n out of range");
    if (t.k_max < n - 1 && n > 1) throw domain_error("depth_pmf: table does not cover all levels");
    std::vector<HPReal> out(std::max(1u, n));
    for (unsigned k = 0; k < out.size(); ++k) out[k] = t.mean(n, k) / n;
    return out;
}

struct TailBounds {
    HPReal height_tail;            // sum_{j>k} mu_{n,j} >= P[H_n > k]
    std::optional<HPReal> cheb;    // Var[B_{n,k}] / mu_{n,k}^2
    HPReal fillup_lower;           // mu_{n,k} >= P[F_n < k]
};

inline TailBounds tail_bounds(const ProfileTable& t, unsigned n, unsigned k)
{
    TailBounds b;
    b.height_tail = 0;
    for (unsigned j = k + 1; j < std::max(n, 1u); ++j) b.height_tail += t.mean(n, j);
    b.fillup_lower = t.mean(n, k);
    if (t.has_second && b.fillup_lower > 0) b.cheb = t.variance(n, k) / (b.fillup_lower * b.fillup_lower);
    return b;
}

struct CertifiedValue {
    HPReal value;
    HPReal error_bound;  // relative
    unsigned terms = 0;
};

// C_*(p) = prod_{j>=2} (1 - p^j - q^j)^{-1} (1 + (q/p)^{j-2}); diverges at p = 1/2.
inline CertifiedValue cstar(const Bias& bias, const HPReal& tol)
{
    if (bias.p <= HPReal("0.5")) throw domain_error("cstar: the product diverges at p = 1/2");
    const HPReal& p = bias.p;
    const HPReal& q = bias.q;
    HPReal r = q / p;
    HPReal prod = 1, pj = p * p, qj = q * q, rj = 1;
    for (unsigned j = 2;; ++j) {
        prod *= (1 + rj) / (1 - pj - qj);
        // log-tail bound for factors i > j: sum (2p^i/(1-2p^i) + r^(i-2)) <= 4p^(j+1)/(1-p) + r^(j-1)/(1-r)
        HPReal pn = pj * p, rn = rj * r;
        HPReal bound = 4 * pn / (1 - p) + rn / (1 - r);
        if (2 * pn <= HPReal("0.5") && bound < tol) return {prod, exp_hp(bound) - 1, j};
        if (j > 200000) throw precision_error("cstar: tolerance unreachable");
        pj = pn;
        qj *= q;
        rj = rn;
    }
}

inline HPReal cstar_value(const Bias& bias)
{
    return cstar(bias, boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 8)).value;
}

// xi_l(n) = mu_{n,n-l} / (n! C_* p^{(n-l)(n-l+1)/2} q^{n-l})
inline HPReal xi_of_n(const ProfileTable& t, unsigned ell, unsigned n, const HPReal& cs)
{
    if (ell < 1 || ell >= n || n > t.N_max) throw domain_error("xi_of_n: indices out of range");
    unsigned k = n - ell;
    HPReal denom = factorial_hp(n) * cs * hp_pow(t.bias.p, static_cast<long>(k) * (k + 1) / 2) *
                   hp_pow(t.bias.q, static_cast<long>(k));
    return t.mean(n, k) / denom;
}

} // namespace patricia
