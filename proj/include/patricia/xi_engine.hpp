#pragma once

#include "numerics.hpp"
#include "profile_exact.hpp"

#include <algorithm>
#include <vector>

namespace patricia {

struct XiSequence {
    Bias bias;
    std::vector<HPReal> xi;  // xi[0] unused, xi[1] = 1
    HPReal c1;               // max_l xi_l (l-1)!

    const HPReal& operator[](std::size_t l) const { return xi.at(l); }
    std::size_t size() const { return xi.size(); }
};

// xi_l (1 - p^{l-1}) = q^{-1} p^l sum_{J=2}^{l} xi_{l+1-J} (q/p)^J / J!
inline XiSequence xi_limits(unsigned L_max, const Bias& bias)
{
    if (L_max < 1) throw domain_error("xi_limits: L_max must be at least 1");
    XiSequence s;
    s.bias = bias;
    s.xi.assign(L_max + 1, HPReal(0));
    s.xi[1] = 1;
    HPReal r = bias.q / bias.p;
    std::vector<HPReal> rf(L_max + 1);  // (q/p)^J / J!
    rf[0] = 1;
    for (unsigned J = 1; J <= L_max; ++J) rf[J] = rf[J - 1] * r / J;
    HPReal pl = bias.p;  // p^l
    for (unsigned l = 2; l <= L_max; ++l) {
        pl *= bias.p;
        HPReal acc = 0;
        for (unsigned J = 2; J <= l; ++J) acc += s.xi[l + 1 - J] * rf[J];
        s.xi[l] = pl / bias.q * acc / (1 - pl / bias.p);
    }
    s.c1 = 0;
    HPReal f = 1;
    for (unsigned l = 1; l <= L_max; ++l) {
        if (l > 1) f *= l - 1;
        s.c1 = std::max(s.c1, s.xi[l] * f);
    }
    return s;
}

namespace detail {

inline HPReal product_cutoff() { return boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 8); }

// (e^x - 1)/x with the removable singularity filled in.
inline HPReal expm1_over(const HPReal& x)
{
    if (x == 0) return HPReal(1);
    return boost::multiprecision::expm1(x) / x;
}

inline HPReal one_minus_exp_neg_over(const HPReal& x)
{
    if (x == 0) return HPReal(1);
    return -boost::multiprecision::expm1(-x) / x;
}

} // namespace detail

struct ProductValue {
    HPReal value;
    HPReal tail_bound;  // bound on |log(full product / returned value)|
    unsigned factors = 0;
};

// X(z) = prod_{j>=0} (e^{q p^j z} - 1)/(q p^j z)
inline ProductValue xi_gf(const HPReal& z, const Bias& bias, unsigned j_max = 1u << 20)
{
    HPReal cut = detail::product_cutoff();
    HPReal a = bias.q, prod = 1;
    unsigned j = 0;
    for (; j <= j_max; ++j) {
        HPReal f = detail::expm1_over(a * z);
        prod *= f;
        if (abs_hp(f - 1) < cut) break;
        a *= bias.p;
    }
    // |log factor| <= |a z| for |a z| <= 1, geometric in p
    HPReal tail = abs_hp(a * bias.p * z) / (1 - bias.p);
    return {prod, tail, j + 1};
}

// Power-series coefficients of the truncated product, degree <= D.
inline std::vector<HPReal> xi_gf_coefficients(unsigned D, const Bias& bias)
{
    std::vector<HPReal> coef(D + 1, HPReal(0));
    coef[0] = 1;
    auto fact = factorial_table(D + 1);
    HPReal cut = detail::product_cutoff();
    HPReal a = bias.q;
    std::vector<HPReal> f(D + 1), nxt(D + 1);
    for (unsigned j = 0; j < (1u << 22); ++j) {
        HPReal am = 1;
        for (unsigned m = 0; m <= D; ++m) {
            f[m] = am / fact[m + 1];
            am *= a;
        }
        for (unsigned n = 0; n <= D; ++n) {
            HPReal acc = 0;
            for (unsigned m = 0; m <= n; ++m) acc += coef[n - m] * f[m];
            nxt[n] = acc;
        }
        coef.swap(nxt);
        if (a < cut) break;
        a *= bias.p;
    }
    return coef;
}

// xi~(z) = z prod_{j>=0} (1 - e^{-q p^j z})/(q p^j z)
inline HPReal xi_poisson(const HPReal& z, const Bias& bias)
{
    if (z <= 0) throw domain_error("xi_poisson requires z > 0");
    HPReal cut = detail::product_cutoff();
    HPReal a = bias.q, prod = z;
    for (unsigned j = 0; j < (1u << 24); ++j) {
        HPReal f = detail::one_minus_exp_neg_over(a * z);
        prod *= f;
        if (abs_hp(f - 1) < cut) break;
        a *= bias.p;
    }
    return prod;
}

inline HPReal xi_asymptotic(unsigned ell, const Bias& bias)
{
    return xi_poisson(HPReal(ell), bias) / factorial_hp(ell);
}

// n! C_* p^{(n-l)(n-l+1)/2} q^{n-l} xi_l
inline HPReal knessl_mu(unsigned n, unsigned ell, const Bias& bias, const XiSequence& xi, const HPReal& cs)
{
    if (ell < 1 || ell >= n) throw domain_error("knessl_mu: need 1 <= l < n");
    long k = static_cast<long>(n - ell);
    return factorial_hp(n) * cs * hp_pow(bias.p, k * (k + 1) / 2) * hp_pow(bias.q, k) * xi[ell];
}

// C n!/(n-k-1)! p^{(k^2+k)/2} q^k
inline HPReal mu_upper_shape(unsigned n, unsigned k, const Bias& bias)
{
    if (k < 1 || k >= n) throw domain_error("mu_upper: need 1 <= k < n");
    HPReal f = 1;
    for (unsigned i = n - k; i <= n; ++i) f *= i;
    long kk = static_cast<long>(k);
    return f * hp_pow(bias.p, kk * (kk + 1) / 2) * hp_pow(bias.q, kk);
}

inline HPReal mu_upper(unsigned n, unsigned k, const Bias& bias, const HPReal& C)
{
    return C * mu_upper_shape(n, k, bias);
}

// Smallest C with mu_{n,k} <= C * shape(n,k) over the table, rounded up by a few ulps.
inline HPReal calibrate_mu_upper(const ProfileTable& t, unsigned n_max)
{
    HPReal C = 0;
    for (unsigned n = 2; n <= std::min(n_max, t.N_max); ++n)
        for (unsigned k = 1; k < n && k <= t.k_max; ++k) C = std::max(C, t.mean(n, k) / mu_upper_shape(n, k, t.bias));
    return C * (1 + boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 8));
}

inline HPReal mu_smallj(unsigned m, unsigned j, const Bias& bias)
{
    if (m < 1) throw domain_error("mu_smallj requires m >= 1");
    HPReal qj = hp_pow(bias.q, static_cast<long>(j));
    return m * qj * hp_pow(1 - qj, static_cast<long>(m - 1));
}

// D(p) = sum_{L,M>=0} xi_{L+1} (-1)^M/M! p^{((L+M)^2+L-M)/2} q^{-L-M}
inline HPReal d_of_p(const Bias& bias, unsigned L_max, unsigned M_max)
{
    if (L_max < 1 || M_max < 1) throw domain_error("d_of_p: truncation limits must be positive");
    XiSequence xi = xi_limits(L_max + 1, bias);
    auto fact = factorial_table(M_max);
    HPReal lp = log_hp(bias.p), lq = log_hp(bias.q);
    PairwiseSum s;
    for (unsigned L = 0; L <= L_max; ++L) {
        for (unsigned M = 0; M <= M_max; ++M) {
            long S = static_cast<long>(L + M);
            HPReal e = HPReal(S * S + static_cast<long>(L) - static_cast<long>(M)) / 2 * lp - S * lq;
            HPReal t = xi[L + 1] * exp_hp(e) / fact[M];
            s.add(M % 2 ? HPReal(-t) : t);
        }
    }
    return s.value();
}

struct WitnessRow {
    unsigned N;
    HPReal Q_N;
    HPReal lhs;  // sum_{n<=N} F_n p^{n(n-1)/2}
    HPReal rhs;  // Q_N p^{N(N+1)/2}
};

// Q(z) = prod_{j>=1} q(p^j z), q(z) = (1 - e^{-z})/z; F_n = p^n Q_n - Q_{n-1}.
inline std::vector<WitnessRow> d_identity_witness(const Bias& bias, unsigned N_max)
{
    if (N_max < 1) throw domain_error("d_identity_witness requires N_max >= 1");
    auto fact = factorial_table(N_max + 1);
    std::vector<HPReal> Q(N_max + 1, HPReal(0)), f(N_max + 1), nxt(N_max + 1);
    Q[0] = 1;
    HPReal cut = detail::product_cutoff();
    HPReal a = bias.p;
    for (unsigned j = 1; j < (1u << 22); ++j) {
        HPReal am = 1;
        for (unsigned m = 0; m <= N_max; ++m) {
            f[m] = (m % 2 ? HPReal(-am) : am) / fact[m + 1];
            am *= a;
        }
        for (unsigned n = 0; n <= N_max; ++n) {
            HPReal acc = 0;
            for (unsigned m = 0; m <= n; ++m) acc += Q[n - m] * f[m];
            nxt[n] = acc;
        }
        Q.swap(nxt);
        if (a < cut) break;
        a *= bias.p;
    }
    std::vector<WitnessRow> rows;
    HPReal lhs = 0;
    for (unsigned n = 0; n <= N_max; ++n) {
        HPReal Fn = hp_pow(bias.p, static_cast<long>(n)) * Q[n] - (n > 0 ? Q[n - 1] : HPReal(0));
        lhs += Fn * hp_pow(bias.p, static_cast<long>(n) * (static_cast<long>(n) - 1) / 2);
        HPReal rhs = Q[n] * hp_pow(bias.p, static_cast<long>(n) * (n + 1) / 2);
        rows.push_back({n, Q[n], lhs, rhs});
    }
    return rows;
}

} // namespace patricia
