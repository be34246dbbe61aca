#pragma once

#include "numerics.hpp"
#include "profile_exact.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace patricia {

struct TransformContext {
    Bias bias;
    const ProfileTable* profile = nullptr;

    explicit TransformContext(const ProfileTable& t)
        : bias(t.bias), profile(&t)
    {
    }

    // n + 64 sqrt(n) + 64
    static unsigned default_cutoff(double z) { return static_cast<unsigned>(std::ceil(z + 64.0 * std::sqrt(z) + 64.0)); }

    unsigned m_cutoff(const HPReal& z) const
    {
        unsigned c = default_cutoff(to_double(z));
        if (c > profile->N_max) throw precision_error("Poisson sum needs a larger profile table (m_cutoff exceeds N_max)");
        return c;
    }
};

inline HPReal T(const HPReal& s, const Bias& bias)
{
    return hp_pow(bias.p, HPReal(-s)) + hp_pow(bias.q, HPReal(-s));
}

inline HPReal T(long s, const Bias& bias)
{
    return hp_pow(bias.p, -s) + hp_pow(bias.q, -s);
}

struct PoissonValue {
    HPReal value;
    HPReal d1;
    HPReal d2;
};

namespace detail {

// Poisson weights z^m e^{-z}/m! for m = 0..M
inline std::vector<HPReal> poisson_weights(const HPReal& z, unsigned M)
{
    std::vector<HPReal> t(M + 1);
    t[0] = exp_hp(-z);
    for (unsigned m = 1; m <= M; ++m) t[m] = t[m - 1] * z / m;
    return t;
}

template <class Coef>
PoissonValue poisson_sum(const HPReal& z, unsigned M, Coef coef)
{
    auto t = poisson_weights(z, M);
    PoissonValue v{0, 0, 0};
    for (unsigned m = 0; m <= M; ++m) {
        HPReal c = coef(m);
        if (c == 0) continue;
        v.value += c * t[m];
        HPReal tm1 = m >= 1 ? t[m - 1] : HPReal(0);
        HPReal tm2 = m >= 2 ? t[m - 2] : HPReal(0);
        v.d1 += c * (tm1 - t[m]);
        v.d2 += c * (tm2 - 2 * tm1 + t[m]);
    }
    return v;
}

} // namespace detail

// G_k(z) = sum_m mu_{m,k} z^m e^{-z}/m!, with first and second derivatives.
inline PoissonValue poisson_G(unsigned k, const HPReal& z, const TransformContext& ctx)
{
    if (z <= 0) throw domain_error("poisson_G requires z > 0");
    unsigned M = ctx.m_cutoff(z);
    return detail::poisson_sum(z, M, [&](unsigned m) { return ctx.profile->mean(m, k); });
}

// Residual of the Poisson functional equation at (k, z), k >= 1.
inline HPReal functional_equation_residual(unsigned k, const HPReal& z, const TransformContext& ctx)
{
    if (k < 1) throw domain_error("functional equation needs k >= 1");
    const HPReal& p = ctx.bias.p;
    const HPReal& q = ctx.bias.q;
    auto G = [&](unsigned kk, const HPReal& x) { return poisson_G(kk, x, ctx).value; };
    HPReal lhs = G(k, z);
    HPReal rhs = G(k - 1, p * z) + G(k - 1, q * z) + exp_hp(-p * z) * (G(k, q * z) - G(k - 1, q * z)) +
                 exp_hp(-q * z) * (G(k, p * z) - G(k - 1, p * z));
    return lhs - rhs;
}

// mu_{n,k} ~ G(n) - (n/2) G''(n)
inline HPReal depoisson_mu(unsigned n, unsigned k, const TransformContext& ctx)
{
    PoissonValue g = poisson_G(k, HPReal(n), ctx);
    return g.value - HPReal(n) / 2 * g.d2;
}

struct PoissonVariance {
    HPReal value;  // V(z)
    HPReal d2;     // V''(z)
    PoissonValue G;
};

// V(z) = sum_m s_{m,k} z^m e^{-z}/m! - G(z)^2
inline PoissonVariance poisson_variance(unsigned k, const HPReal& z, const TransformContext& ctx)
{
    if (!ctx.profile->has_second) throw domain_error("poisson_variance needs the second-moment layer");
    if (z <= 0) throw domain_error("poisson_variance requires z > 0");
    unsigned M = ctx.m_cutoff(z);
    PoissonValue S = detail::poisson_sum(z, M, [&](unsigned m) { return ctx.profile->second(m, k); });
    PoissonValue G = detail::poisson_sum(z, M, [&](unsigned m) { return ctx.profile->mean(m, k); });
    PoissonVariance v;
    v.G = G;
    v.value = S.value - G.value * G.value;
    v.d2 = S.d2 - 2 * G.d1 * G.d1 - 2 * G.value * G.d2;
    return v;
}

// Var ~ V(n) - (n/2) V''(n) - n G'(n)^2 + n^2 G''(n)^2 / 4
inline HPReal depoisson_var(unsigned n, unsigned k, const TransformContext& ctx)
{
    HPReal z(n);
    PoissonVariance v = poisson_variance(k, z, ctx);
    return v.value - z / 2 * v.d2 - z * v.G.d1 * v.G.d1 + z * z * v.G.d2 * v.G.d2 / 4;
}

// A_k(s) = sum_{j=0}^k T(s)^{-j} sum_{m>=j} T(-m)(mu_{m,j} - mu_{m,j-1}) Gamma(m+s)/(Gamma(s+1)Gamma(m+1)),
// with the Gamma ratio taken as the rising product (s+1)...(s+m-1)/m!.
inline HPReal a_k(const HPReal& s, unsigned k, unsigned m_cap, const TransformContext& ctx)
{
    const ProfileTable& t = *ctx.profile;
    if (m_cap > t.N_max) throw precision_error("a_k: m_cap exceeds the profile table");
    if (k > t.k_max) throw domain_error("a_k: profile table lacks column k");
    HPReal Ts = T(s, ctx.bias);
    std::vector<HPReal> ratio(m_cap + 1);
    ratio[1] = 1;
    for (unsigned m = 2; m <= m_cap; ++m) ratio[m] = ratio[m - 1] * (s + (m - 1)) / m;
    HPReal total = 0, last = 0;
    HPReal Tj = 1;
    for (unsigned j = 0; j <= k; ++j) {
        HPReal inner = 0;
        for (unsigned m = std::max(1u, j); m <= m_cap; ++m) {
            HPReal d = t.mean(m, j) - (j > 0 ? t.mean(m, j - 1) : HPReal(0));
            if (d == 0) continue;
            HPReal term = T(-static_cast<long>(m), ctx.bias) * d * ratio[m];
            inner += term;
            if (m == m_cap) last = std::max(last, abs_hp(term));
        }
        total += inner / Tj;
        Tj *= Ts;
    }
    if (last > abs_hp(total) * boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) / 2) && last > 0)
        throw precision_error("a_k: m_cap insufficient");
    return total;
}

// kappa_{m,j} for the residue representation of G_k(n).
inline HPReal kappa(unsigned m, unsigned j, const HPReal& n, unsigned k, const HPReal& rho, const Bias& bias)
{
    if (j > k) throw domain_error("kappa: need j <= k");
    HPReal Tm = T(-static_cast<long>(m), bias);
    unsigned e = k - j;
    if (rho > 0) {
        HPReal acc = 0;
        HPReal c = 1;
        for (unsigned r = 0; r <= e; ++r) {
            if (r > 0) c = c * (e - r + 1) / r;
            HPReal x = n * hp_pow(bias.p, static_cast<long>(r)) * hp_pow(bias.q, static_cast<long>(e - r));
            acc += c * hp_pow(x, static_cast<long>(m)) * exp_hp(-x);
        }
        return Tm * acc / factorial_hp(m);
    }
    if (rho == floor_long(rho)) throw domain_error("kappa: rho must be a non-integer when negative");
    long start = std::max(0L, -ceil_long(HPReal(m) + rho) + 1);
    // alternating tail sum_{l>=start} (-n)^l/l! T(-m-l)^{k-j}
    HPReal term = hp_pow(n, start) / factorial_hp(static_cast<unsigned>(start));
    if (start % 2) term = -term;
    HPReal acc = 0, peak = 0;
    HPReal eps = boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) + 4);
    for (long l = start;; ++l) {
        HPReal contrib = term * hp_pow(T(-static_cast<long>(m) - l, bias), static_cast<long>(e));
        acc += contrib;
        peak = std::max(peak, abs_hp(contrib));
        if (HPReal(l) > n && abs_hp(contrib) <= eps * std::max(abs_hp(acc), peak * eps)) break;
        if (l > start + 100000) throw precision_error("kappa: alternating series did not settle");
        term = -term * n / (l + 1);
    }
    return Tm * hp_pow(n, static_cast<long>(m)) / factorial_hp(m) * acc;
}

// G_k(n) = sum_{j=0}^k sum_{m>=j} kappa_{m,j}(mu_{m,j} - mu_{m,j-1})
inline HPReal residue_G(unsigned k, const HPReal& n, const HPReal& rho, const TransformContext& ctx)
{
    const ProfileTable& t = *ctx.profile;
    unsigned M = ctx.m_cutoff(n);
    if (k > t.k_max) throw domain_error("residue_G: profile table lacks column k");
    PairwiseSum s;
    for (unsigned j = 0; j <= k; ++j) {
        for (unsigned m = std::max(1u, j); m <= M; ++m) {
            HPReal d = t.mean(m, j) - (j > 0 ? t.mean(m, j - 1) : HPReal(0));
            if (d == 0) continue;
            s.add(kappa(m, j, n, k, rho, ctx.bias) * d);
        }
    }
    return s.value();
}

} // namespace patricia
