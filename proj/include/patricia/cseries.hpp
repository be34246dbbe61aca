#pragma once

#include "numerics.hpp"
#include "xi_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace patricia {

struct CSeriesGeometry {
    HPReal n;
    HPReal k;  // k_L
    HPReal psi;
    HPReal j_star;
    long j0 = 0;
    HPReal r0_bar;
    HPReal r1_bar;
    HPReal u;
    HPReal v;
    HPReal delta;  // j* + 1/2 - j0
    HPReal residual;
};

inline HPReal lambda_of(const Bias& b) { return log_hp(1 / b.p) / log_hp(b.p / b.q); }

inline CSeriesGeometry level_geometry(const HPReal& n, const Bias& bias, const HPReal& epsilon)
{
    if (n < 16) throw domain_error("level_geometry requires n >= 16");
    if (epsilon <= 0 || epsilon >= 1) throw domain_error("level_geometry requires 0 < epsilon < 1");
    if (bias.p <= HPReal("0.5")) throw domain_error("level_geometry requires p > 1/2");
    const HPReal& p = bias.p;
    const HPReal& q = bias.q;
    HPReal lpq = log_hp(p / q);
    HPReal lam = lambda_of(bias);
    CSeriesGeometry g;
    g.n = n;
    g.psi = (1 - epsilon) / 2 * log_hp(log_hp(n)) / lpq;
    g.k = log_hp(n) / log_hp(1 / p) + g.psi;
    HPReal r = q / p;
    auto f = [&](const HPReal& j) { return hp_pow(r, j) * (g.k - j) - lam * (j - g.psi); };
    HPReal lo = g.psi, hi = g.k;
    if (!(f(lo) > 0 && f(hi) < 0)) throw domain_error("level_geometry: no sign change in the bracketing interval");
    HPReal tol("1e-15");
    while (hi - lo > tol) {
        HPReal mid = (lo + hi) / 2;
        (f(mid) > 0 ? lo : hi) = mid;
    }
    g.j_star = (lo + hi) / 2;
    g.residual = f(g.j_star);
    g.j0 = floor_long(g.j_star + HPReal("0.5"));
    g.delta = g.j_star + HPReal("0.5") - g.j0;
    g.r0_bar = hp_pow(r, g.j0) * (g.k - g.j0);
    g.r1_bar = lam * (g.j0 - g.psi);
    g.u = g.r0_bar / g.r1_bar;
    g.v = g.r1_bar - boost::multiprecision::floor(g.r1_bar);
    return g;
}

// F_0 = p^{j0(j0+1)/2} q^{j0-1} n^{j0} p^{j0(k-j0)} r0^{r1} / Gamma(r1+1)
inline HPReal f0(const CSeriesGeometry& g, const Bias& bias)
{
    long j0 = g.j0;
    return hp_pow(bias.p, j0 * (j0 + 1) / 2) * hp_pow(bias.q, j0 - 1) * hp_pow(g.n, j0) *
           hp_pow(bias.p, HPReal(j0 * (g.k - j0))) * hp_pow(g.r0_bar, g.r1_bar) / gamma_hp(g.r1_bar + 1);
}

struct CTruncation {
    int J0 = 35;
    int L0 = 70;
    int K0 = 80;
    int R0 = 95;  // minimum half-width of every R window; windows grow until terms are negligible
};

struct CComponents {
    HPReal c1, c2, c30, c32, c31_0, c31_sum;
    HPReal total;
    std::vector<std::string> warnings;
};

namespace detail {

struct CContext {
    HPReal p, q, u, v, r, lam, lr, lu, eps;
    XiSequence xi;
    CTruncation tr;

    CContext(const HPReal& p_, const HPReal& u_, const HPReal& v_, const CTruncation& t)
        : p(p_), q(1 - p_), u(u_), v(v_), tr(t)
    {
        if (p <= HPReal("0.5") || p >= 1) throw domain_error("C series requires 1/2 < p < 1");
        if (u <= 0) throw domain_error("C series requires u > 0");
        if (v < 0 || v >= 1) throw domain_error("C series requires 0 <= v < 1");
        if (t.J0 < 1 || t.L0 < 1 || t.K0 < 1 || t.R0 < 1) throw domain_error("truncation limits must be positive");
        r = q / p;
        lam = log_hp(1 / p) / log_hp(p / q);
        lr = log_hp(r);
        lu = log_hp(u);
        eps = boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) - 8);
        xi = xi_limits(static_cast<unsigned>(t.L0 + t.J0 + t.K0 + 4), Bias(p));
    }

    HPReal theta(long J) const { return v + J * lam; }
    // p^{J(J+1)/2} q^J u^{J lambda}
    HPReal pre(long J) const
    {
        return hp_pow(p, J * (J + 1) / 2) * hp_pow(q, J) * exp_hp(J * lam * lu);
    }
};

// For fixed J, sums over R of (r^{L+J} u)^x e^{-r^x}, x = R - theta, for every L in [Llo, Lhi].
// side = 0: all R; side = -1: x <= 0 only.
inline std::vector<HPReal> r_sums(const CContext& c, long J, long Llo, long Lhi, int side)
{
    HPReal th = c.theta(J);
    long R0 = floor_long(th);  // largest R with x <= 0
    std::size_t nL = static_cast<std::size_t>(Lhi - Llo + 1);
    std::vector<HPReal> acc(nL, HPReal(0)), lb(nL);
    for (std::size_t i = 0; i < nL; ++i) lb[i] = (Llo + static_cast<long>(i) + J) * c.lr + c.lu;

    auto sweep = [&](long Rstart, int dir) {
        HPReal x = Rstart - th;
        std::vector<HPReal> bx(nL), step(nL);
        for (std::size_t i = 0; i < nL; ++i) {
            bx[i] = exp_hp(lb[i] * x);
            step[i] = exp_hp(dir * lb[i]);
        }
        std::vector<HPReal> prev(nL, HPReal(0));
        std::vector<bool> done(nL, false);
        std::size_t open = nL;
        for (long it = 0; open > 0; ++it) {
            HPReal y = exp_hp(c.lr * x);
            HPReal w = exp_hp(-y);
            for (std::size_t i = 0; i < nL; ++i) {
                if (done[i]) continue;
                HPReal t = bx[i] * w;
                acc[i] += t;
                if (it >= c.tr.R0 && t <= c.eps * acc[i] && t <= prev[i]) {
                    done[i] = true;
                    --open;
                }
                prev[i] = t;
                bx[i] *= step[i];
            }
            x += dir;
            if (it > 10000000) throw precision_error("R window did not converge");
        }
    };
    sweep(R0, -1);
    if (side == 0) sweep(R0 + 1, +1);
    return acc;
}

// For fixed J <= 0, sums over R with x > 0 of (r^{L+J} u)^x * sum_{l > -J-L} (-y)^l/l!, y = r^x, L in [0, -J].
inline std::vector<HPReal> r_sums_c32(const CContext& c, long J)
{
    HPReal th = c.theta(J);
    long Rfirst = floor_long(th) + 1;
    long Nmax = -J;
    std::size_t nL = static_cast<std::size_t>(Nmax + 1);
    std::vector<HPReal> acc(nL, HPReal(0)), bx(nL), step(nL), prev(nL, HPReal(0));
    std::vector<bool> done(nL, false);
    HPReal x = Rfirst - th;
    for (std::size_t i = 0; i < nL; ++i) {
        HPReal lb = (static_cast<long>(i) + J) * c.lr + c.lu;
        bx[i] = exp_hp(lb * x);
        step[i] = exp_hp(lb);
    }
    std::vector<HPReal> tails(nL + 1);
    std::size_t open = nL;
    for (long it = 0; open > 0; ++it) {
        HPReal y = exp_hp(c.lr * x);
        // tail(Nmax) directly, then tail(N) = (-y)^{N+1}/(N+1)! + tail(N+1)
        HPReal term = 1;
        for (long l = 1; l <= Nmax + 1; ++l) term = term * (-y) / l;
        HPReal first = term;
        HPReal tl = 0;
        for (long l = Nmax + 1;; ++l) {
            tl += term;
            term = term * (-y) / (l + 1);
            if (abs_hp(term) <= c.eps * abs_hp(tl) || term == 0) break;
        }
        tails[static_cast<std::size_t>(Nmax)] = tl;
        HPReal tN1 = first;  // (-y)^{N+1}/(N+1)! for N = Nmax
        for (long N = Nmax - 1; N >= 0; --N) {
            tN1 = tN1 * (N + 2) / (-y);  // (-y)^{N+1}/(N+1)!
            tails[static_cast<std::size_t>(N)] = tails[static_cast<std::size_t>(N + 1)] + tN1;
        }
        for (std::size_t i = 0; i < nL; ++i) {
            if (done[i]) continue;
            long N = -J - static_cast<long>(i);
            HPReal t = bx[i] * tails[static_cast<std::size_t>(N)];
            acc[i] += t;
            HPReal at = abs_hp(t);
            if (it >= c.tr.R0 && at <= c.eps * abs_hp(acc[i]) && at <= prev[i]) {
                done[i] = true;
                --open;
            }
            prev[i] = at;
            bx[i] *= step[i];
        }
        x += 1;
        if (it > 10000000) throw precision_error("C32 R window did not converge");
    }
    return acc;
}

} // namespace detail

inline HPReal c1(const detail::CContext& c)
{
    PairwiseSum s;
    for (long J = 1; J <= c.tr.J0; ++J) {
        auto R = detail::r_sums(c, J, 0, c.tr.L0, 0);
        HPReal in = 0, pl = 1;
        for (long L = 0; L <= c.tr.L0; ++L) {
            in += c.xi[L + 1] * pl * R[L];
            pl *= c.p;
        }
        s.add(c.pre(J) * in);
    }
    return s.value();
}

inline HPReal c2(const detail::CContext& c)
{
    PairwiseSum s;
    for (long J = -c.tr.J0; J <= 0; ++J) {
        if (-J + 1 > c.tr.L0) continue;
        auto R = detail::r_sums(c, J, -J + 1, c.tr.L0, 0);
        HPReal in = 0;
        for (long L = -J + 1; L <= c.tr.L0; ++L) in += c.xi[L + 1] * hp_pow(c.p, L) * R[L + J - 1];
        s.add(c.pre(J) * in);
    }
    return s.value();
}

inline HPReal c30(const detail::CContext& c)
{
    PairwiseSum s;
    for (long J = -c.tr.J0; J <= 0; ++J) {
        auto R = detail::r_sums(c, J, 0, -J, -1);
        HPReal in = 0, pl = 1;
        for (long L = 0; L <= -J; ++L) {
            in += c.xi[L + 1] * pl * R[L];
            pl *= c.p;
        }
        s.add(c.pre(J) * in);
    }
    return s.value();
}

inline HPReal c32(const detail::CContext& c)
{
    PairwiseSum s;
    for (long J = -c.tr.J0; J <= 0; ++J) {
        auto R = detail::r_sums_c32(c, J);
        HPReal in = 0, pl = 1;
        for (long L = 0; L <= -J; ++L) {
            in += c.xi[L + 1] * pl * R[L];
            pl *= c.p;
        }
        s.add(c.pre(J) * in);
    }
    return s.value();
}

// sum_{J<=0} sum_{L=0}^{-J} xi_{L+1} (-1)^{-J-L}/(-J-L)! p^{J(J+1)/2+L} q^J sum_{J lambda + v <= R <= 0} u^{R-v}
inline HPReal c31_0(const detail::CContext& c)
{
    auto fact = factorial_table(static_cast<unsigned>(c.tr.J0) + 1);
    PairwiseSum s;
    for (long J = -c.tr.J0; J <= 0; ++J) {
        long lo = ceil_long(J * c.lam + c.v);
        HPReal geo = 0;
        for (long R = lo; R <= 0; ++R) geo += exp_hp((R - c.v) * c.lu);
        if (geo == 0) continue;
        HPReal in = 0;
        for (long L = 0; L <= -J; ++L) {
            long N = -J - L;
            HPReal t = c.xi[L + 1] / fact[N] * hp_pow(c.p, J * (J + 1) / 2 + L) * hp_pow(c.q, J);
            in += (N % 2) ? HPReal(-t) : t;
        }
        s.add(in * geo);
    }
    return s.value();
}

// sum_{K=1}^{K0} C_{31,K}, each in its (L, M) form with L <= L0 and K <= M <= K0:
// xi_{L+1} (-1)^{M-K}/(M-K)! p^{((L+M)^2+L-M)/2 - K(L+M)} q^{-L-M} sum_{R <= v-(M+L) lambda} (u (q/p)^{-K})^{R-v}
inline HPReal c31_sum(const detail::CContext& c, std::vector<HPReal>* per_k = nullptr)
{
    auto fact = factorial_table(static_cast<unsigned>(c.tr.K0) + 1);
    HPReal lp = log_hp(c.p), lq = log_hp(c.q);
    long Smax = c.tr.L0 + c.tr.K0;
    PairwiseSum total;
    if (per_k) per_k->assign(static_cast<std::size_t>(c.tr.K0) + 1, HPReal(0));
    for (long K = 1; K <= c.tr.K0; ++K) {
        HPReal lb = c.lu - K * c.lr;  // log b, b = u (q/p)^{-K}
        if (lb <= 0) throw domain_error("C31,K geometric ratio must exceed 1 (u too small)");
        HPReal lgeo_den = log_hp(1 - exp_hp(-lb));
        std::vector<HPReal> G(static_cast<std::size_t>(Smax) + 1);
        for (long S = K; S <= Smax; ++S) {
            long Rmax = floor_long(c.v - S * c.lam);
            G[S] = (Rmax - c.v) * lb - lgeo_den - K * S * lp - S * lq;
        }
        PairwiseSum sk;
        for (long L = 0; L <= c.tr.L0; ++L) {
            for (long M = K; M <= c.tr.K0; ++M) {
                long S = L + M;
                HPReal e = HPReal(S * S + L - M) / 2 * lp + G[S];
                HPReal t = c.xi[L + 1] / fact[M - K] * exp_hp(e);
                sk.add(((M - K) % 2) ? HPReal(-t) : t);
            }
        }
        HPReal vk = sk.value();
        if (per_k) (*per_k)[K] = vk;
        total.add(vk);
    }
    return total.value();
}

inline CComponents c_components(const HPReal& p, const HPReal& u, const HPReal& v, const CTruncation& tr = {})
{
    detail::CContext c(p, u, v, tr);
    CComponents out;
    out.c1 = c1(c);
    out.c2 = c2(c);
    out.c30 = c30(c);
    out.c32 = c32(c);
    out.c31_0 = c31_0(c);
    std::vector<HPReal> perk;
    out.c31_sum = c31_sum(c, &perk);
    out.total = -out.c1 - out.c2 - out.c30 - out.c32 - out.c31_0 + out.c31_sum;
    HPReal scale = abs_hp(out.total) * HPReal("1e-5");
    if (abs_hp(perk.back()) > scale)
        out.warnings.push_back("C31,K at K = K0 exceeds 1e-5 of |C|; raise K0");
    return out;
}

inline HPReal c_total(const HPReal& p, const HPReal& u, const HPReal& v, const CTruncation& tr = {})
{
    return c_components(p, u, v, tr).total;
}

struct CGradient {
    HPReal dp, du, dv;
};

// Central differences of c_total.
inline CGradient grad_c(const HPReal& p, const HPReal& u, const HPReal& v, const CTruncation& tr, const HPReal& step)
{
    if (step <= boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) / 3))
        throw domain_error("grad_c: step below the precision noise floor");
    CGradient g;
    g.dp = (c_total(p + step, u, v, tr) - c_total(p - step, u, v, tr)) / (2 * step);
    g.du = (c_total(p, u + step, v, tr) - c_total(p, u - step, v, tr)) / (2 * step);
    g.dv = (c_total(p, u, v + step, tr) - c_total(p, u, v - step, tr)) / (2 * step);
    return g;
}

struct H1Components {
    HPReal c1, c2, c30, c32, c31_0, c31_sum, total;
};

// Limit of eta * C(p, (p/q)^{u~}, v) as p -> 1/2.
inline H1Components h1_components(const HPReal& ut, int J0 = 35, int L0 = 70)
{
    if (ut < HPReal("-0.5") || ut > HPReal("0.5")) throw domain_error("h1 requires -1/2 <= u~ <= 1/2");
    XiSequence xi = xi_limits(static_cast<unsigned>(L0 + J0 + 4), Bias(std::string("0.5")));
    auto fact = factorial_table(static_cast<unsigned>(J0 + L0 + 200));
    HPReal two = 2;
    HPReal ln2 = log_hp(two);
    HPReal eps = boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()) - 8);
    auto w = [&](long J) { return exp_hp((HPReal(-J * (J + 1)) / 2 - J + J * ut) * ln2); };
    auto p2 = [&](long e) { return hp_pow(two, e); };
    H1Components h;
    h.c1 = h.c2 = h.c30 = h.c32 = h.c31_0 = h.c31_sum = 0;
    for (long J = 1; J <= J0; ++J) {
        HPReal in = 0;
        for (long L = 0; L <= L0; ++L) in += xi[L + 1] * p2(-L) * gamma_hp(J + L - ut);
        h.c1 += w(J) * in;
    }
    for (long J = -J0; J <= 0; ++J) {
        HPReal in2 = 0, in30 = 0, in32 = 0;
        for (long L = -J + 1; L <= L0; ++L) in2 += xi[L + 1] * p2(-L) * gamma_hp(J + L - ut);
        for (long L = 0; L <= -J; ++L) {
            in30 += xi[L + 1] * p2(-L) * gamma_upper_hp(J + L - ut, HPReal(1));
            long N = -J - L;
            HPReal tl = 0;
            for (long l = N + 1;; ++l) {
                HPReal t = HPReal(1) / (fact.at(static_cast<std::size_t>(l)) * (l - N - ut));
                tl += (l % 2) ? HPReal(-t) : t;
                if (t <= eps * abs_hp(tl)) break;
            }
            in32 += xi[L + 1] * p2(-L) * tl;
        }
        HPReal wj = w(J);
        h.c2 += wj * in2;
        h.c30 += wj * in30;
        h.c32 += wj * in32;
    }
    for (long J = -J0; J <= 0; ++J) {
        HPReal g = ut == 0 ? HPReal(-J * ln2) : HPReal((1 - exp_hp(J * ut * ln2)) / ut);
        for (long L = 0; L <= -J; ++L) {
            long N = -J - L;
            HPReal t = xi[L + 1] / fact[N] * exp_hp((HPReal(-J * (J + 1)) / 2 - J - L) * ln2) * g;
            h.c31_0 += (N % 2) ? HPReal(-t) : t;
        }
    }
    for (long J = -J0; J <= -1; ++J) {
        for (long L = 0; L <= -J - 1; ++L) {
            HPReal inner = 0;
            for (long K = 1; K <= -J - L; ++K) {
                long N = -J - L - K;
                HPReal t = HPReal(1) / (fact[N] * (K + ut));
                inner += (N % 2) ? HPReal(-t) : t;
            }
            h.c31_sum += xi[L + 1] * exp_hp((HPReal(-J * (J + 1)) / 2 - J - L + J * ut) * ln2) * inner;
        }
    }
    h.total = -h.c1 - h.c2 - h.c30 - h.c32 - h.c31_0 + h.c31_sum;
    return h;
}

inline HPReal h1(const HPReal& ut, int J0 = 35, int L0 = 70) { return h1_components(ut, J0, L0).total; }

} // namespace patricia
