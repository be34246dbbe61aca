#pragma once

#include <cmath>
#include <stdexcept>

namespace patricia {

struct Prediction {
    double point_estimate = 0;
    double window_low = 0;   // k_L
    double window_high = 0;  // k_U
    double epsilon = 0;
};

inline double entropy(double p)
{
    double q = 1 - p;
    double h = 0;
    if (p > 0) h -= p * std::log(p);
    if (q > 0) h -= q * std::log(q);
    return h;
}

// H_n: log_{1/p} n + psi_*(n), psi_* = (1/2) log_{p/q} log n (p > q) or sqrt(2 log_2 n) (p = q)
inline Prediction predict_height(double n, double p, double epsilon = 0.5)
{
    if (n < 3) throw std::domain_error("predict_height requires n >= 3");
    if (p < 0.5 || p >= 1) throw std::domain_error("predict_height requires 1/2 <= p < 1");
    double q = 1 - p;
    double base = std::log(n) / std::log(1 / p);
    double psi = p == q ? std::sqrt(2 * std::log2(n)) : 0.5 * std::log(std::log(n)) / std::log(p / q);
    return {base + psi, base + (1 - epsilon) * psi, base + (1 + epsilon) * psi, epsilon};
}

// F_n: log_{1/q} n + phi_*(n), phi_* = -log_{1/q} log log n (p > q) or -log_2 log n (p = q)
inline Prediction predict_fillup(double n, double p, double epsilon = 0.5)
{
    if (n < 16) throw std::domain_error("predict_fillup requires n >= 16");
    if (p < 0.5 || p >= 1) throw std::domain_error("predict_fillup requires 1/2 <= p < 1");
    double q = 1 - p;
    double base = std::log(n) / std::log(1 / q);
    double phi = p == q ? -std::log2(std::log(n)) : -std::log(std::log(std::log(n))) / std::log(1 / q);
    return {base + phi, base + (1 + epsilon) * phi, base + (1 - epsilon) * phi, epsilon};
}

struct DepthLimits {
    double liminf = 0;
    double typical = 0;
    double limsup = 0;
    bool degenerate = false;
};

inline DepthLimits depth_limits(double p)
{
    if (p < 0.5 || p >= 1) throw std::domain_error("depth_limits requires 1/2 <= p < 1");
    double q = 1 - p;
    DepthLimits d{1 / std::log(1 / q), 1 / entropy(p), 1 / std::log(1 / p), p == q};
    return d;
}

} // namespace patricia
