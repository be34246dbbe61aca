#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace patricia {

using HPReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr unsigned default_precision_bits = 256;

inline unsigned env_precision_bits()
{
    if (const char* s = std::getenv("PATRICIA_PRECISION_BITS")) {
        long v = std::strtol(s, nullptr, 10);
        if (v >= 64) return static_cast<unsigned>(v);
    }
    return default_precision_bits;
}

inline unsigned bits_to_digits10(unsigned bits)
{
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

inline unsigned& working_bits()
{
    static thread_local unsigned bits = default_precision_bits;
    return bits;
}

// Sets the precision of newly created HPReal values for the lifetime of the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits)
        : saved_digits_(HPReal::default_precision()), saved_bits_(working_bits())
    {
        if (bits < 64) throw domain_error("precision_bits must be at least 64");
        HPReal::default_precision(bits_to_digits10(bits));
        mpfr_set_default_prec(static_cast<mpfr_prec_t>(bits));
        working_bits() = bits;
    }
    ~PrecisionScope()
    {
        HPReal::default_precision(saved_digits_);
        mpfr_set_default_prec(static_cast<mpfr_prec_t>(saved_bits_));
        working_bits() = saved_bits_;
    }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_digits_;
    unsigned saved_bits_;
};

inline unsigned current_bits() { return working_bits(); }

inline HPReal hp(const std::string& decimal) { return HPReal(decimal); }
inline HPReal hp(long v) { return HPReal(v); }

inline HPReal epsilon_hp()
{
    return boost::multiprecision::pow(HPReal(2), -static_cast<long>(current_bits()));
}

struct Bias {
    HPReal p;
    HPReal q;
    std::string text;

    Bias() = default;
    explicit Bias(const std::string& decimal)
        : p(decimal), q(1 - HPReal(decimal)), text(decimal)
    {
        if (p < HPReal("0.5") || p >= 1) throw domain_error("bias p must satisfy 1/2 <= p < 1");
    }
    explicit Bias(const HPReal& pv)
        : p(pv), q(1 - pv), text(pv.str(20))
    {
        if (p < HPReal("0.5") || p >= 1) throw domain_error("bias p must satisfy 1/2 <= p < 1");
    }
    bool symmetric() const { return p == q; }
};

inline BigInt binomial(unsigned n, unsigned k)
{
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline HPReal hp_pow(const HPReal& base, const HPReal& exponent)
{
    if (base <= 0) throw domain_error("hp_pow requires a positive base");
    if (exponent == 0) return HPReal(1);
    return boost::multiprecision::pow(base, exponent);
}

inline HPReal hp_pow(const HPReal& base, long exponent)
{
    if (base == 0) {
        if (exponent == 0) return HPReal(1);
        if (exponent < 0) throw domain_error("hp_pow: zero to a negative power");
        return HPReal(0);
    }
    return boost::multiprecision::pow(base, exponent);
}

inline HPReal factorial_hp(unsigned n)
{
    HPReal r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline std::vector<HPReal> factorial_table(unsigned n)
{
    std::vector<HPReal> f(n + 1);
    f[0] = 1;
    for (unsigned i = 1; i <= n; ++i) f[i] = f[i - 1] * i;
    return f;
}

inline HPReal gamma_hp(const HPReal& x)
{
    HPReal r;
    mpfr_gamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

// Upper incomplete gamma Gamma(s, z).
inline HPReal gamma_upper_hp(const HPReal& s, const HPReal& z)
{
    HPReal r;
    mpfr_gamma_inc(r.backend().data(), s.backend().data(), z.backend().data(), MPFR_RNDN);
    return r;
}

inline HPReal log_hp(const HPReal& x) { return boost::multiprecision::log(x); }
inline HPReal exp_hp(const HPReal& x) { return boost::multiprecision::exp(x); }
inline HPReal abs_hp(const HPReal& x) { return boost::multiprecision::abs(x); }
inline HPReal sqrt_hp(const HPReal& x) { return boost::multiprecision::sqrt(x); }

inline long floor_long(const HPReal& x) { return boost::multiprecision::floor(x).convert_to<long>(); }
inline long ceil_long(const HPReal& x) { return boost::multiprecision::ceil(x).convert_to<long>(); }

// Pairwise summation via a binary counter of partial sums.
class PairwiseSum {
public:
    void add(const HPReal& x)
    {
        HPReal carry = x;
        std::size_t i = 0;
        for (; i < levels_.size() && filled_[i]; ++i) {
            carry += levels_[i];
            filled_[i] = false;
        }
        if (i == levels_.size()) {
            levels_.push_back(carry);
            filled_.push_back(true);
        } else {
            levels_[i] = carry;
            filled_[i] = true;
        }
    }
    HPReal value() const
    {
        HPReal s = 0;
        for (std::size_t i = 0; i < levels_.size(); ++i)
            if (filled_[i]) s += levels_[i];
        return s;
    }

private:
    std::vector<HPReal> levels_;
    std::vector<bool> filled_;
};

inline HPReal pairwise_sum(const std::vector<HPReal>& xs)
{
    PairwiseSum s;
    for (const auto& x : xs) s.add(x);
    return s.value();
}

// Decimal string with the given number of significant digits.
inline std::string to_sig(const HPReal& x, int digits = 15)
{
    if (x == 0) return "0";
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), x.backend().data());
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

inline double to_double(const HPReal& x) { return x.convert_to<double>(); }

inline HPReal rel_diff(const HPReal& a, const HPReal& b)
{
    if (b == 0) return abs_hp(a);
    return abs_hp(a - b) / abs_hp(b);
}

} // namespace patricia
