#pragma once

// Number types shared by the library.
//
//  Rational  exact arithmetic (GMP) for every quantity that is a ratio of
//            integers: parameters, average degrees, charge coefficients.
//  Real      >=128-bit binary floating point (MPFR) for quantities involving
//            exp/log (the retention constant K, log^10 k).
//  Interval  MPFR interval with outward (directed) rounding, used to certify
//            the sign of parameter constraints independently of Real.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <mpfr.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace critgraph {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// 40 decimal digits ~ 133 bits.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<40>,
                                           boost::multiprecision::et_off>;
// 78 decimal digits ~ 259 bits.
using Real256 = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<78>,
                                              boost::multiprecision::et_off>;

/// Thrown when an operation is called outside its documented domain.
class precondition_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const Real& r) { return r.convert_to<double>(); }

template <class T>
T rational_to(const Rational& r)
{
    if constexpr (std::is_same_v<T, double>) {
        return r.convert_to<double>();
    } else {
        return T(numerator(r)) / T(denominator(r));
    }
}

inline std::string to_string(const Rational& r) { return r.str(); }

/// Parses "p/q", an integer, or a decimal with optional exponent ("2.6e-10")
/// into the exact rational it denotes.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    };
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) return fail();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) return fail();
        return num / den;
    }

    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long long scale = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) --scale;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!seen_digit) return fail();
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') return fail();
        ++i;
        long long exponent = 0;
        auto rest = text.substr(i);
        if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
        if (ec != std::errc() || ptr != rest.data() + rest.size()) return fail();
        scale += exponent;
    }
    // a leading zero would make the BigInt parser read octal
    const auto nz = digits.find_first_not_of('0');
    BigInt mantissa(nz == std::string::npos ? std::string("0") : digits.substr(nz));
    Rational value(mantissa);
    if (scale > 0) {
        value *= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale)));
    } else if (scale < 0) {
        value /= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-scale)));
    }
    return negative ? Rational(-value) : value;
}

/// Shortest round-trip decimal of a double, read back exactly. Used when a
/// parameter arrives as a JSON number: 2.6e-10 becomes 26/10^11, not the
/// binary approximation.
inline Rational rational_from_double(double x)
{
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite number");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::invalid_argument("cannot format number");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

/// Smallest integer >= r.
inline BigInt ceil(const Rational& r)
{
    BigInt q = numerator(r) / denominator(r);  // truncates toward zero
    if (Rational(q) < r) q += 1;
    return q;
}

/// Closed interval [lo, hi] over MPFR with outward rounding on every
/// operation. Arithmetic is the textbook interval extension; division by an
/// interval containing zero throws.
class Interval {
public:
    static constexpr mpfr_prec_t precision = 256;

    Interval() : Interval(0L) {}
    explicit Interval(long value)
    {
        init();
        mpfr_set_si(lo_, value, MPFR_RNDD);
        mpfr_set_si(hi_, value, MPFR_RNDU);
    }
    explicit Interval(const Rational& value)
    {
        init();
        mpfr_set_q(lo_, value.backend().data(), MPFR_RNDD);
        mpfr_set_q(hi_, value.backend().data(), MPFR_RNDU);
    }
    Interval(const Interval& other)
    {
        init();
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    Interval& operator=(const Interval& other)
    {
        if (this != &other) {
            mpfr_set(lo_, other.lo_, MPFR_RNDD);
            mpfr_set(hi_, other.hi_, MPFR_RNDU);
        }
        return *this;
    }
    ~Interval()
    {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    /// True when every point of *this is strictly below every point of rhs.
    bool certainly_less(const Interval& rhs) const { return mpfr_less_p(hi_, rhs.lo_) != 0; }
    bool certainly_less_equal(const Interval& rhs) const { return mpfr_lessequal_p(hi_, rhs.lo_) != 0; }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    friend Interval operator+(const Interval& a, const Interval& b)
    {
        Interval r;
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a, const Interval& b)
    {
        Interval r;
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a)
    {
        Interval r;
        mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
        return r;
    }
    friend Interval operator*(const Interval& a, const Interval& b)
    {
        Interval r;
        mpfr_t t;
        mpfr_init2(t, precision);
        // lower bound: min of the four products rounded down
        mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        // upper bound: max of the four products rounded up
        mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }
    friend Interval operator/(const Interval& a, const Interval& b)
    {
        if (b.contains_zero()) throw std::domain_error("interval division by an interval containing 0");
        Interval inv;
        mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
        mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
        return a * inv;
    }
    friend Interval exp(const Interval& a)
    {
        Interval r;
        mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }

private:
    void init()
    {
        mpfr_init2(lo_, precision);
        mpfr_init2(hi_, precision);
    }

    mpfr_t lo_;
    mpfr_t hi_;
};

template <>
inline Interval rational_to<Interval>(const Rational& r)
{
    return Interval(r);
}

}  // namespace critgraph
