#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hardcomplete {

/// Exact rational arithmetic on int64 numerator/denominator with overflow
/// detection via 128-bit intermediates. Used wherever float equality would be
/// a trap: partition weights, exact split verification, brute-force oracles.
class Rational {
public:
    Rational() : num_(0), den_(1) {}

    Rational(std::int64_t num, std::int64_t den = 1) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num_ = g ? num / g : num;
        den_ = g ? den / g : den;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p/q" or a plain integer "p".
    static Rational parse(const std::string& s) {
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(std::stoll(s));
            return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        }
    }

    /// Exact conversion of a finite double (every finite double is dyadic).
    /// Throws if the exact form does not fit in int64.
    static Rational from_double_exact(double x) {
        if (!std::isfinite(x)) throw std::invalid_argument("Rational: non-finite double");
        if (x == 0.0) return Rational(0);
        int exp = 0;
        double m = std::frexp(x, &exp); // x = m * 2^exp, |m| in [0.5, 1)
        // scale mantissa to an integer (at most 53 doublings)
        while (m != std::floor(m)) {
            m *= 2.0;
            --exp;
        }
        if (std::abs(m) > 9.0e18) throw std::overflow_error("Rational: mantissa overflow");
        auto num = static_cast<std::int64_t>(m);
        Rational r(num);
        for (; exp > 0; --exp) r = r * Rational(2);
        for (; exp < 0; ++exp) r = r / Rational(2);
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                            i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                            i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return make_checked(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

private:
    using i128 = __int128;

    static Rational make_checked(i128 num, i128 den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i128 a = num < 0 ? -num : num;
        i128 b = den;
        while (b) { i128 t = a % b; a = b; b = t; }
        if (a) { num /= a; den /= a; }
        constexpr i128 lim = 9223372036854775807LL;
        if (num > lim || num < -lim || den > lim)
            throw std::overflow_error("Rational: int64 overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace hardcomplete
