// rational.hpp -- exact rational arithmetic for clocks, rates and ratios
#ifndef ODRRSIM_RATIONAL_HPP
#define ODRRSIM_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace odrrsim {

// The engine core never touches floating point: times are rational seconds,
// penalty factors are byte ratios. Values are kept normalized (den > 0,
// gcd(num, den) == 1); intermediates go through 128-bit to dodge overflow.
class Ratio {
  public:
    constexpr Ratio() : num_(0), den_(1) {}
    Ratio(std::int64_t n) : num_(n), den_(1) {}
    Ratio(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    friend Ratio operator+(const Ratio& a, const Ratio& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Ratio operator-(const Ratio& a, const Ratio& b) {
        __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Ratio operator*(const Ratio& a, const Ratio& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Ratio operator/(const Ratio& a, const Ratio& b) {
        if (b.num_ == 0)
            throw std::domain_error("Ratio: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Ratio operator-() const { return Ratio(-num_, den_); }
    Ratio& operator+=(const Ratio& b) { return *this = *this + b; }
    Ratio& operator-=(const Ratio& b) { return *this = *this - b; }
    Ratio& operator*=(const Ratio& b) { return *this = *this * b; }

    friend bool operator==(const Ratio& a, const Ratio& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }
    friend bool operator<(const Ratio& a, const Ratio& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
    friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
    friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }

    // floor(a / b) as an integer; used for slot indexing.
    static std::int64_t floor_div(const Ratio& a, const Ratio& b) {
        if (b.num_ <= 0)
            throw std::domain_error("Ratio::floor_div: divisor must be positive");
        __int128 n = i128(a.num_) * b.den_;
        __int128 d = i128(a.den_) * b.num_;
        __int128 q = n / d;
        if (n % d != 0 && (n < 0)) --q;
        return narrow(q);
    }

    double to_double() const { return double(num_) / double(den_); }

    // "n" for integers, "n/d" otherwise; canonical because storage is reduced.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "n", "n/d" and plain decimals ("1.5" -> 3/2), all exact.
    static Ratio parse(const std::string& text);

  private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static std::int64_t narrow(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("Ratio: value out of 64-bit range");
        return static_cast<std::int64_t>(v);
    }

    static Ratio from_i128(__int128 n, __int128 d) {
        if (d == 0)
            throw std::domain_error("Ratio: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Ratio r;
        r.num_ = narrow(n);
        r.den_ = narrow(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void assign(std::int64_t n, std::int64_t d) {
        Ratio r = from_i128(i128(n), i128(d));
        num_ = r.num_;
        den_ = r.den_;
    }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace odrrsim

#endif
