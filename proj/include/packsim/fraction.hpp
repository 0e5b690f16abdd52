#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace packsim {

/// Exact fraction over 64-bit integers. Used for partition breakpoints,
/// size-law parameters and anything else that must compare exactly.
/// Intermediate products go through __int128; a result that does not fit
/// back into int64 throws (desk-scale guard, never hit by the shipped
/// partitions whose denominators divide 3 * 2^m * 10^12).
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Frac() = default;
    Frac(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }
    static Frac of(std::int64_t n) { return Frac(n, 1); }

    void normalize();

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const { return num == 0; }

    friend bool operator==(const Frac& a, const Frac& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }
    friend bool operator<(const Frac& a, const Frac& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Frac& a, const Frac& b) { return !(b < a); }
    friend bool operator>(const Frac& a, const Frac& b) { return b < a; }
    friend bool operator>=(const Frac& a, const Frac& b) { return !(a < b); }

    friend Frac operator+(const Frac& a, const Frac& b) {
        return from128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                       static_cast<__int128>(a.den) * b.den);
    }
    friend Frac operator-(const Frac& a, const Frac& b) {
        return from128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                       static_cast<__int128>(a.den) * b.den);
    }
    friend Frac operator*(const Frac& a, const Frac& b) {
        return from128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
    }
    friend Frac operator/(const Frac& a, const Frac& b) {
        if (b.num == 0) throw std::domain_error("Frac: division by zero");
        return from128(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
    }

    std::string str() const;

    static Frac from128(__int128 n, __int128 d);
};

/// Parses "a/b", a plain integer, or a decimal string like "0.4" (exact,
/// i.e. 0.4 becomes 2/5).
Frac parse_frac(const std::string& text);

}  // namespace packsim
