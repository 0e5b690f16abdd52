#include "packsim/fraction.hpp"

#include <cctype>
#include <limits>

namespace packsim {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

void Frac::normalize() {
    if (den == 0) throw std::domain_error("Frac: zero denominator");
    *this = from128(num, den);
}

Frac Frac::from128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Frac: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) throw std::overflow_error("Frac: value does not fit in 64 bits");
    Frac f;
    f.num = static_cast<std::int64_t>(n);
    f.den = static_cast<std::int64_t>(d);
    return f;
}

std::string Frac::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Frac parse_frac(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_frac: empty string");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::stoll(text.substr(0, slash));
        std::int64_t d = std::stoll(text.substr(slash + 1));
        return Frac(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Frac::of(std::stoll(text));
    bool neg = text[0] == '-';
    std::string ipart = text.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
    std::string fpart = text.substr(dot + 1);
    if (fpart.size() > 18) throw std::invalid_argument("parse_frac: too many decimal digits: " + text);
    for (char c : fpart)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("parse_frac: bad decimal: " + text);
    std::int64_t ip = ipart.empty() ? 0 : std::stoll(ipart);
    std::int64_t fp = fpart.empty() ? 0 : std::stoll(fpart);
    __int128 den = 1;
    for (std::size_t i = 0; i < fpart.size(); ++i) den *= 10;
    __int128 num = static_cast<__int128>(ip) * den + fp;
    if (neg) num = -num;
    return Frac::from128(num, den);
}

}  // namespace packsim
