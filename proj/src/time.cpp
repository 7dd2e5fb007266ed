#include "svcsched/time.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace svc {

namespace {

using i128 = __int128;

Time narrow(i128 v) {
    if (v > std::numeric_limits<Time>::max() || v < std::numeric_limits<Time>::min())
        throw std::overflow_error("time value out of range");
    return static_cast<Time>(v);
}

Ratio make(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return Ratio{narrow(num), narrow(den)};
}

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument("not an integer: " + std::string(s));
    return v;
}

}  // namespace

std::string ExtTime::str() const {
    return is_inf() ? "inf" : std::to_string(v_);
}

Ratio Ratio::reduced() const { return make(num, den); }

std::string Ratio::str() const {
    if (den == 1)
        return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Ratio Ratio::parse(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("empty ratio");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto n = parse_int(text.substr(0, slash));
        auto d = parse_int(text.substr(slash + 1));
        if (d == 0)
            throw std::invalid_argument("zero denominator");
        return make(n, d);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (frac.size() > 15)
            throw std::invalid_argument("too many decimals: " + std::string(text));
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            den *= 10;
        std::int64_t w = whole.empty() ? 0 : parse_int(whole);
        std::int64_t f = frac.empty() ? 0 : parse_int(frac);
        return make(static_cast<i128>(w) * den + f, den);
    }
    return Ratio{parse_int(text), 1};
}

Ratio operator*(Ratio a, Ratio b) { return make(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den); }

Ratio operator+(Ratio a, Ratio b) {
    return make(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                static_cast<i128>(a.den) * b.den);
}

Ratio operator/(Ratio a, Ratio b) {
    if (b.num == 0)
        throw std::domain_error("division by zero ratio");
    return make(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}

bool operator<(Ratio a, Ratio b) { return static_cast<i128>(a.num) * b.den < static_cast<i128>(b.num) * a.den; }
bool operator<=(Ratio a, Ratio b) { return !(b < a); }

Time mul_floor(Time a, Ratio r) { return narrow(static_cast<i128>(a) * r.num / r.den); }

Time mul_ceil(Time a, Ratio r) {
    i128 p = static_cast<i128>(a) * r.num;
    return narrow((p + r.den - 1) / r.den);
}

bool le_scaled(Time a, Time b, Ratio r) {
    return static_cast<i128>(a) * r.den <= static_cast<i128>(b) * r.num;
}

}  // namespace svc
