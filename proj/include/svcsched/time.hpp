#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace svc {

using Time = std::int64_t;
using Cost = std::int64_t;

/// Nonnegative integer duration that may be +inf. Addition saturates.
class ExtTime {
public:
    constexpr ExtTime() = default;
    constexpr ExtTime(Time v) : v_(v) {}  // NOLINT(google-explicit-constructor)

    static constexpr ExtTime inf() {
        ExtTime t;
        t.v_ = kInfRep;
        return t;
    }

    constexpr bool is_inf() const { return v_ == kInfRep; }
    constexpr bool finite() const { return v_ != kInfRep; }
    // Only meaningful when finite().
    constexpr Time value() const { return v_; }

    friend constexpr ExtTime operator+(ExtTime a, ExtTime b) {
        if (a.is_inf() || b.is_inf() || a.v_ > kInfRep - b.v_)
            return inf();
        return ExtTime(a.v_ + b.v_);
    }
    ExtTime& operator+=(ExtTime o) { return *this = *this + o; }

    friend constexpr auto operator<=>(ExtTime, ExtTime) = default;
    friend constexpr bool operator==(ExtTime, ExtTime) = default;

    std::string str() const;

private:
    static constexpr Time kInfRep = std::numeric_limits<Time>::max();
    Time v_ = 0;
};

inline constexpr ExtTime kInf = ExtTime::inf();

/// Positive rational number, used for accuracy parameters and scale factors.
struct Ratio {
    std::int64_t num = 1;
    std::int64_t den = 1;

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    Ratio reduced() const;
    std::string str() const;

    /// Accepts "3", "0.25" or "1/4".
    static Ratio parse(std::string_view text);

    /// Compares representations; reduce first for value equality.
    bool operator==(const Ratio&) const = default;
};

Ratio operator*(Ratio a, Ratio b);
Ratio operator+(Ratio a, Ratio b);
Ratio operator/(Ratio a, Ratio b);
bool operator<(Ratio a, Ratio b);
bool operator<=(Ratio a, Ratio b);

/// floor(a * r) and ceil(a * r) for a >= 0, computed exactly.
Time mul_floor(Time a, Ratio r);
Time mul_ceil(Time a, Ratio r);

/// Exact test a <= b * r for a, b >= 0.
bool le_scaled(Time a, Time b, Ratio r);

}  // namespace svc
