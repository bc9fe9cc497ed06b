#pragma once

#include <cmath>

namespace flatnormal {

/// Second-order forward-mode dual number: value + e1 + e2 + e1*e2 parts,
/// with e1^2 = e2^2 = 0. Seeding e1 along u_i and e2 along u_j yields
/// df/du_i, df/du_j and d2f/du_i du_j in a single evaluation.
struct HyperDual {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d12 = 0.0;

    constexpr HyperDual() = default;
    constexpr HyperDual(double value) : v(value) {}  // NOLINT: implicit by design of AD scalars
    constexpr HyperDual(double value, double e1, double e2, double e12)
        : v(value), d1(e1), d2(e2), d12(e12) {}

    HyperDual& operator+=(const HyperDual& o) { return *this = *this + o; }
    HyperDual& operator-=(const HyperDual& o) { return *this = *this - o; }
    HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
    HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

    friend constexpr HyperDual operator+(const HyperDual& a, const HyperDual& b) {
        return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d12 + b.d12};
    }
    friend constexpr HyperDual operator-(const HyperDual& a, const HyperDual& b) {
        return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d12 - b.d12};
    }
    friend constexpr HyperDual operator-(const HyperDual& a) { return {-a.v, -a.d1, -a.d2, -a.d12}; }
    friend constexpr HyperDual operator*(const HyperDual& a, const HyperDual& b) {
        return {a.v * b.v, a.v * b.d1 + a.d1 * b.v, a.v * b.d2 + a.d2 * b.v,
                a.v * b.d12 + a.d1 * b.d2 + a.d2 * b.d1 + a.d12 * b.v};
    }
    friend HyperDual operator/(const HyperDual& a, const HyperDual& b);
};

namespace detail {
// f(x) lifted by the chain rule given f(x.v), f'(x.v), f''(x.v).
constexpr HyperDual lift(const HyperDual& x, double f0, double f1, double f2) {
    return {f0, f1 * x.d1, f1 * x.d2, f1 * x.d12 + f2 * x.d1 * x.d2};
}
}  // namespace detail

inline HyperDual reciprocal(const HyperDual& x) {
    const double inv = 1.0 / x.v;
    return detail::lift(x, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline HyperDual operator/(const HyperDual& a, const HyperDual& b) { return a * reciprocal(b); }

inline HyperDual sin(const HyperDual& x) {
    const double s = std::sin(x.v), c = std::cos(x.v);
    return detail::lift(x, s, c, -s);
}
inline HyperDual cos(const HyperDual& x) {
    const double s = std::sin(x.v), c = std::cos(x.v);
    return detail::lift(x, c, -s, -c);
}
inline HyperDual tan(const HyperDual& x) {
    const double t = std::tan(x.v), sec2 = 1.0 + t * t;
    return detail::lift(x, t, sec2, 2.0 * t * sec2);
}
inline HyperDual sinh(const HyperDual& x) {
    const double s = std::sinh(x.v), c = std::cosh(x.v);
    return detail::lift(x, s, c, s);
}
inline HyperDual cosh(const HyperDual& x) {
    const double s = std::sinh(x.v), c = std::cosh(x.v);
    return detail::lift(x, c, s, c);
}
inline HyperDual tanh(const HyperDual& x) {
    const double t = std::tanh(x.v), sech2 = 1.0 - t * t;
    return detail::lift(x, t, sech2, -2.0 * t * sech2);
}
inline HyperDual exp(const HyperDual& x) {
    const double e = std::exp(x.v);
    return detail::lift(x, e, e, e);
}
inline HyperDual log(const HyperDual& x) {
    const double inv = 1.0 / x.v;
    return detail::lift(x, std::log(x.v), inv, -inv * inv);
}
inline HyperDual sqrt(const HyperDual& x) {
    const double s = std::sqrt(x.v);
    return detail::lift(x, s, 0.5 / s, -0.25 / (s * x.v));
}
inline HyperDual atan(const HyperDual& x) {
    const double q = 1.0 / (1.0 + x.v * x.v);
    return detail::lift(x, std::atan(x.v), q, -2.0 * x.v * q * q);
}
inline HyperDual asin(const HyperDual& x) {
    const double q = 1.0 / std::sqrt(1.0 - x.v * x.v);
    return detail::lift(x, std::asin(x.v), q, x.v * q * q * q);
}
inline HyperDual acos(const HyperDual& x) {
    const double q = 1.0 / std::sqrt(1.0 - x.v * x.v);
    return detail::lift(x, std::acos(x.v), -q, -x.v * q * q * q);
}
inline HyperDual asinh(const HyperDual& x) {
    const double q = 1.0 / std::sqrt(x.v * x.v + 1.0);
    return detail::lift(x, std::asinh(x.v), q, -x.v * q * q * q);
}
inline HyperDual acosh(const HyperDual& x) {
    const double q = 1.0 / std::sqrt(x.v * x.v - 1.0);
    return detail::lift(x, std::acosh(x.v), q, -x.v * q * q * q);
}
inline HyperDual atanh(const HyperDual& x) {
    const double q = 1.0 / (1.0 - x.v * x.v);
    return detail::lift(x, std::atanh(x.v), q, 2.0 * x.v * q * q);
}
inline HyperDual pow(const HyperDual& x, double p) {
    const double f0 = std::pow(x.v, p);
    return detail::lift(x, f0, p * std::pow(x.v, p - 1.0), p * (p - 1.0) * std::pow(x.v, p - 2.0));
}
inline HyperDual pow(const HyperDual& x, const HyperDual& p) {
    if (p.d1 == 0.0 && p.d2 == 0.0 && p.d12 == 0.0) return pow(x, p.v);
    return exp(p * log(x));
}

// Reciprocal trig/hyperbolic helpers shared by double and HyperDual code.
template <class T> T sech(const T& x) { using std::cosh; return T(1.0) / cosh(x); }
template <class T> T csch(const T& x) { using std::sinh; return T(1.0) / sinh(x); }
template <class T> T sec(const T& x) { using std::cos; return T(1.0) / cos(x); }
template <class T> T csc(const T& x) { using std::sin; return T(1.0) / sin(x); }
template <class T> T cot(const T& x) { using std::tan; return T(1.0) / tan(x); }
template <class T> T coth(const T& x) { using std::tanh; return T(1.0) / tanh(x); }

inline double value_of(double x) { return x; }
inline double value_of(const HyperDual& x) { return x.v; }

}  // namespace flatnormal
