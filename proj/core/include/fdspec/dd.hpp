#pragma once

// Double-double arithmetic (~31 significant digits). Used to build and factor
// heavily graded operator matrices whose positive-definiteness is destroyed by
// plain double rounding of the entries. Only the operations needed by the
// matrix builders and the Cholesky factorization are provided.
//
// Requires strict IEEE double semantics: compile without -ffast-math and with
// -ffp-contract=off.

#include <cmath>
#include <cstdint>
#include <limits>

namespace fdspec {

struct Dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr Dd() = default;
    constexpr Dd(double h) : hi(h), lo(0.0) {}
    constexpr Dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace dd_detail {

inline Dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// Assumes |a| >= |b| or a == 0.
inline Dd quick_two_sum(double a, double b) {
    double s = a + b;
    double err = b - (s - a);
    return {s, err};
}

inline Dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

} // namespace dd_detail

inline Dd operator+(Dd a, Dd b) {
    using namespace dd_detail;
    Dd s = two_sum(a.hi, b.hi);
    Dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Dd operator-(Dd a) { return {-a.hi, -a.lo}; }
inline Dd operator-(Dd a, Dd b) { return a + (-b); }

inline Dd operator*(Dd a, Dd b) {
    using namespace dd_detail;
    Dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline Dd operator/(Dd a, Dd b) {
    using namespace dd_detail;
    double q1 = a.hi / b.hi;
    Dd r = a - Dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - Dd(q2) * b;
    double q3 = r.hi / b.hi;
    Dd q = quick_two_sum(q1, q2);
    return q + Dd(q3);
}

inline Dd& operator+=(Dd& a, Dd b) { a = a + b; return a; }
inline Dd& operator-=(Dd& a, Dd b) { a = a - b; return a; }
inline Dd& operator*=(Dd& a, Dd b) { a = a * b; return a; }

inline bool operator<(Dd a, Dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(Dd a, Dd b) { return b < a; }

// Exact scaling by a power of two (components may denormalize at the very
// bottom of the range, which only affects negligibly small values).
inline Dd dd_ldexp(Dd a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline Dd dd_sqrt(Dd a) {
    // One Newton step on an inverse-sqrt seed; quadratic convergence makes a
    // single correction sufficient at double-double precision.
    if (a.hi == 0.0) return {0.0, 0.0};
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    Dd axd(ax);
    Dd err = a - axd * axd;
    double corr = err.hi * (x * 0.5);
    return dd_detail::quick_two_sum(ax, corr);
}

inline Dd dd_exp(Dd a) {
    // exp(a) = 2^k exp(r)^512 with r = (a - k ln 2)/512, |r| <= ln2/1024.
    static const Dd kLn2(6.931471805599453094e-01, 2.319046813846299558e-17);
    if (a.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (a.hi < -745.0) return {0.0, 0.0};
    double k = std::nearbyint(a.hi / kLn2.hi);
    Dd r = (a - Dd(k) * kLn2) * Dd(1.0 / 512.0);
    // Taylor series of exp(r); |r| <= 6.8e-4 so 9 terms reach 1e-33 relative.
    Dd term = r;
    Dd sum = Dd(1.0) + r;
    for (int i = 2; i <= 9; ++i) {
        // Divide by the exactly representable integer; multiplying by a
        // rounded reciprocal would poison the coefficients at ~1e-17.
        term = term * r / Dd(static_cast<double>(i));
        sum += term;
    }
    for (int i = 0; i < 9; ++i) sum = sum * sum;
    return {std::ldexp(sum.hi, static_cast<int>(k)), std::ldexp(sum.lo, static_cast<int>(k))};
}

// Taylor-series sine/cosine for |a| <= 1; used to seed exact-symmetry
// trigonometric tables for the grid backend.
inline void dd_sincos_small(Dd a, Dd& s, Dd& c) {
    Dd a2 = a * a;
    Dd term = a;
    s = a;
    for (int k = 3; k <= 33; k += 2) {
        term = term * a2 / Dd(-(k * (k - 1.0)));
        s += term;
    }
    term = Dd(1.0);
    c = term;
    for (int k = 2; k <= 34; k += 2) {
        term = term * a2 / Dd(-(k * (k - 1.0)));
        c += term;
    }
}

struct DdComplex {
    Dd re, im;

    constexpr DdComplex() = default;
    constexpr DdComplex(Dd r) : re(r), im(0.0) {}
    constexpr DdComplex(Dd r, Dd i) : re(r), im(i) {}
};

inline DdComplex operator+(DdComplex a, DdComplex b) { return {a.re + b.re, a.im + b.im}; }
inline DdComplex operator-(DdComplex a, DdComplex b) { return {a.re - b.re, a.im - b.im}; }
inline DdComplex operator*(DdComplex a, DdComplex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline DdComplex operator*(Dd a, DdComplex b) { return {a * b.re, a * b.im}; }
inline DdComplex& operator+=(DdComplex& a, DdComplex b) { a = a + b; return a; }
inline DdComplex& operator-=(DdComplex& a, DdComplex b) { a = a - b; return a; }
inline DdComplex dd_conj(DdComplex a) { return {a.re, -a.im}; }
inline Dd dd_norm2(DdComplex a) { return a.re * a.re + a.im * a.im; }

inline DdComplex operator/(DdComplex a, Dd b) { return {a.re / b, a.im / b}; }

} // namespace fdspec
