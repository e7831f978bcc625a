#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace embedlog {

/// 100-decimal-digit binary float. The families of interest carry eigenvalues
/// as small as e^{-51 pi} next to O(1) stationary entries, which double
/// precision cannot represent inside a single matrix.
using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                               boost::multiprecision::et_off>;

template <class Real>
inline Real pi() {
    return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real epsilon() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
inline double to_double(const Real& x) {
    return static_cast<double>(x);
}

template <class Real>
inline Real from_double(double x) {
    return Real(x);
}

/// Shortest decimal text that round-trips (binary64), or `digits`
/// significant digits when positive.
std::string to_decimal(double x, int digits = 0);
std::string to_decimal(const Extended& x, int digits = 40);

/// Parses a full decimal token; throws ParseError on trailing garbage.
template <class Real>
Real parse_decimal(const std::string& text);

/// Minimal complex number usable with both double and Extended.
template <class Real>
struct Complex {
    Real re{0};
    Real im{0};

    Complex() = default;
    Complex(Real r) : re(std::move(r)) {}  // NOLINT: implicit real -> complex
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    Complex& operator+=(const Complex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    Complex& operator*=(const Real& s) {
        re *= s;
        im *= s;
        return *this;
    }
    Complex& operator/=(const Complex& o);

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator*(Complex a, const Real& s) { return a *= s; }
    friend Complex operator*(const Real& s, Complex a) { return a *= s; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

    friend std::ostream& operator<<(std::ostream& os, const Complex& z) {
        return os << '(' << z.re << (z.im < 0 ? " - " : " + ") << (z.im < 0 ? Real(-z.im) : z.im) << "i)";
    }
};

template <class Real>
Complex<Real> conj(const Complex<Real>& z) {
    return {z.re, -z.im};
}

template <class Real>
Real abs(const Complex<Real>& z) {
    using std::hypot;
    return hypot(z.re, z.im);
}

template <class Real>
Real norm(const Complex<Real>& z) {
    return z.re * z.re + z.im * z.im;
}

/// Principal argument in (-pi, pi].
template <class Real>
Real arg(const Complex<Real>& z) {
    using std::atan2;
    return atan2(z.im, z.re);
}

template <class Real>
Complex<Real>& Complex<Real>::operator/=(const Complex& o) {
    using std::abs;
    // Smith's algorithm
    if (abs(o.re) >= abs(o.im)) {
        Real t = o.im / o.re;
        Real d = o.re + o.im * t;
        Real r = (re + im * t) / d;
        im = (im - re * t) / d;
        re = std::move(r);
    } else {
        Real t = o.re / o.im;
        Real d = o.re * t + o.im;
        Real r = (re * t + im) / d;
        im = (im * t - re) / d;
        re = std::move(r);
    }
    return *this;
}

template <class T>
struct scalar_traits {
    using real_type = T;
    static T magnitude(const T& x) {
        using std::abs;
        return abs(x);
    }
};

template <class Real>
struct scalar_traits<Complex<Real>> {
    using real_type = Real;
    static Real magnitude(const Complex<Real>& z) { return embedlog::abs(z); }
};

template <class Real>
bool is_finite(const Real& x) {
    using boost::multiprecision::isfinite;
    using std::isfinite;
    return isfinite(x);
}

template <class Real>
bool is_finite(const Complex<Real>& z) {
    return is_finite(z.re) && is_finite(z.im);
}

}  // namespace embedlog
