#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <ostream>

#include "embedlog/scalar.hpp"

namespace embedlog {

/// Dense 4x4 matrix, row-major.
template <class T>
class Mat4 {
public:
    static constexpr std::size_t N = 4;
    using value_type = T;
    using real_type = typename scalar_traits<T>::real_type;

    Mat4() { data_.fill(T(0)); }

    /// Row-major list of 16 entries.
    Mat4(std::initializer_list<T> entries) {
        data_.fill(T(0));
        std::size_t i = 0;
        for (const auto& e : entries) {
            if (i < 16) data_[i] = e;
            ++i;
        }
    }

    static Mat4 identity() {
        Mat4 m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = T(1);
        return m;
    }

    static Mat4 diagonal(const std::array<T, 4>& d) {
        Mat4 m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    static Mat4 constant(const T& value) {
        Mat4 m;
        m.data_.fill(value);
        return m;
    }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * N + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * N + j]; }

    const std::array<T, 16>& data() const { return data_; }
    std::array<T, 16>& data() { return data_; }

    Mat4& operator+=(const Mat4& o) {
        for (std::size_t i = 0; i < 16; ++i) data_[i] += o.data_[i];
        return *this;
    }
    Mat4& operator-=(const Mat4& o) {
        for (std::size_t i = 0; i < 16; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Mat4& operator*=(const T& s) {
        for (auto& e : data_) e *= s;
        return *this;
    }

    friend Mat4 operator+(Mat4 a, const Mat4& b) { return a += b; }
    friend Mat4 operator-(Mat4 a, const Mat4& b) { return a -= b; }
    friend Mat4 operator*(Mat4 a, const T& s) { return a *= s; }
    friend Mat4 operator*(const T& s, Mat4 a) { return a *= s; }
    friend Mat4 operator-(Mat4 a) {
        for (auto& e : a.data_) e = -e;
        return a;
    }
    friend Mat4 operator*(const Mat4& a, const Mat4& b) { return mat_mul(a, b); }
    friend bool operator==(const Mat4& a, const Mat4& b) { return a.data_ == b.data_; }

    friend Mat4 mat_mul(const Mat4& a, const Mat4& b) {
        Mat4 c;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const T& aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    Mat4 transpose() const {
        Mat4 t;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Largest entry magnitude.
    real_type max_abs() const {
        real_type m(0);
        for (const auto& e : data_) {
            real_type a = scalar_traits<T>::magnitude(e);
            if (a > m) m = a;
        }
        return m;
    }

    /// Maximum absolute column sum.
    real_type norm1() const {
        real_type best(0);
        for (std::size_t j = 0; j < N; ++j) {
            real_type s(0);
            for (std::size_t i = 0; i < N; ++i) s += scalar_traits<T>::magnitude((*this)(i, j));
            if (s > best) best = s;
        }
        return best;
    }

    /// Maximum absolute row sum.
    real_type norm_inf() const { return transpose().norm1(); }

    T row_sum(std::size_t i) const {
        T s(0);
        for (std::size_t j = 0; j < N; ++j) s += (*this)(i, j);
        return s;
    }

    bool all_finite() const {
        for (const auto& e : data_)
            if (!is_finite(e)) return false;
        return true;
    }

    friend std::ostream& operator<<(std::ostream& os, const Mat4& m) {
        for (std::size_t i = 0; i < N; ++i) {
            os << (i == 0 ? "[[" : " [");
            for (std::size_t j = 0; j < N; ++j) os << m(i, j) << (j + 1 < N ? ", " : "");
            os << (i + 1 < N ? "]\n" : "]]");
        }
        return os;
    }

private:
    std::array<T, 16> data_;
};

template <class Real>
using RMat4 = Mat4<Real>;

template <class Real>
using CMat4 = Mat4<Complex<Real>>;

template <class T>
typename Mat4<T>::real_type max_abs_diff(const Mat4<T>& a, const Mat4<T>& b) {
    return (a - b).max_abs();
}

template <class Real>
CMat4<Real> complexify(const RMat4<Real>& a) {
    CMat4<Real> c;
    for (std::size_t i = 0; i < 16; ++i) c.data()[i] = Complex<Real>(a.data()[i]);
    return c;
}

template <class Real>
RMat4<Real> real_part(const CMat4<Real>& a) {
    RMat4<Real> r;
    for (std::size_t i = 0; i < 16; ++i) r.data()[i] = a.data()[i].re;
    return r;
}

template <class Real>
RMat4<Real> imag_part(const CMat4<Real>& a) {
    RMat4<Real> r;
    for (std::size_t i = 0; i < 16; ++i) r.data()[i] = a.data()[i].im;
    return r;
}

template <class To, class From>
Mat4<To> convert(const Mat4<From>& a) {
    Mat4<To> r;
    for (std::size_t i = 0; i < 16; ++i) r.data()[i] = To(a.data()[i]);
    return r;
}

template <class To, class From>
Mat4<Complex<To>> convert(const Mat4<Complex<From>>& a) {
    Mat4<Complex<To>> r;
    for (std::size_t i = 0; i < 16; ++i) r.data()[i] = Complex<To>(To(a.data()[i].re), To(a.data()[i].im));
    return r;
}

/// Gauss-Jordan inverse with partial pivoting. Throws SingularMatrix when
/// |det(a)| <= tol_singular * ||a||_max^4.
template <class T>
Mat4<T> mat_inverse(const Mat4<T>& a, double tol_singular = 1e-12);

/// Determinant via the same elimination.
template <class T>
T determinant(const Mat4<T>& a);

}  // namespace embedlog
