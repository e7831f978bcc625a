#include "embedlog/matrix.hpp"

#include <utility>

#include "embedlog/error.hpp"

namespace embedlog {

namespace {

// Row-reduces `work` to the identity, applying the same operations to `inv`.
// Returns the determinant accumulated from the pivots.
template <class T>
T eliminate(Mat4<T>& work, Mat4<T>* inv) {
    using Real = typename scalar_traits<T>::real_type;
    T det(1);
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t pivot = col;
        Real best = scalar_traits<T>::magnitude(work(col, col));
        for (std::size_t r = col + 1; r < 4; ++r) {
            Real m = scalar_traits<T>::magnitude(work(r, col));
            if (m > best) {
                best = m;
                pivot = r;
            }
        }
        if (best == Real(0)) return T(0);
        if (pivot != col) {
            for (std::size_t j = 0; j < 4; ++j) {
                std::swap(work(col, j), work(pivot, j));
                if (inv) std::swap((*inv)(col, j), (*inv)(pivot, j));
            }
            det = -det;
        }
        const T p = work(col, col);
        det *= p;
        const T p_inv = T(1) / p;
        for (std::size_t j = 0; j < 4; ++j) {
            work(col, j) *= p_inv;
            if (inv) (*inv)(col, j) *= p_inv;
        }
        for (std::size_t r = 0; r < 4; ++r) {
            if (r == col) continue;
            const T f = work(r, col);
            if (f == T(0)) continue;
            for (std::size_t j = 0; j < 4; ++j) {
                work(r, j) -= f * work(col, j);
                if (inv) (*inv)(r, j) -= f * (*inv)(col, j);
            }
        }
    }
    return det;
}

}  // namespace

template <class T>
T determinant(const Mat4<T>& a) {
    Mat4<T> work = a;
    return eliminate<T>(work, nullptr);
}

template <class T>
Mat4<T> mat_inverse(const Mat4<T>& a, double tol_singular) {
    using Real = typename scalar_traits<T>::real_type;
    Mat4<T> work = a;
    Mat4<T> inv = Mat4<T>::identity();
    const T det = eliminate<T>(work, &inv);
    const Real scale = a.max_abs();
    const Real s4 = scale * scale * scale * scale;
    if (scale == Real(0) || scalar_traits<T>::magnitude(det) <= Real(tol_singular) * s4) {
        throw Error(ErrorCode::SingularMatrix, "determinant below tolerance relative to ||a||^4");
    }
    return inv;
}

#define EMBEDLOG_INSTANTIATE(T)                                     \
    template T determinant<T>(const Mat4<T>&);                      \
    template Mat4<T> mat_inverse<T>(const Mat4<T>&, double);

EMBEDLOG_INSTANTIATE(double)
EMBEDLOG_INSTANTIATE(Extended)
EMBEDLOG_INSTANTIATE(Complex<double>)
EMBEDLOG_INSTANTIATE(Complex<Extended>)

#undef EMBEDLOG_INSTANTIATE

}  // namespace embedlog
