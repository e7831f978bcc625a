#include "embedlog/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "embedlog/error.hpp"

namespace embedlog {

namespace {

template <class Real>
RMat4<Real> hadamard_half() {
    const Real h(0.5);
    return RMat4<Real>{h, h, h, h, h, h, -h, -h, h, -h, h, -h, h, -h, -h, h};
}

template <class Real>
Real cube_root(const Real& x) {
    using std::cbrt;
    return cbrt(x);
}

template <class Real>
using Vec3C = std::array<Complex<Real>, 3>;

template <class Real>
Vec3C<Real> cross(const Vec3C<Real>& a, const Vec3C<Real>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class Real>
Real norm2(const Vec3C<Real>& v) {
    return norm(v[0]) + norm(v[1]) + norm(v[2]);
}

// Right eigenvector of m (given its deflation) for eigenvalue `nu` != 1,
// scaled so that its largest-magnitude component equals 1.
template <class Real>
std::array<Complex<Real>, 4> eigenvector(const Deflation<Real>& d, const Complex<Real>& nu) {
    std::array<Vec3C<Real>, 3> rows;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) rows[i][j] = Complex<Real>(d.block[i][j]) - (i == j ? nu : Complex<Real>());

    Vec3C<Real> best = cross(rows[0], rows[1]);
    Real best_norm = norm2(best);
    for (auto [a, b] : {std::pair{0, 2}, std::pair{1, 2}}) {
        Vec3C<Real> c = cross(rows[a], rows[b]);
        Real n = norm2(c);
        if (n > best_norm) {
            best = c;
            best_norm = n;
        }
    }
    if (best_norm == Real(0)) throw Error(ErrorCode::SpectrumOutOfClass, "eigenvector not determined (repeated eigenvalue)");

    Complex<Real> coupling_dot;
    for (std::size_t j = 0; j < 3; ++j) coupling_dot += Complex<Real>(d.coupling[j]) * best[j];
    const Complex<Real> head = coupling_dot / (nu - Complex<Real>(Real(1)));

    const std::array<Complex<Real>, 4> y{head, best[0], best[1], best[2]};
    const RMat4<Real> h = hadamard_half<Real>();
    std::array<Complex<Real>, 4> v;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) v[i] += h(i, j) * y[j];

    std::size_t lead = 0;
    Real lead_norm = norm(v[0]);
    for (std::size_t i = 1; i < 4; ++i) {
        Real n = norm(v[i]);
        if (n > lead_norm) {
            lead_norm = n;
            lead = i;
        }
    }
    const Complex<Real> s = v[lead];
    for (auto& c : v) c /= s;
    v[lead] = Complex<Real>(Real(1));
    return v;
}

}  // namespace

template <class Real>
RMat4<Real> Spectrum<Real>::recompose() const {
    CMat4<Real> d = CMat4<Real>::diagonal(eigenvalues);
    return real_part(eigenvectors * d * inverse);
}

template <class Real>
Deflation<Real> deflate(const RMat4<Real>& m) {
    using std::abs;
    const RMat4<Real> h = hadamard_half<Real>();
    const RMat4<Real> b = h * m * h;
    Deflation<Real> d;
    d.row_sum = b(0, 0);
    for (std::size_t j = 0; j < 3; ++j) d.coupling[j] = b(0, j + 1);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) d.block[i][j] = b(i + 1, j + 1);
    d.residual = Real(0);
    for (std::size_t i = 1; i < 4; ++i) d.residual = std::max<Real>(d.residual, abs(b(i, 0)));
    return d;
}

template <class Real>
std::array<Real, 3> characteristic_coefficients(const std::array<std::array<Real, 3>, 3>& c) {
    const Real trace = c[0][0] + c[1][1] + c[2][2];
    const Real minors = (c[0][0] * c[1][1] - c[0][1] * c[1][0]) + (c[0][0] * c[2][2] - c[0][2] * c[2][0]) +
                        (c[1][1] * c[2][2] - c[1][2] * c[2][1]);
    const Real det = c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) -
                     c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0]) +
                     c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
    return {trace, minors, det};
}

template <class Real>
CubicRoots<Real> solve_cubic(const Real& c2, const Real& c1, const Real& c0) {
    using std::abs;
    using std::acos;
    using std::cos;
    using std::sqrt;

    CubicRoots<Real> out;
    const Real scale = std::max({abs(c2), sqrt(abs(c1)), cube_root(abs(c0))});
    if (scale == Real(0)) {
        out.roots = {Complex<Real>(), Complex<Real>(), Complex<Real>()};
        out.one_real_pair = false;
        out.normalized_discriminant = Real(0);
        return out;
    }
    const Real a2 = c2 / scale;
    const Real a1 = c1 / (scale * scale);
    const Real a0 = c0 / (scale * scale * scale);

    const Real p = a1 - a2 * a2 / 3;
    const Real q = -2 * a2 * a2 * a2 / 27 + a2 * a1 / 3 - a0;
    const Real disc = -4 * p * p * p - 27 * q * q;
    out.normalized_discriminant = disc;

    if (disc < Real(0)) {
        const Real sqrt_d = sqrt(q * q / 4 + p * p * p / 27);
        const Real half = -q / 2;
        const Real u = cube_root(half >= Real(0) ? half + sqrt_d : half - sqrt_d);
        const Real w = (u == Real(0)) ? Real(0) : -p / (3 * u);
        Real x = (u + w + a2 / 3) * scale;

        // Newton polish on the unscaled cubic; the Cardano sum can cancel
        // when the real root is much smaller than the pair.
        Real last_step = -1;
        for (int it = 0; it < 8; ++it) {
            const Real f = ((x - c2) * x + c1) * x - c0;
            const Real fp = (3 * x - 2 * c2) * x + c1;
            if (fp == Real(0)) break;
            const Real step = f / fp;
            if (last_step >= Real(0) && abs(step) >= last_step) break;
            x -= step;
            last_step = abs(step);
            if (step == Real(0)) break;
        }

        const Real pair_sum = c2 - x;
        const Real pair_product = (x != Real(0)) ? c0 / x : c1 - x * pair_sum;
        const Real gap = pair_product - pair_sum * pair_sum / 4;
        if (gap > Real(0)) {
            const Real im = sqrt(gap);
            out.roots = {Complex<Real>(x), Complex<Real>(pair_sum / 2, im), Complex<Real>(pair_sum / 2, -im)};
            out.one_real_pair = true;
        } else {
            const Real r = sqrt(-gap);
            std::array<Real, 3> rr{x, pair_sum / 2 + r, pair_sum / 2 - r};
            std::sort(rr.begin(), rr.end(), [](const Real& a, const Real& b) { return a > b; });
            out.roots = {Complex<Real>(rr[0]), Complex<Real>(rr[1]), Complex<Real>(rr[2])};
            out.one_real_pair = false;
        }
        return out;
    }

    std::array<Real, 3> rr;
    if (p == Real(0)) {
        const Real t = cube_root(-q);
        rr = {t, t, t};
    } else {
        const Real m = 2 * sqrt(-p / 3);
        Real c = 3 * q / (p * m);
        if (c > Real(1)) c = Real(1);
        if (c < Real(-1)) c = Real(-1);
        const Real theta = acos(c) / 3;
        const Real third = 2 * pi<Real>() / 3;
        rr = {m * cos(theta), m * cos(theta - third), m * cos(theta - 2 * third)};
    }
    for (auto& r : rr) r = (r + a2 / 3) * scale;
    std::sort(rr.begin(), rr.end(), [](const Real& a, const Real& b) { return a > b; });
    out.roots = {Complex<Real>(rr[0]), Complex<Real>(rr[1]), Complex<Real>(rr[2])};
    out.one_real_pair = false;
    return out;
}

template <class Real>
std::array<Complex<Real>, 4> deflated_eigenvalues(const RMat4<Real>& m) {
    const Deflation<Real> d = deflate(m);
    const auto c = characteristic_coefficients(d.block);
    const CubicRoots<Real> roots = solve_cubic(c[0], c[1], c[2]);
    return {Complex<Real>(d.row_sum), roots.roots[0], roots.roots[1], roots.roots[2]};
}

template <class Real>
Spectrum<Real> eigendecompose_markov(const RMat4<Real>& m, const Tolerances& tol) {
    using std::abs;
    if (!m.all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    for (std::size_t i = 0; i < 4; ++i) {
        const Real s = m.row_sum(i);
        if (abs(s - Real(1)) > Real(tol.rowsum)) {
            std::ostringstream os;
            os << "row " << i + 1 << " sums to " << to_decimal(to_double(s));
            throw Error(ErrorCode::RowSumViolation, os.str());
        }
    }

    const Deflation<Real> d = deflate(m);
    const auto coeffs = characteristic_coefficients(d.block);
    const CubicRoots<Real> cubic = solve_cubic(coeffs[0], coeffs[1], coeffs[2]);

    auto out_of_class = [&](const std::string& why) {
        std::ostringstream os;
        os << why << "; roots of the deflated cubic: ";
        for (std::size_t i = 0; i < 3; ++i) {
            os << to_decimal(to_double(cubic.roots[i].re));
            if (cubic.roots[i].im != Real(0)) os << (cubic.roots[i].im < 0 ? "-" : "+") << to_decimal(to_double(abs(cubic.roots[i].im))) << "i";
            if (i < 2) os << ", ";
        }
        return Error(ErrorCode::SpectrumOutOfClass, os.str());
    };

    // Tiny eigenvalues are legitimate; only rounding-level ones count as zero.
    const Real zero_level = 16 * epsilon<Real>() * std::max<Real>(Real(1), m.max_abs());
    int ones = 0, zeros = 0;
    for (const auto& r : cubic.roots) {
        ones += abs(r - Complex<Real>(Real(1))) <= Real(tol.cls);
        zeros += abs(r) <= zero_level;
    }
    if (ones > 0) throw out_of_class("eigenvalue 1 repeated");
    if (zeros > 0) throw out_of_class(zeros == 1 ? "zero eigenvalue" : zeros == 2 ? "double zero eigenvalue" : "triple zero eigenvalue");
    // Separation of the roots themselves: the discriminant shrinks with the
    // sixth power of the spread and misreads clusters near 1 as repeated.
    // Relative, since tiny eigenvalues are legitimate.
    bool close = false;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            const Real size = std::max(abs(cubic.roots[i]), abs(cubic.roots[j]));
            close = close || abs(cubic.roots[i] - cubic.roots[j]) <= Real(tol.cls) * size;
        }
    if (!cubic.one_real_pair) throw out_of_class(close ? "repeated eigenvalue" : "all eigenvalues real");
    if (close) throw out_of_class("nearly repeated eigenvalue or nearly real pair");
    const Real lambda = cubic.roots[0].re;
    if (!(lambda > Real(0))) throw out_of_class("real eigenvalue not positive");
    if (!(lambda < Real(1) - Real(tol.cls))) throw out_of_class("real eigenvalue not below 1");

    Spectrum<Real> s;
    s.eigenvalues = {Complex<Real>(Real(1)), Complex<Real>(lambda), cubic.roots[1], conj(cubic.roots[1])};

    const auto v_lambda = eigenvector(d, s.eigenvalues[1]);
    const auto v_mu = eigenvector(d, s.eigenvalues[2]);
    for (std::size_t i = 0; i < 4; ++i) {
        s.eigenvectors(i, 0) = Complex<Real>(Real(1));
        s.eigenvectors(i, 1) = Complex<Real>(v_lambda[i].re);
        s.eigenvectors(i, 2) = v_mu[i];
        s.eigenvectors(i, 3) = conj(v_mu[i]);
    }
    s.inverse = mat_inverse(s.eigenvectors, tol.singular);
    s.condition = s.eigenvectors.norm_inf() * s.inverse.norm_inf();

    const Real inv_err = (s.eigenvectors * s.inverse - CMat4<Real>::identity()).max_abs();
    if (inv_err > Real(tol.inverse)) throw out_of_class("eigenvector matrix too ill-conditioned (P P^-1 residual " + to_decimal(to_double(inv_err)) + ")");
    const Real rec_err = max_abs_diff(s.recompose(), m);
    if (rec_err > Real(tol.recompose) * m.max_abs())
        throw out_of_class("recomposition residual " + to_decimal(to_double(rec_err)) + " exceeds tolerance");
    return s;
}

#define EMBEDLOG_INSTANTIATE(Real)                                                                        \
    template struct Spectrum<Real>;                                                                       \
    template Deflation<Real> deflate<Real>(const RMat4<Real>&);                                           \
    template std::array<Real, 3> characteristic_coefficients<Real>(const std::array<std::array<Real, 3>, 3>&); \
    template CubicRoots<Real> solve_cubic<Real>(const Real&, const Real&, const Real&);                   \
    template std::array<Complex<Real>, 4> deflated_eigenvalues<Real>(const RMat4<Real>&);                 \
    template Spectrum<Real> eigendecompose_markov<Real>(const RMat4<Real>&, const Tolerances&);

EMBEDLOG_INSTANTIATE(double)
EMBEDLOG_INSTANTIATE(Extended)

#undef EMBEDLOG_INSTANTIATE

}  // namespace embedlog
