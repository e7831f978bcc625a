#include "embedlog/ssm.hpp"

#include <cmath>
#include <sstream>

#include "embedlog/error.hpp"

namespace embedlog {

template <class Real>
bool is_ss(const RMat4<Real>& m, const Tolerances& tol) {
    using std::abs;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (!(abs(m(i, j) - m(3 - i, 3 - j)) <= Real(tol.pattern))) return false;
    return true;
}

template <class Real>
RMat4<Real> build_q(const GeneratorParams<Real>& p) {
    const Real& t = p.theta;
    const auto& [v1, v2, v3, v4, v5, v6] = p.v;
    SSPattern<Real> s;
    s.a = v1 + v2 - v3 - t * v4;
    s.b = -v1 - v2 + t * v5;
    s.c = -v1 - v2 - t * v5;
    s.d = v1 + v2 + v3 + t * v4;
    s.e = -v1 + v2 - t * v6;
    s.f = v1 - v2 - v3 + t * v4;
    s.g = v1 - v2 + v3 - t * v4;
    s.h = -v1 + v2 + t * v6;
    return s.expand();
}

template <class Real>
Real variety_residual(const Vec6<Real>& v) {
    return v[3] * v[3] - v[4] * v[5] + Real(1) / 4;
}

template <class Real>
std::array<Complex<Real>, 4> q_spectrum(const GeneratorParams<Real>& p, const Tolerances& tol) {
    using std::abs;
    const Real r = variety_residual(p.v);
    if (abs(r) > Real(tol.variety))
        throw Error(ErrorCode::OffVariety, "v4^2 - v5 v6 + 1/4 = " + to_decimal(to_double(r)));
    const Real re = -2 * p.v[2];
    return {Complex<Real>(), Complex<Real>(4 * p.v[0]), Complex<Real>(re, p.theta), Complex<Real>(re, -p.theta)};
}

template <class Real>
Vec6<Real> swap_components(const Vec6<Real>& v) {
    return {v[0], -v[1], v[2], -v[3], v[5], v[4]};
}

template <class Real>
std::array<Real, 7> component_inequalities(const Vec6<Real>& v, const Real& theta, std::int64_t k) {
    const auto& [v1, v2, v3, v4, v5, v6] = v;
    const Real full = theta + 2 * pi<Real>() * Real(k);
    return {v1 + v2 + v3 + theta * v4,  v1 + v2 + v3 + full * v4, v1 - v2 + v3 - full * v4,
            -v1 - v2 + full * v5,       -v1 - v2 - full * v5,     -v1 + v2 + full * v6,
            -v1 + v2 - full * v6};
}

namespace {

template <class Real>
bool satisfies_c1(const std::array<Real, 7>& f, const Real& tol) {
    if (!(f[0] <= -tol)) return false;
    for (std::size_t n = 1; n < 7; ++n)
        if (f[n] < -tol) return false;
    return true;
}

}  // namespace

template <class Real>
ConeVerdict cone_check(const GeneratorParams<Real>& p, std::int64_t k, const Tolerances& tol) {
    using std::abs;
    const Real te(tol.entry);
    ConeVerdict out;

    const RMat4<Real> q = build_q(p);
    out.in_P_theta = true;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j && q(i, j) < -te) {
                out.in_P_theta = false;
                out.violated.push_back("Q(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            }

    const auto f = component_inequalities(p.v, p.theta, k);
    if (!(f[0] <= -te)) out.violated.push_back("C1.1");
    for (std::size_t n = 1; n < 7; ++n)
        if (f[n] < -te) out.violated.push_back("C1." + std::to_string(n + 1));
    for (std::size_t n = 0; n < 7; ++n)
        if (abs(f[n]) <= te) out.binding.push_back("C1." + std::to_string(n + 1));

    out.in_C1 = satisfies_c1(f, te);
    out.in_C2 = satisfies_c1(component_inequalities(swap_components(p.v), p.theta, k), te);
    return out;
}

template <class Real>
RayGenerators<Real> ray_generators(const Real& theta, std::int64_t k) {
    using std::abs;
    if (k == 0) throw Error(ErrorCode::KZero, "ray generators need a branch k != 0");
    const Real a = abs(theta + 2 * pi<Real>() * Real(k));
    const Real sk(k > 0 ? 1 : -1);
    RayGenerators<Real> r;
    r.w1 = {-a, Real(0), a, Real(0), Real(1), Real(1)};
    r.w2 = {-a, Real(0), a, Real(0), Real(-1), Real(1)};
    r.w3 = {-a, -a, a, sk, Real(2), Real(0)};
    return r;
}

template <class Real>
GeneratorParams<Real> sample_interior(const Real& theta, std::int64_t k, const std::array<Real, 3>& weights,
                                      const Real& shift, const Tolerances& tol) {
    using std::abs;
    using std::sqrt;
    if (k == 0) throw Error(ErrorCode::KZero, "sampling needs a branch k != 0");
    if (!(abs(theta) < pi<Real>()) || theta == Real(0))
        throw Error(ErrorCode::InvalidArgument, "theta must lie in (-pi, pi) and be non-zero");
    for (const Real& w : weights)
        if (!(w > Real(0))) throw Error(ErrorCode::InvalidArgument, "weights must be strictly positive");

    const RayGenerators<Real> r = ray_generators(theta, k);
    GeneratorParams<Real> p;
    p.theta = theta;
    for (std::size_t n = 0; n < 6; ++n) p.v[n] = weights[0] * r.w1[n] + weights[1] * r.w2[n] + weights[2] * r.w3[n];
    p.v[0] -= shift * pi<Real>() / 4;
    p.v[2] += shift * pi<Real>() / 2;

    const Real g = p.v[3] * p.v[3] - p.v[4] * p.v[5];
    if (!(g < Real(0)))
        throw Error(ErrorCode::NotRescalable, "v4^2 - v5 v6 = " + to_decimal(to_double(g)) + " is not negative");
    // Every component inequality is positively homogeneous, so scaling the
    // whole vector reaches the variety without leaving the cone. Scaling only
    // (v4, v5, v6) breaks the inequalities that the rays meet with equality.
    const Real factor = sqrt(Real(-1) / (4 * g));
    for (auto& x : p.v) x *= factor;

    const ConeVerdict verdict = cone_check(p, k, tol);
    if (!verdict.in_C1) {
        std::ostringstream os;
        os << "rescaled vector leaves the first component (violates";
        for (const auto& s : verdict.violated) os << ' ' << s;
        os << ')';
        throw Error(ErrorCode::NotRescalable, os.str());
    }
    return p;
}

#define EMBEDLOG_INSTANTIATE(Real)                                                                          \
    template bool is_ss<Real>(const RMat4<Real>&, const Tolerances&);                                       \
    template RMat4<Real> build_q<Real>(const GeneratorParams<Real>&);                                       \
    template Real variety_residual<Real>(const Vec6<Real>&);                                                \
    template std::array<Complex<Real>, 4> q_spectrum<Real>(const GeneratorParams<Real>&, const Tolerances&); \
    template Vec6<Real> swap_components<Real>(const Vec6<Real>&);                                           \
    template std::array<Real, 7> component_inequalities<Real>(const Vec6<Real>&, const Real&, std::int64_t); \
    template ConeVerdict cone_check<Real>(const GeneratorParams<Real>&, std::int64_t, const Tolerances&);   \
    template RayGenerators<Real> ray_generators<Real>(const Real&, std::int64_t);                           \
    template GeneratorParams<Real> sample_interior<Real>(const Real&, std::int64_t, const std::array<Real, 3>&, \
                                                         const Real&, const Tolerances&);

EMBEDLOG_INSTANTIATE(double)
EMBEDLOG_INSTANTIATE(Extended)

#undef EMBEDLOG_INSTANTIATE

}  // namespace embedlog
