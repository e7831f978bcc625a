#include "embedlog/families.hpp"

#include <cmath>
#include <sstream>

#include "embedlog/error.hpp"
#include "embedlog/expm.hpp"
#include "embedlog/spectrum.hpp"
#include "embedlog/ssm.hpp"

namespace embedlog {

namespace {

void check_index(std::int64_t l) {
    if (l > kMaxFamilyIndex || l < -kMaxFamilyIndex)
        throw Error(ErrorCode::LOutOfRange,
                    "|l| = " + std::to_string(l < 0 ? -l : l) + " exceeds " + std::to_string(kMaxFamilyIndex));
}

template <class Real>
CMat4<Real> from_rows(const std::array<std::array<Complex<Real>, 4>, 4>& rows) {
    CMat4<Real> out;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out(i, j) = rows[i][j];
    return out;
}

template <class Real>
RMat4<Real> assemble_real(const CMat4<Real>& p, const CMat4<Real>& d, const Tolerances& tol) {
    return real_part(p * d * mat_inverse(p, tol.singular));
}

template <class Real>
Real smallest_offdiagonal(const RMat4<Real>& q) {
    Real best = q(0, 1);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j && q(i, j) < best) best = q(i, j);
    return best;
}

template <class Real>
std::string join_generators(const std::vector<std::int64_t>& g) {
    std::string s = "{";
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + "}";
}

}  // namespace

template <class Real>
Real family_lambda(std::int64_t l) {
    using std::exp;
    return l >= 0 ? exp(-Real(3 + 8 * l) * pi<Real>()) : exp(Real(1 + 8 * l) * pi<Real>());
}

template <class Real>
Complex<Real> family_mu(std::int64_t l) {
    using std::exp;
    return {Real(0), l >= 0 ? exp(-2 * Real(1 + 2 * l) * pi<Real>()) : exp(Real(4 * l) * pi<Real>())};
}

template <class Real>
CMat4<Real> family_p(std::int64_t l) {
    using C = Complex<Real>;
    const C one(1), i(Real(0), Real(1));
    if (l >= 0) {
        const C a(Real(6 * l + 2)), b(Real(-2 * l - 1));
        return from_rows<Real>({{{one, a, one + i, one - i},
                                 {one, b, i, -i},
                                 {one, b, -i, i},
                                 {one, a, -one - i, -one + i}}});
    }
    const C a(Real(6 * l + 1)), b(Real(-2 * l));
    return from_rows<Real>({{{one, a, one - i, one + i},
                             {one, b, i, -i},
                             {one, b, -i, i},
                             {one, a, -one + i, -one - i}}});
}

template <class Real>
RMat4<Real> family_s(std::int64_t l) {
    if (l >= 0) {
        const Real a(6 * l + 2), b(-2 * l - 1);
        return RMat4<Real>{1, a, 1, 1, 1, b, 0, 1, 1, b, 0, -1, 1, a, -1, -1};
    }
    const Real a(6 * l + 1), b(-2 * l);
    return RMat4<Real>{1, a, 1, -1, 1, b, 0, 1, 1, b, 0, -1, 1, a, -1, 1};
}

template <class Real>
CMat4<Real> r_matrix() {
    using C = Complex<Real>;
    const C o(0), one(1), i(Real(0), Real(1));
    return from_rows<Real>({{{one, o, o, o}, {o, one, o, o}, {o, o, one, one}, {o, o, i, -i}}});
}

template <class Real>
RMat4<Real> closed_form_log(std::int64_t l, std::int64_t k) {
    const std::int64_t L = l, K = k;
    std::array<std::int64_t, 16> e;
    if (l >= 0) {
        e = {-9 - 20 * L - 4 * K, 6 + 12 * L + 8 * K,  2 + 12 * L - 8 * K,  1 - 4 * L + 4 * K,
             1 + 4 * L - 4 * K,   -5 - 12 * L + 4 * K, 1 + 4 * L - 4 * K,   3 + 4 * L + 4 * K,
             3 + 4 * L + 4 * K,   1 + 4 * L - 4 * K,   -5 - 12 * L + 4 * K, 1 + 4 * L - 4 * K,
             1 - 4 * L + 4 * K,   2 + 12 * L - 8 * K,  6 + 12 * L + 8 * K,  -9 - 20 * L - 4 * K};
    } else {
        e = {3 + 20 * L + 4 * K,  -12 * L + 8 * K,     -4 - 12 * L - 8 * K, 1 + 4 * L - 4 * K,
             -1 - 4 * L - 4 * K,  -1 + 12 * L - 4 * K, 1 - 4 * L + 4 * K,   1 - 4 * L + 4 * K,
             1 - 4 * L + 4 * K,   1 - 4 * L + 4 * K,   -1 + 12 * L - 4 * K, -1 - 4 * L - 4 * K,
             1 + 4 * L - 4 * K,   -4 - 12 * L - 8 * K, -12 * L + 8 * K,     3 + 20 * L + 4 * K};
    }
    const Real q = pi<Real>() / 4;
    RMat4<Real> out;
    for (std::size_t n = 0; n < 16; ++n) out.data()[n] = Real(e[n]) * q;
    return out;
}

template <class Real>
FamilyInstance<Real> build_example(std::int64_t l, const Tolerances& tol) {
    using std::abs;
    check_index(l);
    const CMat4<Real> p = family_p<Real>(l);
    const Complex<Real> mu = family_mu<Real>(l);
    const CMat4<Real> d = CMat4<Real>::diagonal({Complex<Real>(1), Complex<Real>(family_lambda<Real>(l)), mu, conj(mu)});
    if (!(family_lambda<Real>(l) > Real(1e-300)))
        throw Error(ErrorCode::LOutOfRange, "second eigenvalue underflows for l = " + std::to_string(l));

    MarkovMatrix<Real> m = validate_markov(assemble_real(p, d, tol), tol);
    if (!is_ss(m.matrix(), tol)) throw Error(ErrorCode::LOutOfRange, "constructed matrix lost strand symmetry");
    RateMatrix<Real> gen = validate_rate(closed_form_log<Real>(l, l), tol);
    const Real err = max_abs_diff(expm(gen.matrix()), m.matrix());
    if (!(err <= Real(5e-9)))
        throw Error(ErrorCode::LOutOfRange, "exp(Log_l) misses M by " + to_decimal(to_double(err)));
    return FamilyInstance<Real>{l, std::move(m), std::move(gen), p, d};
}

template <class Real>
RMat4<Real> a_matrix(const PerturbationDelta<Real>& d) {
    return RMat4<Real>{1, d[1], d[4], d[7], 0, 1, d[5], d[8], 0, d[2], 1, d[9], 0, d[3], d[6], 1};
}

template <class Real>
CMat4<Real> d_matrix(std::int64_t l, const PerturbationDelta<Real>& d) {
    const Real r = family_mu<Real>(l).im;
    const Complex<Real> mu(r * d[11], r * (1 + d[12]));
    return CMat4<Real>::diagonal({Complex<Real>(1), Complex<Real>((1 + d[10]) * family_lambda<Real>(l)), mu, conj(mu)});
}

template <class Real>
MarkovMatrix<Real> build_perturbed(std::int64_t l, const PerturbationDelta<Real>& d, const Tolerances& tol) {
    using std::abs;
    check_index(l);
    if (!(d.kappa > 0 && d.kappa < 1))
        throw Error(ErrorCode::DeltaOutOfBound, "kappa = " + to_decimal(d.kappa) + " is outside (0, 1)");
    for (std::size_t i = 1; i <= 12; ++i)
        if (!(abs(d[i]) < Real(d.kappa)))
            throw Error(ErrorCode::DeltaOutOfBound, "|delta" + std::to_string(i) + "| = " +
                                                        to_decimal(to_double(abs(d[i]))) + " >= kappa = " + to_decimal(d.kappa));
    const CMat4<Real> p = complexify(family_s<Real>(l) * a_matrix(d)) * r_matrix<Real>();
    const RMat4<Real> m = assemble_real(p, d_matrix(l, d), tol);
    try {
        return validate_markov(m, tol);
    } catch (const Error& e) {
        throw Error(ErrorCode::NotMarkov, std::string(e.what()) + " (kappa too large for l = " + std::to_string(l) + ")");
    }
}

template <class Real>
PerturbationDelta<Real> recover_delta(std::int64_t l, const MarkovMatrix<Real>& m, double kappa, const Tolerances& tol) {
    using std::abs;
    check_index(l);
    Spectrum<Real> spec;
    try {
        spec = eigendecompose_markov(m.matrix(), tol);
    } catch (const Error& e) {
        throw Error(ErrorCode::NotInFamily, e.what());
    }
    PerturbationDelta<Real> out;
    out.kappa = kappa;
    const Real r = family_mu<Real>(l).im;
    out[10] = spec.lambda() / family_lambda<Real>(l) - 1;
    out[11] = spec.mu().re / r;
    out[12] = spec.mu().im / r - 1;

    const RMat4<Real> s_inv = mat_inverse(family_s<Real>(l), tol.singular);
    const CMat4<Real> cs_inv = complexify(s_inv);
    std::array<Complex<Real>, 4> c2{}, c3{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            c2[i] += cs_inv(i, j) * spec.eigenvectors(j, 1);
            c3[i] += cs_inv(i, j) * spec.eigenvectors(j, 2);
        }

    // Column 2 of A is (d1, 1, d2, d3).
    if (abs(c2[1]) == Real(0)) throw Error(ErrorCode::NotInFamily, "second eigenvector has no S-component 2");
    out[1] = (c2[0] / c2[1]).re;
    out[2] = (c2[2] / c2[1]).re;
    out[3] = (c2[3] / c2[1]).re;

    // Columns 3 + i 4 of A are (d4 + i d7, d5 + i d8, 1 + i d9, d6 + i), up to a
    // complex scale z. Components 3 and 4 fix (d6, d9) and then z.
    const Real x3 = c3[2].re, y3 = c3[2].im, x4 = c3[3].re, y4 = c3[3].im;
    const Real det = -(x3 * x4 + y3 * y4);
    const Real scale = abs(c3[2]) * abs(c3[3]);
    if (!(abs(det) >= Real(tol.y_guard) * scale))
        throw Error(ErrorCode::NearDegenerateY, "delta6 + delta9 is within " + to_decimal(tol.y_guard) +
                                                    " of zero; the eigenvector scale is not determined");
    const Real b1 = x4 + y3, b2 = y4 - x3;
    out[6] = (-x4 * b1 - y4 * b2) / det;
    out[9] = (x3 * b2 - y3 * b1) / det;
    const Complex<Real> z = c3[2] / Complex<Real>(Real(1), out[9]);
    const Complex<Real> col0 = c3[0] / z, col1 = c3[1] / z;
    out[4] = col0.re;
    out[7] = col0.im;
    out[5] = col1.re;
    out[8] = col1.im;

    RMat4<Real> rebuilt;
    try {
        rebuilt = build_perturbed(l, out, tol).matrix();
    } catch (const Error& e) {
        throw Error(ErrorCode::NotInFamily, std::string("recovered delta does not rebuild: ") + e.what());
    }
    const Real err = max_abs_diff(rebuilt, m.matrix());
    if (!(err <= Real(1e-8)))
        throw Error(ErrorCode::NotInFamily, "recovered delta rebuilds M only to " + to_decimal(to_double(err)));
    return out;
}

template <class Real>
PerturbationDelta<Real> sample_delta(std::mt19937_64& rng, double kappa, double y_guard) {
    PerturbationDelta<Real> d;
    d.kappa = kappa;
    auto draw = [&] {
        for (;;) {
            const double x = kappa * (2 * unit_uniform(rng) - 1);
            if (std::abs(x) < kappa) return x;
        }
    };
    do {
        for (auto& x : d.delta) x = Real(draw());
    } while (std::abs(to_double(d[6] + d[9])) < y_guard);
    return d;
}

double validated_kappa(std::int64_t l, double kappa, const Tolerances& tol) {
    check_index(l);
    if (!(kappa > 0 && kappa < 1)) throw Error(ErrorCode::DeltaOutOfBound, "kappa must lie in (0, 1)");
    for (int halvings = 0; halvings < 40; ++halvings, kappa /= 2) {
        bool ok = true;
        PerturbationDelta<double> d;
        d.kappa = kappa;
        for (unsigned mask = 0; mask < 4096 && ok; ++mask) {
            for (std::size_t i = 0; i < 12; ++i) d.delta[i] = (mask >> i & 1u ? 0.999 : -0.999) * kappa;
            try {
                (void)build_perturbed(l, d, tol);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotMarkov && e.code() != ErrorCode::SingularMatrix) throw;
                ok = false;
            }
        }
        if (ok) return kappa;
    }
    throw Error(ErrorCode::DeltaOutOfBound, "no admissible kappa found for l = " + std::to_string(l));
}

namespace {

// Sum over the 12 row-sum-preserving unit directions of the largest entrywise
// rate of change of Log_{l-1}, Log_l, Log_{l+1}.
template <class Real>
Real log_sensitivity(const RMat4<Real>& m, std::int64_t l, const Spectrum<Real>& spec, const Tolerances& tol) {
    using std::abs;
    const Real h = Real(1e-3) * std::min<Real>(spec.lambda(), abs(spec.mu()));
    Real total(0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            RMat4<Real> plus = m, minus = m;
            plus(i, j) += h;
            plus(i, i) -= h;
            minus(i, j) -= h;
            minus(i, i) += h;
            const auto fp = affine_branch_family(eigendecompose_markov(plus, tol), tol);
            const auto fm = affine_branch_family(eigendecompose_markov(minus, tol), tol);
            Real worst(0);
            for (std::int64_t k = l - 1; k <= l + 1; ++k)
                worst = std::max(worst, max_abs_diff(fp.at(k), fm.at(k)));
            total += worst / (2 * h);
        }
    return total;
}

}  // namespace

template <class Real>
OpenSetWitness<Real> certify_witness(std::int64_t l, const PerturbationDelta<Real>& d, const Tolerances& tol) {
    MarkovMatrix<Real> m = build_perturbed(l, d, tol);
    EmbeddabilityReport<Real> report = classify(m, tol);
    if (report.generators != std::vector<std::int64_t>{l})
        throw Error(ErrorCode::NotAWitness,
                    "generators = " + join_generators<Real>(report.generators) + ", expected {" + std::to_string(l) + "}");

    WitnessMargins<Real> margins;
    margins.generator_min = smallest_offdiagonal(branch_log(report.spectrum, l, tol).log);
    margins.lower_violation = -smallest_offdiagonal(branch_log(report.spectrum, l - 1, tol).log);
    margins.upper_violation = -smallest_offdiagonal(branch_log(report.spectrum, l + 1, tol).log);
    const Real floor(tol.margin);
    auto fail = [&](const std::string& what, const Real& value) {
        throw Error(ErrorCode::NotAWitness, what + " = " + to_decimal(to_double(value)) + " is not above margin " +
                                                to_decimal(tol.margin));
    };
    if (!(margins.generator_min > floor)) fail("min off-diagonal of Log_" + std::to_string(l), margins.generator_min);
    if (!(margins.lower_violation > floor))
        fail("negative excursion of Log_" + std::to_string(l - 1), margins.lower_violation);
    if (!(margins.upper_violation > floor))
        fail("negative excursion of Log_" + std::to_string(l + 1), margins.upper_violation);

    const Real slack = std::min({margins.generator_min, margins.lower_violation, margins.upper_violation});
    margins.radius = slack / log_sensitivity(m.matrix(), l, report.spectrum, tol);
    return OpenSetWitness<Real>{l, d, std::move(m), std::move(report), margins};
}

template <class Real>
RMat4<Real> random_row_sum_zero(std::mt19937_64& rng, const Real& size) {
    RMat4<Real> e;
    for (std::size_t i = 0; i < 4; ++i) {
        Real sum(0);
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            e(i, j) = size * Real(2 * unit_uniform(rng) - 1);
            sum += e(i, j);
        }
        e(i, i) = -sum;
    }
    return e;
}

#define EMBEDLOG_INSTANTIATE(Real)                                                                                   \
    template Real family_lambda<Real>(std::int64_t);                                                                 \
    template Complex<Real> family_mu<Real>(std::int64_t);                                                            \
    template CMat4<Real> family_p<Real>(std::int64_t);                                                               \
    template RMat4<Real> family_s<Real>(std::int64_t);                                                               \
    template CMat4<Real> r_matrix<Real>();                                                                           \
    template FamilyInstance<Real> build_example<Real>(std::int64_t, const Tolerances&);                              \
    template RMat4<Real> closed_form_log<Real>(std::int64_t, std::int64_t);                                          \
    template RMat4<Real> a_matrix<Real>(const PerturbationDelta<Real>&);                                             \
    template CMat4<Real> d_matrix<Real>(std::int64_t, const PerturbationDelta<Real>&);                               \
    template MarkovMatrix<Real> build_perturbed<Real>(std::int64_t, const PerturbationDelta<Real>&, const Tolerances&); \
    template PerturbationDelta<Real> recover_delta<Real>(std::int64_t, const MarkovMatrix<Real>&, double,            \
                                                         const Tolerances&);                                         \
    template PerturbationDelta<Real> sample_delta<Real>(std::mt19937_64&, double, double);                           \
    template OpenSetWitness<Real> certify_witness<Real>(std::int64_t, const PerturbationDelta<Real>&, const Tolerances&); \
    template RMat4<Real> random_row_sum_zero<Real>(std::mt19937_64&, const Real&);

EMBEDLOG_INSTANTIATE(double)
EMBEDLOG_INSTANTIATE(Extended)

#undef EMBEDLOG_INSTANTIATE

}  // namespace embedlog
