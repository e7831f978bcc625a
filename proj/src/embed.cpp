#include "embedlog/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "embedlog/error.hpp"

namespace embedlog {

namespace {

template <class Real>
std::string describe_entry(std::size_t i, std::size_t j, const Real& value) {
    std::ostringstream os;
    os << "(" << i + 1 << "," << j + 1 << ")=" << to_decimal(to_double(value));
    return os.str();
}

template <class Real>
void check_row_sums(const RMat4<Real>& m, const Real& target, const Tolerances& tol) {
    using std::abs;
    for (std::size_t i = 0; i < 4; ++i) {
        const Real s = m.row_sum(i);
        if (abs(s - target) > Real(tol.rowsum)) {
            std::ostringstream os;
            os << "row " << i + 1 << " sums to " << to_decimal(to_double(s)) << ", expected " << to_decimal(to_double(target));
            throw Error(ErrorCode::RowSumViolation, os.str());
        }
    }
}

constexpr std::int64_t kWindowLimit = std::int64_t(1) << 40;

template <class Real>
std::int64_t clamp_to_index(const Real& x) {
    if (x > Real(kWindowLimit)) return kWindowLimit;
    if (x < Real(-kWindowLimit)) return -kWindowLimit;
    return static_cast<std::int64_t>(static_cast<long long>(x));
}

}  // namespace

template <class Real>
MarkovMatrix<Real> validate_markov(const RMat4<Real>& m, const Tolerances& tol) {
    if (!m.all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    RMat4<Real> clamped = m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Real& e = clamped(i, j);
            if (e < Real(-tol.entry)) throw Error(ErrorCode::NegativeEntry, describe_entry(i, j, e));
            if (e < Real(0)) e = Real(0);
        }
    check_row_sums(clamped, Real(1), tol);
    return MarkovMatrix<Real>(std::move(clamped));
}

template <class Real>
RateMatrix<Real> validate_rate(const RMat4<Real>& q, const Tolerances& tol) {
    if (!q.all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
    RMat4<Real> clamped = q;
    std::string violations;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            Real& e = clamped(i, j);
            if (e < Real(-tol.entry)) {
                if (!violations.empty()) violations += ", ";
                violations += describe_entry(i, j, e);
            } else if (e < Real(0)) {
                e = Real(0);
            }
        }
    if (!violations.empty()) throw Error(ErrorCode::NegativeOffDiagonal, violations);
    check_row_sums(clamped, Real(0), tol);
    return RateMatrix<Real>(std::move(clamped));
}

template <class Real>
Real min_offdiagonal(const RMat4<Real>& q) {
    Real best(0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j && q(i, j) < best) best = q(i, j);
    return best;
}

template <class Real>
BranchLog<Real> branch_log(const Spectrum<Real>& spec, std::int64_t k, const Tolerances& tol) {
    using std::log;
    const Complex<Real>& mu = spec.mu();
    const Complex<Real> log_mu(log(abs(mu)), arg(mu) + 2 * pi<Real>() * Real(k));
    const std::array<Complex<Real>, 4> d{Complex<Real>(), Complex<Real>(log(spec.lambda())), log_mu, conj(log_mu)};

    CMat4<Real> pd = spec.eigenvectors;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) pd(i, j) *= d[j];
    const CMat4<Real> assembled = pd * spec.inverse;

    BranchLog<Real> out;
    out.k = k;
    out.log = real_part(assembled);
    const Real residue = imag_part(assembled).max_abs();
    const Real scale = std::max<Real>(Real(1), out.log.max_abs());
    if (residue > Real(tol.real) * scale)
        throw Error(ErrorCode::ImaginaryResidue, "imaginary part " + to_decimal(to_double(residue)) + " of Log_" +
                                                     std::to_string(k) + " exceeds tolerance");
    out.min_offdiag = min_offdiagonal(out.log);
    out.is_rate = out.min_offdiag >= Real(-tol.entry);
    return out;
}

template <class Real>
AffineBranchFamily<Real> affine_branch_family(const Spectrum<Real>& spec, const Tolerances& tol) {
    AffineBranchFamily<Real> fam;
    fam.base = branch_log(spec, 0, tol).log;
    fam.step = branch_log(spec, 1, tol).log - fam.base;
    const RMat4<Real> minus_one = branch_log(spec, -1, tol).log;
    const Real err = max_abs_diff(minus_one, fam.at(-1));
    const Real scale = std::max<Real>(Real(1), fam.base.max_abs() + fam.step.max_abs());
    if (err > Real(1e-8) * scale)
        throw Error(ErrorCode::InvalidArgument,
                    "branch logarithms not affine in k (residual " + to_decimal(to_double(err)) + "); corrupted spectrum");
    return fam;
}

template <class Real>
KWindow generator_window(const AffineBranchFamily<Real>& fam, const Tolerances& tol) {
    using std::abs;
    using std::ceil;
    using std::floor;
    const Real floor_tol(-tol.entry);
    const Real tiny = epsilon<Real>() * std::max<Real>(Real(1), fam.step.max_abs());

    bool have_lo = false, have_hi = false;
    std::int64_t lo = -kWindowLimit, hi = kWindowLimit;
    bool infeasible = false;

    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            const Real& b = fam.base(i, j);
            const Real& s = fam.step(i, j);
            auto ok = [&](std::int64_t k) { return b + Real(k) * s >= floor_tol; };
            if (abs(s) <= tiny) {
                if (b < floor_tol) infeasible = true;
                continue;
            }
            const Real x = (floor_tol - b) / s;
            if (s > Real(0)) {
                std::int64_t c = clamp_to_index(ceil(x));
                // The quotient may round across an integer; settle on direct evaluation.
                while (c < kWindowLimit && !ok(c)) ++c;
                while (c > -kWindowLimit && ok(c - 1)) --c;
                lo = std::max(lo, c);
                have_lo = true;
            } else {
                std::int64_t c = clamp_to_index(floor(x));
                while (c > -kWindowLimit && !ok(c)) --c;
                while (c < kWindowLimit && ok(c + 1)) ++c;
                hi = std::min(hi, c);
                have_hi = true;
            }
        }
    if (!have_lo || !have_hi)
        throw Error(ErrorCode::DegenerateStep, "branch step has no off-diagonal entries of both signs");
    KWindow w{lo, hi};
    if (infeasible) w = KWindow{lo, lo - 1};
    return w;
}

template <class Real>
EmbeddabilityReport<Real> classify(const MarkovMatrix<Real>& m, const Tolerances& tol) {
    EmbeddabilityReport<Real> report;
    report.tolerances = tol;
    report.spectrum = eigendecompose_markov(m.matrix(), tol);
    const AffineBranchFamily<Real> fam = affine_branch_family(report.spectrum, tol);
    if (fam.step.max_abs() < Real(tol.entry))
        throw Error(ErrorCode::DegenerateStep, "branch step vanishes; spectrum cannot contain +-2 pi i");
    const KWindow window = generator_window(fam, tol);

    std::set<std::int64_t> ks{0};
    if (!window.empty()) {
        for (std::int64_t k = window.lo - 1; k <= window.hi + 1; ++k) ks.insert(k);
    } else {
        for (std::int64_t c : {window.lo, window.hi})
            for (std::int64_t k = c - 1; k <= c + 1; ++k) ks.insert(k);
    }
    for (std::int64_t k : ks) {
        BranchLog<Real> b = branch_log(report.spectrum, k, tol);
        if (b.is_rate && k >= window.lo && k <= window.hi) report.generators.push_back(k);
        report.branches.push_back(std::move(b));
    }
    report.verdict = report.generators.empty() ? Verdict::NotEmbeddable : Verdict::Embeddable;
    report.principal_is_generator =
        std::find(report.generators.begin(), report.generators.end(), 0) != report.generators.end();
    return report;
}

#define EMBEDLOG_INSTANTIATE(Real)                                                                      \
    template MarkovMatrix<Real> validate_markov<Real>(const RMat4<Real>&, const Tolerances&);           \
    template RateMatrix<Real> validate_rate<Real>(const RMat4<Real>&, const Tolerances&);               \
    template Real min_offdiagonal<Real>(const RMat4<Real>&);                                            \
    template BranchLog<Real> branch_log<Real>(const Spectrum<Real>&, std::int64_t, const Tolerances&);  \
    template AffineBranchFamily<Real> affine_branch_family<Real>(const Spectrum<Real>&, const Tolerances&); \
    template KWindow generator_window<Real>(const AffineBranchFamily<Real>&, const Tolerances&);        \
    template EmbeddabilityReport<Real> classify<Real>(const MarkovMatrix<Real>&, const Tolerances&);

EMBEDLOG_INSTANTIATE(double)
EMBEDLOG_INSTANTIATE(Extended)

#undef EMBEDLOG_INSTANTIATE

}  // namespace embedlog
