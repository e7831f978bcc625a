#pragma once

#include <cstdint>
#include <vector>

#include "embedlog/matrix.hpp"
#include "embedlog/spectrum.hpp"
#include "embedlog/tolerances.hpp"

namespace embedlog {

template <class Real>
class MarkovMatrix;
template <class Real>
class RateMatrix;

template <class Real>
MarkovMatrix<Real> validate_markov(const RMat4<Real>& m, const Tolerances& tol = {});

template <class Real>
RateMatrix<Real> validate_rate(const RMat4<Real>& q, const Tolerances& tol = {});

/// Non-negative entries, unit row sums. Entries in [-tol_entry, 0) are
/// clamped to zero on construction.
template <class Real>
class MarkovMatrix {
public:
    const RMat4<Real>& matrix() const { return m_; }

private:
    explicit MarkovMatrix(RMat4<Real> m) : m_(std::move(m)) {}
    RMat4<Real> m_;

    friend MarkovMatrix validate_markov<Real>(const RMat4<Real>&, const Tolerances&);
};

/// Non-negative off-diagonal entries, zero row sums.
template <class Real>
class RateMatrix {
public:
    const RMat4<Real>& matrix() const { return q_; }

private:
    explicit RateMatrix(RMat4<Real> q) : q_(std::move(q)) {}
    RMat4<Real> q_;

    friend RateMatrix validate_rate<Real>(const RMat4<Real>&, const Tolerances&);
};

/// Most negative off-diagonal entry, or 0 when none is negative.
template <class Real>
Real min_offdiagonal(const RMat4<Real>& q);

template <class Real>
struct BranchLog {
    std::int64_t k = 0;
    RMat4<Real> log;
    bool is_rate = false;
    Real min_offdiag{0};
};

/// Log_k = Re(P diag(0, log lambda, log mu + 2 pi k i, conj(.)) P^-1).
/// Throws ImaginaryResidue when the discarded imaginary part exceeds
/// tol.real * max(1, ||Log_k||_max).
template <class Real>
BranchLog<Real> branch_log(const Spectrum<Real>& spec, std::int64_t k, const Tolerances& tol = {});

/// Log_k = base + k * step for every integer k.
template <class Real>
struct AffineBranchFamily {
    RMat4<Real> base;
    RMat4<Real> step;

    RMat4<Real> at(std::int64_t k) const { return base + step * Real(k); }
};

template <class Real>
AffineBranchFamily<Real> affine_branch_family(const Spectrum<Real>& spec, const Tolerances& tol = {});

/// Integer window [lo, hi] of branch indices admitted by the 12 linear
/// off-diagonal constraints base_ij + k step_ij >= -tol_entry. Empty when lo > hi.
struct KWindow {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    bool empty() const { return lo > hi; }
};

template <class Real>
KWindow generator_window(const AffineBranchFamily<Real>& family, const Tolerances& tol = {});

enum class Verdict { Embeddable, NotEmbeddable };

template <class Real>
struct EmbeddabilityReport {
    Spectrum<Real> spectrum;
    std::vector<BranchLog<Real>> branches;  ///< generator window widened by one on each side
    std::vector<std::int64_t> generators;
    Verdict verdict = Verdict::NotEmbeddable;
    bool principal_is_generator = false;
    Tolerances tolerances;

    const BranchLog<Real>* branch(std::int64_t k) const {
        for (const auto& b : branches)
            if (b.k == k) return &b;
        return nullptr;
    }
};

/// Exact decision over all k: the generator set is the integer solution set
/// of the 12 affine constraints, confirmed branch by branch.
template <class Real>
EmbeddabilityReport<Real> classify(const MarkovMatrix<Real>& m, const Tolerances& tol = {});

}  // namespace embedlog
