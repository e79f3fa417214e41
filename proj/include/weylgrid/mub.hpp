#pragma once

#include <cmath>
#include <vector>

#include "weylgrid/gauss.hpp"

namespace weylgrid {

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Ordered orthonormal frame tagged by its phase-space label (j, sigma):
/// the basis of eigenvectors of Q^j P^sigma. Orthonormality is certified at
/// construction; the eigenvector claim is certified by eigenbasis_check.
class LabeledBasis {
public:
    LabeledBasis(PhasePoint label, Matrix vectors)
        : label_(label), vectors_(std::move(vectors)) {
        const auto n = vectors_.rows();
        if (n < 2 || n != vectors_.cols())
            throw DomainError("LabeledBasis: need a square frame, n >= 2");
        if (label_.n != n)
            throw DimensionError("LabeledBasis: label dimension mismatch");
        const double dev = max_abs(vectors_.adjoint() * vectors_ -
                                   Matrix::Identity(n, n));
        if (dev > 1e-12)
            throw CertificationError("LabeledBasis: Gram deviation " +
                                     std::to_string(dev));
    }

    long long dim() const { return vectors_.rows(); }
    const PhasePoint& label() const { return label_; }
    const Matrix& vectors() const { return vectors_; }

private:
    PhasePoint label_;
    Matrix vectors_;
};

/// Standard unit vectors; eigenvectors of Q, label (1, 0).
inline LabeledBasis canonical_basis(long long n) {
    if (n < 2) throw DomainError("canonical_basis: n must be >= 2");
    return LabeledBasis(PhasePoint(1, 0, n), Matrix::Identity(n, n));
}

/// Columns of the Sylvester matrix; eigenvectors of P, label (0, 1).
inline LabeledBasis momentum_basis(long long n) {
    return LabeledBasis(PhasePoint(0, 1, n), sylvester_dft(n).matrix());
}

struct UnbiasednessReport {
    double max_dev;
    bool is_mub;
};

/// max over (i,j) of | |<u_i|v_j>| - 1/sqrt(N) |.
inline UnbiasednessReport unbiasedness(const LabeledBasis& b1,
                                       const LabeledBasis& b2,
                                       double tol = 1e-10) {
    if (b1.dim() != b2.dim())
        throw DimensionError("unbiasedness: mismatched dimensions");
    const double target = 1.0 / std::sqrt(static_cast<double>(b1.dim()));
    const Matrix gram = b1.vectors().adjoint() * b2.vectors();
    const double dev = (gram.cwiseAbs().array() - target).abs().maxCoeff();
    return UnbiasednessReport{dev, dev <= tol};
}

struct EigenbasisReport {
    double max_residual;
    bool pass;
};

/// Certifies that every vector of b is an eigenvector of Q^j P^sigma for
/// the basis label: residual ||M v - <v|M v> v||_2 per vector.
inline EigenbasisReport eigenbasis_check(const LabeledBasis& b,
                                         double tol = 1e-10) {
    const Matrix m = heisenberg_to_matrix(HeisenbergElement(
                                              0, b.label().j, b.label().sigma,
                                              b.dim()))
                         .matrix();
    double worst = 0.0;
    for (long long i = 0; i < b.dim(); ++i) {
        const Vector v = b.vectors().col(i);
        const Vector mv = m * v;
        const Complex lambda = v.dot(mv);
        worst = std::max(worst, (mv - lambda * v).norm());
    }
    return EigenbasisReport{worst, worst <= tol};
}

/// Chain of N+1 mutually unbiased bases for odd prime N:
///   B_(0,1) -> B_(1,0) -> B_(1,1) -> ... -> B_(1,N-1).
/// Each arrow applies the ADJOINT of its conjugation generator to the
/// previous frame: S^-1 maps the momentum columns onto the canonical basis,
/// then C_N2^dagger advances (1,b) to (1,b+1) — the direction under which
/// labels follow the right action of Phi(S) and then powers of Phi(C_N2),
/// as certified by the per-step eigenvector residuals. Bases are never
/// produced by eigendecomposition; the label claim is certified after
/// construction.
inline std::vector<LabeledBasis> mub_chain(long long n, double tol = 1e-10) {
    if (n < 3 || n % 2 == 0 || !is_prime(n))
        throw DomainError("mub_chain: n must be an odd prime");

    const SL2ZN phi_s(0, -1, 1, 0, n);
    const SL2ZN phi_c(1, 1, 0, 1, n);

    std::vector<LabeledBasis> chain;
    chain.reserve(static_cast<size_t>(n + 1));
    chain.push_back(momentum_basis(n));

    const Matrix s_inv = sylvester_dft(n).matrix().adjoint();
    chain.emplace_back(sl2_act(chain.back().label(), phi_s),
                       Matrix(s_inv * chain.back().vectors()));

    const Matrix c2_dag =
        step_position_matrix(n, EvolutionKind::cn2()).matrix().adjoint();
    for (long long b = 1; b < n; ++b)
        chain.emplace_back(sl2_act(chain.back().label(), phi_c),
                           Matrix(c2_dag * chain.back().vectors()));

    for (const LabeledBasis& basis : chain) {
        const EigenbasisReport report = eigenbasis_check(basis, tol);
        if (!report.pass)
            throw CertificationError(
                "mub_chain: basis failed its eigenvector certification, "
                "residual " +
                std::to_string(report.max_residual));
    }
    return chain;
}

} // namespace weylgrid
