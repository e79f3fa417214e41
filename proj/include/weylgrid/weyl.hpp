#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>

#include "weylgrid/modular.hpp"

namespace weylgrid {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline constexpr double kUnitaryTol = 1e-12;

/// Dense N x N unitary, certified at construction:
/// ||U^dagger U - I||_max <= 1e-12 * N.
class UnitaryOp {
public:
    explicit UnitaryOp(Matrix m) : mat_(std::move(m)) {
        const auto n = mat_.rows();
        if (n < 1 || n != mat_.cols())
            throw DomainError("UnitaryOp: matrix must be square and nonempty");
        const double dev =
            max_abs(mat_.adjoint() * mat_ - Matrix::Identity(n, n));
        if (dev > kUnitaryTol * static_cast<double>(n))
            throw CertificationError("UnitaryOp: unitarity deviation " +
                                     std::to_string(dev));
    }

    long long dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }

private:
    Matrix mat_;
};

/// Q = diag(1, omega_N, ..., omega_N^{N-1}); Q|rho> = omega^rho |rho>.
inline UnitaryOp position_phase_op(long long n) {
    if (n < 2) throw DomainError("position_phase_op: n must be >= 2");
    Matrix q = Matrix::Zero(n, n);
    for (long long r = 0; r < n; ++r)
        q(r, r) = phase_to_complex(PhaseExponent::omega_power(r, n));
    return UnitaryOp(std::move(q));
}

/// Cyclic shift with P|rho> = |rho - 1 mod N>; ones at (rho-1, rho).
inline UnitaryOp cyclic_shift_op(long long n) {
    if (n < 2) throw DomainError("cyclic_shift_op: n must be >= 2");
    Matrix p = Matrix::Zero(n, n);
    for (long long c = 0; c < n; ++c) p(normalize_mod(c - 1, n), c) = 1.0;
    return UnitaryOp(std::move(p));
}

/// Sylvester DFT with entries omega_N^{rho k} / sqrt(N); S^-1 P S = Q.
inline UnitaryOp sylvester_dft(long long n) {
    if (n < 2) throw DomainError("sylvester_dft: n must be >= 2");
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    Matrix s(n, n);
    for (long long r = 0; r < n; ++r)
        for (long long c = 0; c < n; ++c)
            s(r, c) =
                norm * phase_to_complex(PhaseExponent::omega_power(r * c, n));
    return UnitaryOp(std::move(s));
}

struct WeylGenerators {
    UnitaryOp q;
    UnitaryOp p;
    UnitaryOp s;
};

inline WeylGenerators build_generators(long long n) {
    return WeylGenerators{position_phase_op(n), cyclic_shift_op(n),
                          sylvester_dft(n)};
}

/// Element omega_N^l Q^j P^sigma of the finite Heisenberg group.
struct HeisenbergElement {
    HeisenbergElement(long long l, long long j, long long sigma, long long n)
        : l(normalize_mod(l, n)), j(normalize_mod(j, n)),
          sigma(normalize_mod(sigma, n)), n(n) {
        if (n < 1) throw DomainError("HeisenbergElement: dimension must be >= 1");
    }

    bool operator==(const HeisenbergElement& o) const {
        return n == o.n && l == o.l && j == o.j && sigma == o.sigma;
    }
    bool operator!=(const HeisenbergElement& o) const { return !(*this == o); }

    long long l;
    long long j;
    long long sigma;
    long long n;
};

/// Product rule from P Q = omega Q P:
/// (l1,j1,s1)*(l2,j2,s2) = (l1+l2+s1*j2, j1+j2, s1+s2) mod N.
inline HeisenbergElement heisenberg_mul(const HeisenbergElement& g1,
                                        const HeisenbergElement& g2) {
    if (g1.n != g2.n)
        throw DimensionError("heisenberg_mul: mismatched dimensions");
    return HeisenbergElement(g1.l + g2.l + g1.sigma * g2.j, g1.j + g2.j,
                             g1.sigma + g2.sigma, g1.n);
}

/// omega^l Q^j P^sigma as a dense matrix. Entry (r, r+sigma mod N) carries
/// omega^{l + j r}: Q^j P^sigma |rho> = omega^{j(rho-sigma)} |rho-sigma>,
/// so column rho = r+sigma feeds row r with omega^{jr}.
inline UnitaryOp heisenberg_to_matrix(const HeisenbergElement& g) {
    const long long n = g.n;
    if (n < 2) throw DomainError("heisenberg_to_matrix: n must be >= 2");
    Matrix m = Matrix::Zero(n, n);
    for (long long r = 0; r < n; ++r)
        m(r, normalize_mod(r + g.sigma, n)) =
            phase_to_complex(PhaseExponent::omega_power(g.l + g.j * r, n));
    return UnitaryOp(std::move(m));
}

/// Drop the central phase: (l, j, sigma) -> (j, sigma).
inline PhasePoint coset_of(const HeisenbergElement& g) {
    return PhasePoint(g.j, g.sigma, g.n);
}

struct MonomialMatch {
    Complex scale;    // unimodular scalar with x = scale * Q^j P^sigma
    PhasePoint label; // (j, sigma)
};

/// Match x against scale * Q^j P^sigma over all N^2 monomials. The scalar is
/// read off the first support entry (row 0), then the residual is checked in
/// max norm. Returns nothing when no monomial fits within tol.
inline std::optional<MonomialMatch> match_weyl_monomial(const Matrix& x,
                                                        double tol = 1e-10) {
    const long long n = x.rows();
    if (n < 2 || n != x.cols())
        throw DomainError("match_weyl_monomial: matrix must be square, n >= 2");
    for (long long sigma = 0; sigma < n; ++sigma) {
        // Support of Q^j P^sigma is the same for every j: (r, r+sigma).
        // Phase alignment reads the first support entry, row 0.
        const Complex pivot = x(0, normalize_mod(sigma, n));
        if (std::abs(pivot) < 0.5) continue;
        const Complex lam = pivot / std::abs(pivot);
        for (long long j = 0; j < n; ++j) {
            double dev = 0.0;
            for (long long r = 0; r < n && dev <= tol; ++r) {
                const long long cs = normalize_mod(r + sigma, n);
                for (long long c = 0; c < n; ++c) {
                    const Complex want =
                        c == cs ? lam * phase_to_complex(
                                            PhaseExponent::omega_power(j * r, n))
                                : Complex(0.0, 0.0);
                    dev = std::max(dev, std::abs(x(r, c) - want));
                    if (dev > tol) break;
                }
            }
            if (dev <= tol)
                return MonomialMatch{lam, PhasePoint(j, sigma, n)};
        }
    }
    return std::nullopt;
}

/// Quadruple (a,b,c,d) with U^-1 Q U ~ Q^a P^b and U^-1 P U ~ Q^c P^d
/// (proportionality up to a unimodular scalar), as an SL(2,Z_N) matrix.
inline SL2ZN automorphism_to_sl2(const UnitaryOp& u, double tol = 1e-10) {
    const long long n = u.dim();
    const Matrix& um = u.matrix();
    const Matrix q = position_phase_op(n).matrix();
    const Matrix p = cyclic_shift_op(n).matrix();
    const auto mq = match_weyl_monomial(um.adjoint() * q * um, tol);
    if (!mq)
        throw NotAnAutomorphismError(
            "automorphism_to_sl2: U^-1 Q U matches no monomial");
    const auto mp = match_weyl_monomial(um.adjoint() * p * um, tol);
    if (!mp)
        throw NotAnAutomorphismError(
            "automorphism_to_sl2: U^-1 P U matches no monomial");
    const long long a = mq->label.j, b = mq->label.sigma;
    const long long c = mp->label.j, d = mp->label.sigma;
    if (normalize_mod(a * d - b * c, n) != normalize_mod(1, n))
        throw NotAnAutomorphismError(
            "automorphism_to_sl2: matched quadruple has determinant != 1");
    return SL2ZN(a, b, c, d, n);
}

} // namespace weylgrid
