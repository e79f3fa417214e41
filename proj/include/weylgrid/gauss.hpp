#pragma once

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "weylgrid/weyl.hpp"

namespace weylgrid {

/// Single-step free evolution flavor, all diagonal in momentum labels
/// j in {0,...,N-1}:
///   cn1   -> omega_N^{-j^2/2}
///   cn2   -> omega_N^{-j(j-1)/2}
///   tn(t) -> omega_N^{-j^2 t/2}
class EvolutionKind {
public:
    enum class Tag { cn1, cn2, tn };

    static EvolutionKind cn1() { return EvolutionKind(Tag::cn1, 1); }
    static EvolutionKind cn2() { return EvolutionKind(Tag::cn2, 1); }
    static EvolutionKind tn(long long steps) {
        if (steps < 0) throw DomainError("EvolutionKind: tn steps must be >= 0");
        return EvolutionKind(Tag::tn, steps);
    }

    Tag tag() const { return tag_; }
    long long steps() const { return steps_; }

    /// Diagonal exponent at momentum label j, in half-powers of omega_N.
    long long half_exponent(long long j) const {
        switch (tag_) {
        case Tag::cn1: return -j * j;
        case Tag::cn2: return -j * (j - 1);
        case Tag::tn:  return -j * j * steps_;
        }
        return 0;
    }

private:
    EvolutionKind(Tag tag, long long steps) : tag_(tag), steps_(steps) {}
    Tag tag_;
    long long steps_;
};

inline void require_odd_dim(long long n, const char* who) {
    if (n < 3 || n % 2 == 0)
        throw DomainError(std::string(who) + ": n must be odd and >= 3");
}

/// Momentum-representation diagonal of the chosen evolution.
/// Odd N only: the half-integer exponents are representative-dependent
/// for even N.
inline UnitaryOp evolution_diag(long long n, const EvolutionKind& kind) {
    require_odd_dim(n, "evolution_diag");
    Matrix d = Matrix::Zero(n, n);
    for (long long j = 0; j < n; ++j)
        d(j, j) = phase_to_complex(
            PhaseExponent::omega_half_power(kind.half_exponent(j), n));
    return UnitaryOp(std::move(d));
}

/// Position-representation single step S * diag * S^-1, by explicit
/// conjugation with the Sylvester matrix. Entry (rho', rho) equals
/// (1/N) sum_j omega^{kind exponent + (rho'-rho) j}; circulant.
inline UnitaryOp step_position_matrix(long long n, const EvolutionKind& kind) {
    const UnitaryOp d = evolution_diag(n, kind);
    const Matrix s = sylvester_dft(n).matrix();
    return UnitaryOp(s * d.matrix() * s.adjoint());
}

/// Parameters of the generalized Gauss sum
/// sum_{n=0}^{|c|-1} exp(i*pi*(a n^2 + b n)/c), requiring ac != 0 and
/// ac + b even.
struct GaussSumSpec {
    GaussSumSpec(long long a, long long b, long long c) : a(a), b(b), c(c) {
        if (a * c == 0) throw DomainError("GaussSumSpec: ac must be nonzero");
        if ((a * c + b) % 2 != 0)
            throw DomainError("GaussSumSpec: ac + b must be even");
    }

    long long a;
    long long b;
    long long c;
};

/// Literal term-by-term evaluation. Each summand is reduced mod 2c before
/// exponentiation, so the phase argument stays small.
inline Complex gauss_sum_direct(const GaussSumSpec& s) {
    const long long terms = std::llabs(s.c);
    Complex acc(0.0, 0.0);
    for (long long k = 0; k < terms; ++k) {
        const long long t = normalize_mod(s.a * k * k + s.b * k, 2 * terms);
        acc += std::polar(1.0, std::numbers::pi * static_cast<double>(t) /
                                   static_cast<double>(s.c));
    }
    return acc;
}

/// Euclid-style evaluation through the reciprocity identity
///   G(a,b,c) = sqrt|c/a| * exp(i*pi*(|ac|-b^2)/(4ac)) * G(-c,-b,a).
/// Before each swap, a and b are reduced mod 2c (the summand only depends
/// on them mod 2c and the parity constraint survives); the recursion
/// terminates once the sum side has a single term or degenerates to a
/// geometric sum.
inline Complex gauss_sum_reciprocal(const GaussSumSpec& s) {
    long long a = s.a, b = s.b, c = s.c;
    Complex prefactor(1.0, 0.0);
    for (int depth = 0; depth < 128; ++depth) {
        if (c < 0) { a = -a; b = -b; c = -c; }
        if (c == 1) return prefactor; // single term n=0, exponent 0
        // Minimal-absolute representatives in (-c, c].
        a = normalize_mod(a, 2 * c);
        if (a > c) a -= 2 * c;
        b = normalize_mod(b, 2 * c);
        if (b > c) b -= 2 * c;
        if (a == 0) {
            // Purely linear summand with even b: geometric sum.
            const long long half = b / 2;
            return normalize_mod(half, c) == 0
                       ? prefactor * static_cast<double>(c)
                       : Complex(0.0, 0.0);
        }
        if (a == c) {
            // a an odd multiple of c: exp(i*pi*a n^2/c) = exp(i*pi*n), and
            // b + c is even, so the sum is again geometric.
            const long long half = (b + c) / 2;
            return normalize_mod(half, c) == 0
                       ? prefactor * static_cast<double>(c)
                       : Complex(0.0, 0.0);
        }
        prefactor *= std::sqrt(static_cast<double>(c) /
                               static_cast<double>(std::llabs(a))) *
                     std::polar(1.0, std::numbers::pi *
                                         static_cast<double>(std::llabs(a * c) -
                                                             b * b) /
                                         static_cast<double>(4 * a * c));
        const long long na = -c, nb = -b, nc = a;
        a = na; b = nb; c = nc;
    }
    throw ConsistencyError("gauss_sum_reciprocal: recursion failed to terminate");
}

/// One matrix entry of the single C_N2 step in position representation:
/// magnitude 1/sqrt(N), exact phase omega_N^{(d_rho + 1/2)^2/2} / sqrt(i).
struct PropagatorEntry {
    double magnitude;
    PhaseExponent phase;

    Complex value() const { return magnitude * phase_to_complex(phase); }
};

/// Closed form of <rho + d_rho| C_N2 |rho>. The omega_{8N} exponent is
/// (2 d_rho + 1)^2 - N: the action term contributes (2 d_rho + 1)^2 eighth
/// powers, the 1/sqrt(i) prefactor contributes -N.
inline PropagatorEntry closed_form_step(long long n, long long drho) {
    require_odd_dim(n, "closed_form_step");
    const long long sq = (2 * drho + 1) * (2 * drho + 1);
    return PropagatorEntry{1.0 / std::sqrt(static_cast<double>(n)),
                           PhaseExponent(sq - n, n)};
}

/// Exact rational, normalized with positive denominator.
struct Rational {
    Rational(long long num, long long den) : num(num), den(den) {
        if (den == 0) throw DomainError("Rational: zero denominator");
        if (this->den < 0) { this->num = -this->num; this->den = -this->den; }
        const long long g = std::gcd(std::llabs(this->num), this->den);
        if (g > 1) { this->num /= g; this->den /= g; }
    }

    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    bool operator==(const Rational& o) const {
        return num == o.num && den == o.den;
    }

    long long num;
    long long den;
};

/// Dimensionless single-step Lagrangian (2 d_rho + 1)^2 / 8
/// = (d_rho + 1/2)^2 / 2, exact.
inline Rational lagrangian_dimensionless(long long drho) {
    return Rational((2 * drho + 1) * (2 * drho + 1), 8);
}

inline void require_position_label(long long n, long long rho, const char* who) {
    if (rho < 0 || rho >= n)
        throw DomainError(std::string(who) + ": position label out of [0, N)");
}

/// tau-step amplitude by the direct momentum sum
/// (1/N) sum_j omega^{(kind half-exponent at j) * tau / 2 + (rho_t - rho_0) j},
/// with the whole phase accumulated exactly in Z_{8N}.
inline Complex multi_step_momentum_sum(long long n, long long tau,
                                       long long rho0, long long rhotau,
                                       const EvolutionKind& kind) {
    require_odd_dim(n, "multi_step_momentum_sum");
    if (tau < 0) throw DomainError("multi_step_momentum_sum: tau must be >= 0");
    require_position_label(n, rho0, "multi_step_momentum_sum");
    require_position_label(n, rhotau, "multi_step_momentum_sum");
    Complex acc(0.0, 0.0);
    for (long long j = 0; j < n; ++j) {
        const long long eighth =
            4 * kind.half_exponent(j) * tau + 8 * (rhotau - rho0) * j;
        acc += phase_to_complex(PhaseExponent(eighth, n));
    }
    return acc / static_cast<double>(n);
}

/// B^e by binary exponentiation.
inline Matrix matrix_power(const Matrix& base, long long e) {
    if (e < 0) throw DomainError("matrix_power: exponent must be >= 0");
    Matrix acc = Matrix::Identity(base.rows(), base.cols());
    Matrix sq = base;
    while (e > 0) {
        if (e & 1) acc = acc * sq;
        e >>= 1;
        if (e > 0) sq = sq * sq;
    }
    return acc;
}

/// tau-step amplitude as an entry of the tau-th matrix power of the
/// single-step position matrix.
inline Complex multi_step_matrix_power(long long n, long long tau,
                                       long long rho0, long long rhotau,
                                       const EvolutionKind& kind) {
    require_odd_dim(n, "multi_step_matrix_power");
    if (tau < 0) throw DomainError("multi_step_matrix_power: tau must be >= 0");
    require_position_label(n, rho0, "multi_step_matrix_power");
    require_position_label(n, rhotau, "multi_step_matrix_power");
    const Matrix step = step_position_matrix(n, kind).matrix();
    return matrix_power(step, tau)(rhotau, rho0);
}

/// tau-step amplitude as the literal nested sum over the intermediate
/// labels rho_1 ... rho_{tau-1}. Cost N^{tau-1}; refuses configurations
/// past ~2e8 enumerated paths.
inline Complex multi_step_nested_sum(long long n, long long tau,
                                     long long rho0, long long rhotau,
                                     const EvolutionKind& kind) {
    require_odd_dim(n, "multi_step_nested_sum");
    if (tau < 0) throw DomainError("multi_step_nested_sum: tau must be >= 0");
    require_position_label(n, rho0, "multi_step_nested_sum");
    require_position_label(n, rhotau, "multi_step_nested_sum");
    if (tau == 0) return rho0 == rhotau ? Complex(1.0, 0.0) : Complex(0.0, 0.0);

    double paths = 1.0;
    for (long long i = 1; i < tau; ++i) {
        paths *= static_cast<double>(n);
        if (paths > 2e8)
            throw DomainError("multi_step_nested_sum: path count too large");
    }
    // Single-step entries depend only on the displacement (circulant).
    std::vector<Complex> col(n);
    for (long long d = 0; d < n; ++d)
        col[d] = multi_step_momentum_sum(n, 1, 0, d, kind);

    std::vector<long long> inner(static_cast<size_t>(tau > 1 ? tau - 1 : 0), 0);
    Complex acc(0.0, 0.0);
    while (true) {
        Complex term(1.0, 0.0);
        long long prev = rho0;
        for (long long i = 0; i + 1 < tau; ++i) {
            const long long cur = inner[static_cast<size_t>(i)];
            term *= col[normalize_mod(cur - prev, n)];
            prev = cur;
        }
        term *= col[normalize_mod(rhotau - prev, n)];
        acc += term;
        // Odometer over the intermediate labels.
        size_t pos = 0;
        while (pos < inner.size() && ++inner[pos] == n) inner[pos++] = 0;
        if (pos == inner.size()) break;
    }
    return acc;
}

inline constexpr double kMultiStepAgreementTol = 1e-10;

/// tau-step propagator <rho_tau| U^tau |rho_0>, cross-checked across the
/// matrix-power and momentum-sum routes (and the nested sum when tau <= 4);
/// disagreement beyond 1e-10 raises ConsistencyError.
inline Complex multi_step_propagator(long long n, long long tau, long long rho0,
                                     long long rhotau,
                                     const EvolutionKind& kind =
                                         EvolutionKind::cn1()) {
    const Complex direct = multi_step_momentum_sum(n, tau, rho0, rhotau, kind);
    const Complex powered = multi_step_matrix_power(n, tau, rho0, rhotau, kind);
    if (std::abs(direct - powered) > kMultiStepAgreementTol)
        throw ConsistencyError(
            "multi_step_propagator: matrix power disagrees with momentum sum");
    if (tau <= 4) {
        const Complex nested = multi_step_nested_sum(n, tau, rho0, rhotau, kind);
        if (std::abs(direct - nested) > kMultiStepAgreementTol)
            throw ConsistencyError(
                "multi_step_propagator: nested sum disagrees with momentum sum");
    }
    return direct;
}

/// C_N2 followed by the position-diagonal potential phase diag(omega^{-w}):
/// entry (rho', rho) = closed_form_step(rho' - rho) * exp(-2 pi i w_rho / N).
/// w is indexed by the matrix position label rho in {0,...,N-1}.
inline UnitaryOp potential_step_matrix(long long n,
                                       const std::vector<double>& w) {
    require_odd_dim(n, "potential_step_matrix");
    if (static_cast<long long>(w.size()) != n)
        throw DomainError("potential_step_matrix: w must have length N");
    Matrix m(n, n);
    for (long long c = 0; c < n; ++c) {
        const Complex column_phase = std::polar(
            1.0, -2.0 * std::numbers::pi * w[static_cast<size_t>(c)] /
                     static_cast<double>(n));
        for (long long r = 0; r < n; ++r)
            m(r, c) = closed_form_step(n, r - c).value() * column_phase;
    }
    return UnitaryOp(std::move(m));
}

} // namespace weylgrid
