#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

#include "weylgrid/errors.hpp"

namespace weylgrid {

using Complex = std::complex<double>;

// Canonical representative of v mod m in [0, m).
inline long long normalize_mod(long long v, long long m) {
    long long r = v % m;
    return r < 0 ? r + m : r;
}

/// Exact root-of-unity phase, stored as an integer exponent e of
/// omega_{8N} = exp(2*pi*i/(8N)), with e kept canonical in [0, 8N).
///
/// The modulus 8N is the smallest one that holds every phase the free
/// lattice evolution produces: half-integer powers of omega_N (the
/// momentum-diagonal exponents), the eighth-integer power from the
/// closed-form action 1/2*(d_rho + 1/2)^2, and the eighth root of unity
/// 1/sqrt(i) = exp(-i*pi/4), which lands on e = -N.
class PhaseExponent {
public:
    PhaseExponent(long long e, long long n) : n_(n) {
        if (n < 1) throw DomainError("PhaseExponent: dimension must be >= 1");
        e_ = normalize_mod(e, 8 * n);
    }

    /// omega_N^k  (integer power)
    static PhaseExponent omega_power(long long k, long long n) {
        return PhaseExponent(8 * k, n);
    }
    /// omega_N^{h/2}  (half-integer power, h integer)
    static PhaseExponent omega_half_power(long long h, long long n) {
        return PhaseExponent(4 * h, n);
    }
    /// 1/sqrt(i) = exp(-i*pi/4)
    static PhaseExponent inv_sqrt_i(long long n) {
        return PhaseExponent(-n, n);
    }

    long long exponent() const { return e_; }
    long long dim() const { return n_; }

    PhaseExponent operator+(const PhaseExponent& o) const {
        require_same_dim(o);
        return PhaseExponent(e_ + o.e_, n_);
    }
    PhaseExponent operator-(const PhaseExponent& o) const {
        require_same_dim(o);
        return PhaseExponent(e_ - o.e_, n_);
    }
    PhaseExponent operator-() const { return PhaseExponent(-e_, n_); }
    /// Integer multiple of the phase angle.
    PhaseExponent scaled(long long k) const { return PhaseExponent(e_ * k, n_); }

    bool operator==(const PhaseExponent& o) const {
        return n_ == o.n_ && e_ == o.e_;
    }
    bool operator!=(const PhaseExponent& o) const { return !(*this == o); }

private:
    void require_same_dim(const PhaseExponent& o) const {
        if (n_ != o.n_)
            throw DimensionError("PhaseExponent: mismatched dimensions");
    }

    long long e_;
    long long n_;
};

/// exp(2*pi*i*e/(8N)) to double precision; modulus within 1e-15 of 1.
inline Complex phase_to_complex(const PhaseExponent& p) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(p.exponent()) /
        static_cast<double>(8 * p.dim());
    return std::polar(1.0, angle);
}

/// Point (j, sigma) of the finite phase space Z_N x Z_N.
struct PhasePoint {
    PhasePoint(long long j, long long sigma, long long n)
        : j(normalize_mod(j, n)), sigma(normalize_mod(sigma, n)), n(n) {
        if (n < 1) throw DomainError("PhasePoint: dimension must be >= 1");
    }

    bool operator==(const PhasePoint& o) const {
        return n == o.n && j == o.j && sigma == o.sigma;
    }
    bool operator!=(const PhasePoint& o) const { return !(*this == o); }

    long long j;
    long long sigma;
    long long n;
};

/// 2x2 matrix over Z_N with determinant 1 mod N.
class SL2ZN {
public:
    SL2ZN(long long a, long long b, long long c, long long d, long long n)
        : a_(normalize_mod(a, n)), b_(normalize_mod(b, n)),
          c_(normalize_mod(c, n)), d_(normalize_mod(d, n)), n_(n) {
        if (n < 1) throw DomainError("SL2ZN: dimension must be >= 1");
        if (normalize_mod(a_ * d_ - b_ * c_, n) != normalize_mod(1, n))
            throw DomainError("SL2ZN: determinant must be 1 mod N");
    }

    static SL2ZN identity(long long n) { return SL2ZN(1, 0, 0, 1, n); }

    long long a() const { return a_; }
    long long b() const { return b_; }
    long long c() const { return c_; }
    long long d() const { return d_; }
    long long dim() const { return n_; }

    /// Adjugate inverse [[d,-b],[-c,a]].
    SL2ZN inverse() const { return SL2ZN(d_, -b_, -c_, a_, n_); }

    bool operator==(const SL2ZN& o) const {
        return n_ == o.n_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_ &&
               d_ == o.d_;
    }
    bool operator!=(const SL2ZN& o) const { return !(*this == o); }

private:
    long long a_, b_, c_, d_;
    long long n_;
};

/// Entrywise product reduced mod N.
inline SL2ZN sl2_mul(const SL2ZN& m1, const SL2ZN& m2) {
    if (m1.dim() != m2.dim())
        throw DimensionError("sl2_mul: mismatched dimensions");
    const long long n = m1.dim();
    return SL2ZN(m1.a() * m2.a() + m1.b() * m2.c(),
                 m1.a() * m2.b() + m1.b() * m2.d(),
                 m1.c() * m2.a() + m1.d() * m2.c(),
                 m1.c() * m2.b() + m1.d() * m2.d(), n);
}

/// Right action (j', sigma') = (j, sigma) * m.
inline PhasePoint sl2_act(const PhasePoint& pt, const SL2ZN& m) {
    if (pt.n != m.dim())
        throw DimensionError("sl2_act: mismatched dimensions");
    return PhasePoint(pt.j * m.a() + pt.sigma * m.c(),
                      pt.j * m.b() + pt.sigma * m.d(), pt.n);
}

} // namespace weylgrid
