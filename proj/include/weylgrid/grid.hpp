#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "weylgrid/gauss.hpp"

namespace weylgrid {

using PotentialFn = std::function<double(double)>;

/// Schwinger grid of odd size N with physical units: length a, mass m,
/// action hbar. Derived: eta_N = sqrt(2 pi / N), time step
/// epsilon = m a^2 / hbar (a particle of momentum hbar/a crosses one cell
/// per step).
class GridSpec {
public:
    GridSpec(long long n, double a, double m, double hbar)
        : n_(n), a_(a), m_(m), hbar_(hbar) {
        require_odd_dim(n, "GridSpec");
        if (!(a > 0.0) || !(m > 0.0) || !(hbar > 0.0) || !std::isfinite(a) ||
            !std::isfinite(m) || !std::isfinite(hbar))
            throw DomainError("GridSpec: a, m, hbar must be positive and finite");
    }

    long long dim() const { return n_; }
    double a() const { return a_; }
    double mass() const { return m_; }
    double hbar() const { return hbar_; }

    double eta() const {
        return std::sqrt(2.0 * std::numbers::pi / static_cast<double>(n_));
    }
    double epsilon() const { return m_ * a_ * a_ / hbar_; }
    /// Grid spacing a * eta_N.
    double spacing() const { return a_ * eta(); }

    /// Centered representative of the matrix label idx in [0, N):
    /// idx for idx <= (N-1)/2, idx - N otherwise.
    long long centered_label(long long idx) const {
        return idx <= (n_ - 1) / 2 ? idx : idx - n_;
    }
    /// Grid point for the matrix label idx.
    double point_of_label(long long idx) const {
        return spacing() * static_cast<double>(centered_label(idx));
    }

private:
    long long n_;
    double a_;
    double m_;
    double hbar_;
};

/// Grid points a eta_N rho, rho = -(N-1)/2, ..., (N-1)/2, ascending.
inline std::vector<double> grid_points(const GridSpec& g) {
    const long long n = g.dim();
    std::vector<double> pts(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i)
        pts[static_cast<size_t>(i)] =
            g.spacing() * static_cast<double>(i - (n - 1) / 2);
    return pts;
}

/// Dense N x N Hermitian operator, certified at construction:
/// ||H - H^dagger||_max <= 1e-12 * max|H|.
class HermitianOp {
public:
    explicit HermitianOp(Matrix m) : mat_(std::move(m)) {
        const auto n = mat_.rows();
        if (n < 1 || n != mat_.cols())
            throw DomainError("HermitianOp: matrix must be square and nonempty");
        const double scale = max_abs(mat_);
        const double dev = max_abs(mat_ - mat_.adjoint());
        if (dev > 1e-12 * scale)
            throw CertificationError("HermitianOp: hermiticity deviation " +
                                     std::to_string(dev));
    }

    long long dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }

private:
    Matrix mat_;
};

struct GridOperators {
    HermitianOp q;
    HermitianOp p;
};

/// q_N = diag(a eta rho) in position labels and p_N = S diag(hbar/a eta k) S^-1
/// with the same centered labels. p is the Fourier conjugate of a diagonal,
/// never a finite-difference stencil.
inline GridOperators grid_operators(const GridSpec& g) {
    const long long n = g.dim();
    Matrix q = Matrix::Zero(n, n);
    Matrix d = Matrix::Zero(n, n);
    const double punit = g.hbar() / g.a() * g.eta();
    for (long long r = 0; r < n; ++r) {
        q(r, r) = g.point_of_label(r);
        d(r, r) = punit * static_cast<double>(g.centered_label(r));
    }
    const Matrix s = sylvester_dft(n).matrix();
    return GridOperators{HermitianOp(std::move(q)),
                         HermitianOp(s * d * s.adjoint())};
}

/// Dimensionless potential constants w_rho = V(a eta rho) * N eps / (2 pi hbar),
/// stored ascending by the centered label rho = -(N-1)/2, ..., (N-1)/2.
class PotentialSamples {
public:
    PotentialSamples(long long n, std::vector<double> w_ascending)
        : n_(n), w_(std::move(w_ascending)) {
        if (static_cast<long long>(w_.size()) != n)
            throw DomainError("PotentialSamples: need exactly N values");
    }

    long long dim() const { return n_; }
    const std::vector<double>& ascending() const { return w_; }

    double at_centered(long long rho_c) const {
        const long long i = rho_c + (n_ - 1) / 2;
        if (i < 0 || i >= n_)
            throw DomainError("PotentialSamples: centered label out of range");
        return w_[static_cast<size_t>(i)];
    }

    /// Reindex to matrix labels 0..N-1 through the bridge rho -> rho mod N.
    std::vector<double> standard_order() const {
        std::vector<double> out(static_cast<size_t>(n_));
        for (long long rho = 0; rho < n_; ++rho) {
            const long long c = rho <= (n_ - 1) / 2 ? rho : rho - n_;
            out[static_cast<size_t>(rho)] = at_centered(c);
        }
        return out;
    }

private:
    long long n_;
    std::vector<double> w_;
};

/// Sample V on the grid and convert to the dimensionless constants w.
inline PotentialSamples sample_potential(const GridSpec& g,
                                         const PotentialFn& v) {
    const long long n = g.dim();
    const double unit = static_cast<double>(n) * g.epsilon() /
                        (2.0 * std::numbers::pi * g.hbar());
    std::vector<double> w(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const double q = g.spacing() * static_cast<double>(i - (n - 1) / 2);
        const double val = v(q);
        if (!std::isfinite(val))
            throw DomainError("sample_potential: V is not finite at a grid point");
        w[static_cast<size_t>(i)] = val * unit;
    }
    return PotentialSamples(n, std::move(w));
}

/// H = p^2/(2m) + V(q), with V evaluated at the grid points.
inline HermitianOp build_hamiltonian(const GridSpec& g, const PotentialFn& v) {
    const long long n = g.dim();
    const Matrix p = grid_operators(g).p.matrix();
    Matrix h = p * p / (2.0 * g.mass());
    for (long long r = 0; r < n; ++r) {
        const double val = v(g.point_of_label(r));
        if (!std::isfinite(val))
            throw DomainError("build_hamiltonian: V is not finite at a grid point");
        h(r, r) += val;
    }
    return HermitianOp(std::move(h));
}

/// k lowest eigenvalues, ascending. Every returned pair is certified:
/// ||H v - lambda v||_2 <= 1e-10 * ||H||.
inline std::vector<double> spectrum(const HermitianOp& h, long long k) {
    const long long n = h.dim();
    if (k < 0 || k > n) throw DomainError("spectrum: need 0 <= k <= N");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success)
        throw CertificationError("spectrum: eigensolver failed to converge");
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    const double hnorm =
        std::max(std::abs(vals(0)), std::abs(vals(n - 1)));
    std::vector<double> out(static_cast<size_t>(k));
    for (long long i = 0; i < k; ++i) {
        const double resid =
            (h.matrix() * vecs.col(i) - vals(i) * vecs.col(i)).norm();
        if (resid > 1e-10 * hnorm)
            throw CertificationError("spectrum: eigenpair residual " +
                                     std::to_string(resid));
        out[static_cast<size_t>(i)] = vals(i);
    }
    return out;
}

/// Piecewise-constant image of a discrete state under the isometric
/// embedding: amplitude psi_rho lands on the cell
/// [a eta (rho - 1/2), a eta (rho + 1/2)] scaled by (a eta)^{-1/2}.
/// Input amplitudes are indexed by the matrix label rho in {0,...,N-1};
/// cells are stored ascending by position.
struct EmbeddedState {
    double cell_width;
    std::vector<Complex> cell_values; // index i <-> centered label i-(N-1)/2

    double left_edge() const {
        const double half_cells = static_cast<double>(cell_values.size()) / 2.0;
        return -cell_width * half_cells;
    }
    /// Value at position q; zero outside the covered span.
    Complex value_at(double q) const {
        const double offset = (q - left_edge()) / cell_width;
        if (offset < 0.0 ||
            offset >= static_cast<double>(cell_values.size()))
            return Complex(0.0, 0.0);
        return cell_values[static_cast<size_t>(offset)];
    }
    double l2_norm() const {
        double s = 0.0;
        for (const Complex& v : cell_values) s += std::norm(v);
        return std::sqrt(s * cell_width);
    }
};

inline EmbeddedState embed_state(const GridSpec& g, const Vector& psi) {
    const long long n = g.dim();
    if (psi.size() != n)
        throw DomainError("embed_state: need exactly N amplitudes");
    const double scale = 1.0 / std::sqrt(g.spacing());
    std::vector<Complex> cells(static_cast<size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const long long label = normalize_mod(i - (n - 1) / 2, n);
        cells[static_cast<size_t>(i)] = psi(label) * scale;
    }
    return EmbeddedState{g.spacing(), std::move(cells)};
}

/// Continuum short-time amplitude
/// (2 pi i hbar eps / m)^{-1/2} exp((i/hbar)[m((q1-q0)/eps)^2/2 - V(q0)] eps)
/// with the branch i^{-1/2} = exp(-i pi/4).
inline Complex continuum_short_time(const GridSpec& g, double q1, double q0,
                                    const PotentialFn& v) {
    const double eps = g.epsilon();
    const double mag =
        std::sqrt(g.mass() / (2.0 * std::numbers::pi * g.hbar() * eps));
    const double dq = (q1 - q0) / eps;
    const double phase =
        (0.5 * g.mass() * dq * dq - v(q0)) * eps / g.hbar() -
        std::numbers::pi / 4.0;
    return std::polar(mag, phase);
}

struct DeviationRecord {
    double magnitude_dev;
    double phase_dev;
};

/// Entrywise comparison of the lattice and continuum short-time
/// propagators at displacement d_rho. The magnitude identity is
/// 1/(a eta sqrt(N)) = sqrt(m/(2 pi hbar eps)); both equal 1/(a sqrt(2 pi)).
/// The phase identity compares (2 pi/N)(L_N(d_rho) - w_rho) against
/// (eps/hbar)(m((a eta d_rho + a eta/2)/eps)^2/2 - V(q_rho)), maximized
/// over the source point rho.
inline DeviationRecord compare_propagators(const GridSpec& g, long long drho,
                                           const PotentialFn& v) {
    const long long n = g.dim();
    const double eps = g.epsilon();
    const double lattice_mag =
        1.0 / (g.spacing() * std::sqrt(static_cast<double>(n)));
    const double continuum_mag =
        std::sqrt(g.mass() / (2.0 * std::numbers::pi * g.hbar() * eps));
    const double magnitude_dev = std::abs(lattice_mag - continuum_mag);

    const PotentialSamples w = sample_potential(g, v);
    const double ldim = lagrangian_dimensionless(drho).to_double();
    const double vel = (g.spacing() * static_cast<double>(drho) +
                        g.spacing() / 2.0) /
                       eps;
    const double kinetic_phase =
        0.5 * g.mass() * vel * vel * eps / g.hbar();
    double phase_dev = 0.0;
    for (long long rc = -(n - 1) / 2; rc <= (n - 1) / 2; ++rc) {
        const double q0 = g.spacing() * static_cast<double>(rc);
        const double lattice_phase = 2.0 * std::numbers::pi /
                                     static_cast<double>(n) *
                                     (ldim - w.at_centered(rc));
        const double continuum_phase =
            kinetic_phase - v(q0) * eps / g.hbar();
        phase_dev = std::max(phase_dev,
                             std::abs(lattice_phase - continuum_phase));
    }
    return DeviationRecord{magnitude_dev, phase_dev};
}

} // namespace weylgrid
