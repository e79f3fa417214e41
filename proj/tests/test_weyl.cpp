#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "weylgrid/weyl.hpp"

using namespace weylgrid;

namespace {

Complex omega(long long n) {
    return phase_to_complex(PhaseExponent::omega_power(1, n));
}

} // namespace

TEST_CASE("generators at small N match their definitions") {
    const WeylGenerators g2 = build_generators(2);
    CHECK(max_abs(g2.q.matrix() - (Matrix(2, 2) << 1, 0, 0, -1).finished()) <=
          1e-15);
    CHECK(max_abs(g2.p.matrix() - (Matrix(2, 2) << 0, 1, 1, 0).finished()) <=
          1e-15);

    const Matrix q3 = build_generators(3).q.matrix();
    CHECK(std::abs(q3(0, 0) - Complex(1, 0)) <= 1e-15);
    CHECK(std::abs(q3(1, 1) - omega(3)) <= 1e-15);
    CHECK(std::abs(q3(2, 2) - omega(3) * omega(3)) <= 1e-15);

    CHECK_THROWS_AS(build_generators(1), DomainError);
}

TEST_CASE("DFT diagonalizes the shift: S^-1 P S = Q") {
    const WeylGenerators g = build_generators(5);
    CHECK(max_abs(g.s.matrix().adjoint() * g.p.matrix() * g.s.matrix() -
                  g.q.matrix()) <= 1e-13);
}

TEST_CASE("Weyl commutation relation and operator orders") {
    for (long long n = 2; n <= 32; ++n) {
        const WeylGenerators g = build_generators(n);
        CHECK(max_abs(g.p.matrix() * g.q.matrix() -
                      omega(n) * g.q.matrix() * g.p.matrix()) <= 1e-13);
        Matrix pn = Matrix::Identity(n, n), qn = pn;
        for (long long k = 0; k < n; ++k) {
            pn = pn * g.p.matrix();
            qn = qn * g.q.matrix();
        }
        CHECK(max_abs(pn - Matrix::Identity(n, n)) <= 1e-12);
        CHECK(max_abs(qn - Matrix::Identity(n, n)) <= 1e-12);
    }
}

TEST_CASE("heisenberg_mul follows the commutation bookkeeping") {
    // Q * P needs no commutation; P * Q picks up one omega.
    CHECK(heisenberg_mul(HeisenbergElement(0, 1, 0, 5),
                         HeisenbergElement(0, 0, 1, 5)) ==
          HeisenbergElement(0, 1, 1, 5));
    CHECK(heisenberg_mul(HeisenbergElement(0, 0, 1, 5),
                         HeisenbergElement(0, 1, 0, 5)) ==
          HeisenbergElement(1, 1, 1, 5));
    CHECK(heisenberg_mul(HeisenbergElement(2, 1, 2, 3),
                         HeisenbergElement(1, 2, 1, 3)) ==
          HeisenbergElement(1, 0, 0, 3));
    CHECK_THROWS_AS(heisenberg_mul(HeisenbergElement(0, 0, 0, 3),
                                   HeisenbergElement(0, 0, 0, 5)),
                    DimensionError);
}

TEST_CASE("heisenberg_mul agrees with matrix multiplication") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long long> pick(0, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const HeisenbergElement g1(pick(rng), pick(rng), pick(rng), 3);
        const HeisenbergElement g2(pick(rng), pick(rng), pick(rng), 3);
        const Matrix lhs =
            heisenberg_to_matrix(g1).matrix() * heisenberg_to_matrix(g2).matrix();
        const Matrix rhs =
            heisenberg_to_matrix(heisenberg_mul(g1, g2)).matrix();
        CHECK(max_abs(lhs - rhs) <= 1e-13);
    }
}

TEST_CASE("heisenberg_to_matrix special elements") {
    CHECK(max_abs(heisenberg_to_matrix(HeisenbergElement(0, 0, 0, 4)).matrix() -
                  Matrix::Identity(4, 4)) <= 1e-15);
    // (1,0,0) at N=4 is the central element i*I.
    CHECK(max_abs(heisenberg_to_matrix(HeisenbergElement(1, 0, 0, 4)).matrix() -
                  Complex(0, 1) * Matrix::Identity(4, 4)) <= 1e-15);
    const WeylGenerators g = build_generators(3);
    CHECK(max_abs(heisenberg_to_matrix(HeisenbergElement(0, 1, 1, 3)).matrix() -
                  g.q.matrix() * g.p.matrix()) <= 1e-14);
}

TEST_CASE("finite Heisenberg group has N^3 distinct elements, closed") {
    for (long long n : {2, 3, 5}) {
        std::vector<HeisenbergElement> all;
        for (long long l = 0; l < n; ++l)
            for (long long j = 0; j < n; ++j)
                for (long long s = 0; s < n; ++s) all.emplace_back(l, j, s, n);
        REQUIRE(static_cast<long long>(all.size()) == n * n * n);

        // Distinct as matrices.
        std::vector<Matrix> mats;
        mats.reserve(all.size());
        for (const auto& g : all) mats.push_back(heisenberg_to_matrix(g).matrix());
        for (size_t i = 0; i < mats.size(); ++i)
            for (size_t j = i + 1; j < mats.size(); ++j)
                CHECK(max_abs(mats[i] - mats[j]) > 1e-6);

        // Closed under multiplication, exhaustively.
        std::set<std::tuple<long long, long long, long long>> index;
        for (const auto& g : all) index.insert({g.l, g.j, g.sigma});
        for (const auto& g1 : all)
            for (const auto& g2 : all) {
                const HeisenbergElement prod = heisenberg_mul(g1, g2);
                CHECK(index.count({prod.l, prod.j, prod.sigma}) == 1);
            }
    }
}

TEST_CASE("coset projection is a homomorphism onto Z_N x Z_N") {
    CHECK(coset_of(HeisenbergElement(5, 2, 3, 7)) == PhasePoint(2, 3, 7));
    CHECK(coset_of(HeisenbergElement(0, 0, 0, 7)) == PhasePoint(0, 0, 7));
    std::mt19937 rng(31);
    std::uniform_int_distribution<long long> pick(0, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const HeisenbergElement g1(pick(rng), pick(rng), pick(rng), 7);
        const HeisenbergElement g2(pick(rng), pick(rng), pick(rng), 7);
        const PhasePoint lhs = coset_of(heisenberg_mul(g1, g2));
        const PhasePoint sum(coset_of(g1).j + coset_of(g2).j,
                             coset_of(g1).sigma + coset_of(g2).sigma, 7);
        CHECK(lhs == sum);
    }
}

TEST_CASE("monomial matcher recovers scale and label") {
    const HeisenbergElement g(2, 3, 1, 5);
    const auto match = match_weyl_monomial(heisenberg_to_matrix(g).matrix());
    REQUIRE(match.has_value());
    CHECK(match->label == PhasePoint(3, 1, 5));
    CHECK(std::abs(match->scale -
                   phase_to_complex(PhaseExponent::omega_power(2, 5))) <= 1e-12);
}

TEST_CASE("automorphism_to_sl2 on known operators") {
    for (long long n : {5, 7}) {
        CHECK(automorphism_to_sl2(UnitaryOp(Matrix::Identity(n, n))) ==
              SL2ZN::identity(n));
        CHECK(automorphism_to_sl2(sylvester_dft(n)) == SL2ZN(0, -1, 1, 0, n));
    }
}

TEST_CASE("non-normalizing unitaries are rejected") {
    // A Givens rotation mixes only two basis states and does not permute
    // the Weyl monomials.
    Matrix u = Matrix::Identity(5, 5);
    u(0, 0) = u(1, 1) = std::cos(0.3);
    u(0, 1) = std::sin(0.3);
    u(1, 0) = -std::sin(0.3);
    CHECK_THROWS_AS(automorphism_to_sl2(UnitaryOp(std::move(u))),
                    NotAnAutomorphismError);
}

TEST_CASE("right-action consistency of conjugation and sl2_act") {
    const long long n = 5;
    const UnitaryOp s = sylvester_dft(n);
    const SL2ZN phi = automorphism_to_sl2(s);
    for (long long j = 0; j < n; ++j)
        for (long long sigma = 0; sigma < n; ++sigma) {
            const Matrix m =
                heisenberg_to_matrix(HeisenbergElement(0, j, sigma, n)).matrix();
            const auto match = match_weyl_monomial(
                s.matrix().adjoint() * m * s.matrix());
            REQUIRE(match.has_value());
            CHECK(match->label == sl2_act(PhasePoint(j, sigma, n), phi));
        }
}
