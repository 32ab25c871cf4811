#include <doctest.h>

#include "pinvminres/experiments.hpp"
#include "pinvminres/oracle.hpp"
#include "support.hpp"

using namespace pinvminres;
using testref::cvec;

TEST_CASE("pinv of diagonal matrices") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 2;
    Matrix want = Matrix::Zero(2, 2);
    want(0, 0) = 0.5;
    CHECK((pinv(a) - want).norm() < 1e-15);

    for (double s : {0.25, 1.0, 7.0}) {
        Matrix d = Matrix::Zero(2, 2);
        d(0, 0) = s;
        const Vector b = cvec({1, 1});
        const Vector x = pinv(d) * b;
        CHECK((x - cvec({1 / s, 0})).norm() < 1e-14);
        CHECK(((b - d * x) - cvec({0, 1})).norm() < 1e-14);
    }
}

TEST_CASE("pinv agrees with an independent decomposition") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CounterRng rng(seed, 12);
        const Matrix a = random_hermitian(20, 15, rng);
        const Matrix ap = pinv(a);
        CHECK((ap - testref::cod_pinv(a)).norm() <= 1e-10 * ap.norm());
        CHECK(verify_moore_penrose(a, ap).ok);
        CHECK(numerical_rank(a) == 15);
    }
}

TEST_CASE("verify_moore_penrose accepts true pairs and rejects others") {
    CHECK(verify_moore_penrose(Matrix::Identity(3, 3), Matrix::Identity(3, 3)).ok);
    CounterRng rng(4);
    const Matrix a = rng.complex_normal_matrix(6, 6);
    CHECK(verify_moore_penrose(a, pinv(a)).ok);
    CHECK_FALSE(verify_moore_penrose(a, a.transpose()).ok);
}

TEST_CASE("hermitian eigen decomposition of a real PSD matrix") {
    RealMatrix g = CounterRng(3).normal_matrix(5, 3);
    const Matrix a = (g * g.transpose()).cast<Complex>();
    const OracleDecomposition e = hermitian_eigen(a);
    CHECK(e.rank == 3);
    CHECK(e.u.imag().norm() < 1e-12);
    for (Index i = 0; i < e.rank; ++i) CHECK(e.values(i) > 0);
    CHECK((e.u * e.values.cast<Complex>().asDiagonal() * e.u.adjoint() - a).norm() < 1e-10 * a.norm());
}

TEST_CASE("takagi of the rank-one example") {
    Matrix a(2, 2);
    a << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(-1, 0);
    const OracleDecomposition t = takagi(a);
    REQUIRE(t.rank == 1);
    CHECK(t.values(0) == doctest::Approx(2.0).epsilon(1e-12));
    const Vector z = cvec({1, Complex(0, 1)}) / std::sqrt(2.0);
    // u equals z up to a sign (a unit phase e with e^2 = 1 keeps u u^T fixed)
    CHECK(std::abs(std::abs(inner(z, t.u.col(0))) - 1.0) < 1e-12);
    CHECK((t.u * t.values.cast<Complex>().asDiagonal() * t.u.transpose() - a).norm() < 1e-12);
}

TEST_CASE("takagi reconstruction on random complex-symmetric matrices") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CounterRng rng(seed, 13);
        const Matrix a = random_complex_symmetric(12, 12 - static_cast<Index>(seed % 4), rng);
        const OracleDecomposition t = takagi(a);
        CHECK((t.u * t.values.cast<Complex>().asDiagonal() * t.u.transpose() - a).norm() <= 1e-8 * a.norm());
        CHECK((t.u.adjoint() * t.u - Matrix::Identity(t.rank, t.rank)).norm() < 1e-10);
    }
}

TEST_CASE("grade on hand cases") {
    CHECK(grade(Matrix::Identity(4, 4), cvec({1, 2, 3, 4}), Symmetry::hermitian) == 1);
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1;
    CHECK(grade(a, cvec({1, 1}), Symmetry::hermitian) == 2);
}

TEST_CASE("lifted-problem pseudo-inverse") {
    CounterRng rng(5, 5);
    const Matrix a = random_hermitian(20, 15, rng);
    const Vector b = generic_rhs(20, rng);
    const Vector xp = testref::cod_pinv(a) * b;
    CHECK(testref::rel(lifted_problem_pinv(a, Matrix(Matrix::Identity(20, 20)), b, Symmetry::hermitian), xp) < 1e-10);
    const Matrix u = range_basis(a);
    CHECK(testref::rel(lifted_problem_pinv(a, u, b, Symmetry::hermitian), xp) < 1e-10);
}

TEST_CASE("rank assumptions") {
    CounterRng rng(8, 8);
    const Matrix a = random_hermitian(12, 8, rng);
    const Matrix u = range_basis(a);
    auto full = check_rank_assumptions(a, Matrix(rng.unitary(12)), Symmetry::hermitian);
    CHECK(full.a_holds);
    auto exact = check_rank_assumptions(a, u, Symmetry::hermitian);
    CHECK(exact.a_holds);
    CHECK(exact.b_holds);
    auto inside = check_rank_assumptions(a, Matrix(u.leftCols(5)), Symmetry::hermitian);
    CHECK(inside.b_holds);
    CHECK_FALSE(inside.a_holds);
}
