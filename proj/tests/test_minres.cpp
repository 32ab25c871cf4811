#include <doctest.h>

#include "pinvminres/experiments.hpp"
#include "pinvminres/minres.hpp"
#include "pinvminres/minres_cs.hpp"
#include "pinvminres/oracle.hpp"
#include "support.hpp"

using namespace pinvminres;
using testref::cvec;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Matrix rank_one_cs() {
    Matrix a(2, 2);
    a << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(-1, 0);
    return a;
}

}  // namespace

TEST_CASE("identity operator converges in one step") {
    const DenseOperator op(Matrix::Identity(3, 3), Symmetry::hermitian);
    const Vector b = cvec({1, 2, 3});
    const SolveReport rep = solve(op, b);
    CHECK(rep.iterations == 1);
    CHECK((rep.x - b).norm() < 1e-14);
    CHECK(rep.residual.norm() < 1e-14);
}

TEST_CASE("diag(1,0): A x_g = A A^+ b and residual norm one") {
    const Matrix a = diag2(1, 0);
    const SolveReport rep = solve(DenseOperator(a, Symmetry::hermitian), cvec({1, 1}));
    CHECK(((a * rep.x) - cvec({1, 0})).norm() < 1e-12);
    CHECK(rep.residual.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((lift(rep) - cvec({1, 0})).norm() < 1e-12);
}

TEST_CASE("lift on hand cases") {
    CHECK((lift(cvec({1, 7}), cvec({0, 1})) - cvec({1, 0})).norm() < 1e-15);
    CHECK((lift(cvec({1, -4.5}), cvec({0, 1})) - cvec({1, 0})).norm() < 1e-15);
    const Vector x = cvec({1, 0, 2});
    CHECK((lift(x, cvec({0, 3, 0})) - x).norm() == 0.0);
    CHECK((lift(x, Vector::Zero(3)) - x).norm() == 0.0);
}

TEST_CASE("random Hermitian d=20 rank 15, ones rhs: residual and lifted iterate") {
    CounterRng rng(1, 1);
    const Matrix a = random_hermitian(20, 15, rng);
    const Vector b = Vector::Ones(20);
    const Matrix ap = testref::cod_pinv(a);
    SolveOptions o;
    o.reorthogonalize = true;
    const SolveReport rep = solve(DenseOperator(a, Symmetry::hermitian), b, o);
    const Vector r_ref = b - a * (ap * b);
    CHECK((rep.residual - r_ref).norm() <= 1e-8 * b.norm());
    CHECK(testref::rel(lift(rep), ap * b) <= 1e-8);
    CHECK(testref::rel(rep.x, ap * b) > 1e-2);
}

TEST_CASE("grade equals termination iteration on random Hermitian systems") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CounterRng rng(seed, 90);
        const Matrix a = random_hermitian(12, 8, rng);
        const Vector b = generic_rhs(12, rng);
        SolveOptions o;
        o.reorthogonalize = true;
        const SolveReport rep = solve(DenseOperator(a, Symmetry::hermitian), b, o);
        CHECK(rep.iterations == grade(a, b, Symmetry::hermitian));
    }
}

TEST_CASE("skew: real rotation and zero operator") {
    Matrix a(2, 2);
    a << 0, 1, -1, 0;
    // A is invertible with A^{-1} = A^T, so A^+ b = [0, 1]
    const SolveReport rep = solve_skew(DenseOperator(a, Symmetry::skew_hermitian), cvec({1, 0}));
    CHECK((lift(rep) - cvec({0, 1})).norm() < 1e-12);
    CHECK((a * lift(rep) - cvec({1, 0})).norm() < 1e-12);

    const SolveReport z = solve_skew(DenseOperator(Matrix::Zero(2, 2), Symmetry::skew_hermitian), cvec({1, 1}));
    CHECK(lift(z).norm() < 1e-14);
}

TEST_CASE("skew d=10 rank 8: lifted iterate is the pseudo-inverse solution") {
    CounterRng rng(4, 4);
    const Matrix a = random_skew_hermitian(10, 8, rng);
    const Vector b = generic_rhs(10, rng);
    SolveOptions o;
    o.reorthogonalize = true;
    const Vector x = lift(solve_skew(DenseOperator(a, Symmetry::skew_hermitian), b, o));
    const Matrix ap = testref::cod_pinv(a);
    CHECK(testref::rel(x, ap * b) <= 1e-8);
    CHECK(verify_moore_penrose(a, ap).ok);
}

TEST_CASE("cs: identity operator and the rank-one example") {
    const SolveReport id = solve_cs(DenseOperator(Matrix::Identity(2, 2), Symmetry::complex_symmetric), cvec({1, 1}));
    CHECK((id.x - cvec({1, 1})).norm() < 1e-14);
    CHECK(id.residual.norm() < 1e-14);

    const Matrix a = rank_one_cs();
    const Vector b = cvec({1, 0});
    const SolveReport rep = solve_cs(DenseOperator(a, Symmetry::complex_symmetric), b);
    const Matrix ap = testref::cod_pinv(a);
    CHECK((a * rep.x - a * ap * b).norm() < 1e-12);
    CHECK(rep.residual.norm() == doctest::Approx((b - a * ap * b).norm()).epsilon(1e-12));
    CHECK((lift(rep) - cvec({0.25, Complex(0, -0.25)})).norm() < 1e-12);
}

TEST_CASE("lift_cs reduces to lift for real data") {
    const Vector x = cvec({1, -2, 0.5});
    const Vector r = cvec({0.3, 1, -1});
    CHECK((lift_cs(x, r) - lift(x, r)).norm() < 1e-15);
}

TEST_CASE("random complex-symmetric d=20 rank 15: residual matches the oracle") {
    CounterRng rng(2, 1);
    const Matrix a = random_complex_symmetric(20, 15, rng);
    const Vector b = Vector::Ones(20);
    SolveOptions o;
    o.reorthogonalize = true;
    const SolveReport rep = solve_cs(DenseOperator(a, Symmetry::complex_symmetric), b, o);
    const Matrix ap = testref::cod_pinv(a);
    CHECK((rep.residual - (b - a * ap * b)).norm() <= 1e-8 * b.norm());
    CHECK(testref::rel(lift(rep), ap * b) <= 1e-8);
}

TEST_CASE("complex-symmetric sweep over sizes recovers the pseudo-inverse solution") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        CounterRng rng(seed, 77);
        const Index d = 3 + static_cast<Index>(seed % 28);
        const Index r = 1 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(d - 1));
        const Matrix a = random_complex_symmetric(d, r, rng);
        const Vector b = generic_rhs(d, rng);
        SolveOptions o;
        o.reorthogonalize = true;
        const Vector x = lift(solve_cs(DenseOperator(a, Symmetry::complex_symmetric), b, o));
        CHECK(testref::rel(x, testref::cod_pinv(a) * b) <= 1e-8);
    }
}

TEST_CASE("solver input validation") {
    const DenseOperator op(Matrix::Identity(3, 3), Symmetry::hermitian);
    CHECK_THROWS(solve(op, Vector::Ones(2)));
    CHECK_THROWS_AS(solve_skew(op, Vector::Ones(3)), std::invalid_argument);
    const SolveReport zero = solve(op, Vector::Zero(3));
    CHECK(zero.x.norm() == 0.0);
}

TEST_CASE("trace records one entry per iteration") {
    CounterRng rng(8);
    const Matrix a = random_hermitian(9, 6, rng);
    SolveOptions o;
    o.record_trace = true;
    const SolveReport rep = solve(DenseOperator(a, Symmetry::hermitian), generic_rhs(9, rng), o);
    REQUIRE(rep.trace.size() == rep.iterations);
    CHECK((rep.trace.back().x - rep.x).norm() == 0.0);
    for (std::size_t t = 1; t < rep.trace.size(); ++t) CHECK(rep.trace[t].phi <= rep.trace[t - 1].phi * (1 + 1e-12));
}
