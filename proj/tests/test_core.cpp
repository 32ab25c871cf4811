#include <doctest.h>

#include <cmath>

#include "pinvminres/operator.hpp"
#include "pinvminres/random.hpp"
#include "support.hpp"

using namespace pinvminres;

TEST_CASE("kronecker identity factor leaves vectors unchanged") {
    const KroneckerOperator op(RealMatrix::Identity(2, 2));
    const Vector v = testref::cvec({{1, 2}, {-3, 0.5}, {0, 1}, {4, 0}});
    CHECK((op.apply(v) - v).norm() == 0.0);
}

TEST_CASE("kronecker apply of a 2x2 factor") {
    RealMatrix z(2, 2);
    z << 1, 2, 2, 1;
    RealMatrix x = RealMatrix::Zero(2, 2);
    x(0, 0) = 1;
    const KroneckerOperator op(z);
    const Vector got = op.apply(Eigen::Map<const RealVector>(x.data(), 4).cast<Complex>());
    // vec([[1,2],[2,4]]) column-major
    const Vector want = testref::cvec({1, 2, 2, 4});
    CHECK((got - want).norm() < 1e-15);
}

TEST_CASE("kronecker apply matches the explicit product for small random factors") {
    CounterRng rng(3, 7);
    for (Index n = 1; n <= 8; ++n) {
        RealMatrix z = rng.normal_matrix(n, n);
        z = (z + z.transpose()).eval();
        const RealMatrix dense = testref::kron(z, z);
        const KroneckerOperator op(z);
        const Vector v = rng.complex_normal_vector(n * n);
        const Vector want = dense.cast<Complex>() * v;
        CHECK((op.apply(v) - want).norm() <= 1e-12 * std::max(1.0, want.norm()));
    }
}

TEST_CASE("gaussian blur toeplitz entries") {
    const RealMatrix z = gaussian_blur_toeplitz(5, 3, 1.0);
    RealVector e3 = RealVector::Zero(5);
    e3(2) = 1;
    const RealVector col = z * e3;
    CHECK(col(0) == 0.0);
    CHECK(col(1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(col(2) == 1.0);
    CHECK(col(3) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(col(4) == 0.0);
}

TEST_CASE("gaussian blur toeplitz is exactly symmetric and banded") {
    for (bool normalize : {false, true}) {
        const RealMatrix z = gaussian_blur_toeplitz(40, 9, 2.0, normalize);
        CHECK((z - z.transpose()).cwiseAbs().maxCoeff() == 0.0);
        for (Index j = 0; j < 40; ++j)
            for (Index k = 0; k < 40; ++k) {
                if (std::abs(j - k) > 4) CHECK(z(j, k) == 0.0);
                else CHECK(z(j, k) > 0.0);
            }
        if (!normalize) CHECK(z.maxCoeff() == 1.0);
    }
    CHECK_THROWS_AS(gaussian_blur_toeplitz(5, 4, 1.0), std::invalid_argument);
}

TEST_CASE("probe_symmetry on the declared kinds") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1;
    CHECK(probe_symmetry(DenseOperator(d, Symmetry::hermitian)));

    Matrix cs(2, 2);
    cs << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(-1, 0);
    CHECK(probe_symmetry(DenseOperator(cs, Symmetry::complex_symmetric)));
    CHECK_FALSE(probe_symmetry(DenseOperator(cs, Symmetry::hermitian)));

    Matrix h(2, 2);
    h << Complex(0, 0), Complex(0, 1), Complex(0, -1), Complex(0, 0);
    CHECK(probe_symmetry(DenseOperator(h, Symmetry::hermitian)));
    CHECK_FALSE(probe_symmetry(DenseOperator(h, Symmetry::skew_hermitian)));

    Matrix s(2, 2);
    s << 0, 1, -1, 0;
    CHECK(probe_symmetry(DenseOperator(s, Symmetry::skew_hermitian)));
}

TEST_CASE("inner product is conjugate linear in the first argument") {
    CounterRng rng(11);
    for (int k = 0; k < 20; ++k) {
        const Vector x = rng.complex_normal_vector(7);
        const Vector y = rng.complex_normal_vector(7);
        const Complex a(rng.normal(), rng.normal());
        const Complex lhs = inner(Vector(a * x), y);
        const Complex rhs = std::conj(a) * inner(x, y);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("operators reject wrong sizes and non-finite output") {
    const DenseOperator op(Matrix::Identity(3, 3), Symmetry::hermitian);
    CHECK_THROWS(op.apply(Vector::Ones(2)));
    const FunctionOperator bad(2, Symmetry::hermitian, [](const Vector& v) {
        Vector out = v;
        out(0) = Complex(std::nan(""), 0);
        return out;
    });
    CHECK_THROWS_AS(bad.apply(Vector::Ones(2)), SolverError);
}

TEST_CASE("counter rng is reproducible and streams differ") {
    CounterRng a(5, 1), b(5, 1), c(5, 2);
    const RealVector va = a.normal_vector(16);
    CHECK((va - b.normal_vector(16)).norm() == 0.0);
    CHECK((va - c.normal_vector(16)).norm() > 0.0);
    const Matrix u = CounterRng(9).unitary(6);
    CHECK((u.adjoint() * u - Matrix::Identity(6, 6)).norm() < 1e-13);
}

TEST_CASE("to_dense reproduces a dense operator") {
    CounterRng rng(2);
    const Matrix a = rng.complex_normal_matrix(5, 5);
    const Matrix h = a + a.adjoint();
    CHECK((to_dense(DenseOperator(h, Symmetry::hermitian)) - h).norm() < 1e-14);
}
