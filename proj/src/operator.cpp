#include "pinvminres/operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pinvminres/random.hpp"

namespace pinvminres {

const char* to_string(Symmetry kind) {
    switch (kind) {
        case Symmetry::hermitian: return "hermitian";
        case Symmetry::skew_hermitian: return "skew_hermitian";
        case Symmetry::complex_symmetric: return "complex_symmetric";
    }
    return "?";
}

Symmetry parse_symmetry(const std::string& name) {
    if (name == "hermitian" || name == "h") return Symmetry::hermitian;
    if (name == "skew_hermitian" || name == "skew") return Symmetry::skew_hermitian;
    if (name == "complex_symmetric" || name == "cs") return Symmetry::complex_symmetric;
    throw std::invalid_argument("unknown symmetry kind '" + name + "'");
}

void require_same_size(Index expected, Index got, const char* what) {
    if (expected != got)
        throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(expected) +
                                    ", got " + std::to_string(got));
}

Vector LinearOperator::apply(const Vector& v) const {
    require_same_size(dimension_, v.size(), "operator apply");
    Vector out = do_apply(v);
    if (out.size() != dimension_) throw SolverError("operator returned a vector of the wrong length");
    if (!all_finite(out)) throw SolverError("operator produced non-finite output");
    return out;
}

Vector LinearOperator::apply_conjugate(const Vector& v) const {
    require_same_size(dimension_, v.size(), "operator conjugate apply");
    Vector out = do_apply_conjugate(v);
    if (!all_finite(out)) throw SolverError("operator produced non-finite output");
    return out;
}

Vector LinearOperator::do_apply_conjugate(const Vector& v) const {
    return do_apply(v.conjugate()).conjugate();
}

Vector LinearOperator::apply_adjoint(const Vector& v) const {
    switch (kind_) {
        case Symmetry::hermitian: return apply(v);
        case Symmetry::skew_hermitian: return -apply(v);
        case Symmetry::complex_symmetric: return apply_conjugate(v);
    }
    return apply(v);
}

DenseOperator::DenseOperator(Matrix a, Symmetry kind) : LinearOperator(a.rows(), kind), a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw std::invalid_argument("DenseOperator needs a square matrix");
}

Vector DenseOperator::do_apply(const Vector& v) const { return a_ * v; }

Vector DenseOperator::do_apply_conjugate(const Vector& v) const { return a_.conjugate() * v; }

FunctionOperator::FunctionOperator(Index dimension, Symmetry kind, Fn fn)
    : LinearOperator(dimension, kind), fn_(std::move(fn)) {}

Vector FunctionOperator::do_apply(const Vector& v) const { return fn_(v); }

ScaledOperator::ScaledOperator(OperatorPtr base, Complex scale, Symmetry kind)
    : LinearOperator(base->dimension(), kind), base_(std::move(base)), scale_(scale) {}

Vector ScaledOperator::do_apply(const Vector& v) const { return scale_ * base_->apply(v); }

KroneckerOperator::KroneckerOperator(RealMatrix z)
    : LinearOperator(z.rows() * z.rows(), Symmetry::hermitian), z_(std::move(z)) {
    if (z_.rows() != z_.cols()) throw std::invalid_argument("Kronecker factor must be square");
    if ((z_ - z_.transpose()).norm() > 1e-12 * z_.norm())
        throw std::invalid_argument("Kronecker factor must be symmetric");
}

Vector KroneckerOperator::do_apply(const Vector& v) const {
    const Index n = z_.rows();
    Eigen::Map<const Matrix> x(v.data(), n, n);
    const Matrix zc = z_.cast<Complex>();
    Matrix y = zc * x * zc.transpose();
    return Eigen::Map<const Vector>(y.data(), n * n);
}

// real factor: conj(A) = A
Vector KroneckerOperator::do_apply_conjugate(const Vector& v) const { return do_apply(v); }

RealMatrix gaussian_blur_toeplitz(Index n, Index bandwidth, double sigma, bool normalize) {
    if (n < 1) throw std::invalid_argument("blur size must be positive");
    if (bandwidth < 1 || bandwidth % 2 == 0) throw std::invalid_argument("blur bandwidth must be odd and positive");
    if (!(sigma > 0)) throw std::invalid_argument("blur sigma must be positive");
    const Index half = (bandwidth - 1) / 2;
    RealMatrix z = RealMatrix::Zero(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index k = std::max<Index>(0, j - half); k <= std::min<Index>(n - 1, j + half); ++k) {
            const double off = static_cast<double>(j - k);
            z(j, k) = std::exp(-off * off / (2.0 * sigma * sigma));
        }
    if (normalize) {
        // symmetric scaling keeps the factor symmetric
        const RealVector rs = z.rowwise().sum().cwiseSqrt().cwiseInverse();
        z = rs.asDiagonal() * z * rs.asDiagonal();
        z = (0.5 * (z + z.transpose())).eval();  // scaling order leaves last-bit asymmetry
    }
    return z;
}

bool probe_symmetry(const LinearOperator& op, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("probe_symmetry needs at least one trial");
    CounterRng rng(seed, 0x5e1f);
    const Index d = op.dimension();
    for (int k = 0; k < trials; ++k) {
        const Vector u = rng.complex_normal_vector(d);
        const Vector v = rng.complex_normal_vector(d);
        const Vector av = op.apply(v);
        Complex lhs;
        Complex rhs;
        double scale;
        if (op.kind() == Symmetry::complex_symmetric) {
            const Vector au = op.apply(u);
            lhs = u.transpose() * av;
            rhs = v.transpose() * au;
            scale = u.norm() * av.norm() + v.norm() * au.norm();
        } else {
            const Vector au = op.apply(u);
            lhs = inner(u, av);
            rhs = inner(au, v);
            if (op.kind() == Symmetry::skew_hermitian) rhs = -rhs;
            scale = u.norm() * av.norm() + au.norm() * v.norm();
        }
        if (std::abs(lhs - rhs) > 1e-10 * scale) return false;
    }
    return true;
}

Matrix to_dense(const LinearOperator& op) {
    const Index d = op.dimension();
    if (d > 4096) throw std::invalid_argument("to_dense is limited to dimension 4096");
    Matrix a(d, d);
    Vector e = Vector::Zero(d);
    for (Index j = 0; j < d; ++j) {
        e(j) = 1.0;
        a.col(j) = op.apply(e);
        e(j) = 0.0;
    }
    return a;
}

}  // namespace pinvminres
