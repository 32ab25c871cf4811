#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "pinvminres/types.hpp"

namespace pinvminres {

// Square matrix-free operator with a declared symmetry kind. Implementations
// are immutable once built, so one instance may be shared by concurrent solves.
class LinearOperator {
public:
    LinearOperator(Index dimension, Symmetry kind) : dimension_(dimension), kind_(kind) {}
    virtual ~LinearOperator() = default;

    Index dimension() const { return dimension_; }
    Symmetry kind() const { return kind_; }

    // A v; throws on a size mismatch or non-finite output
    Vector apply(const Vector& v) const;
    // conj(A) v
    Vector apply_conjugate(const Vector& v) const;
    // A^H v, derived from the declared symmetry
    Vector apply_adjoint(const Vector& v) const;

protected:
    virtual Vector do_apply(const Vector& v) const = 0;
    virtual Vector do_apply_conjugate(const Vector& v) const;

private:
    Index dimension_;
    Symmetry kind_;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

class DenseOperator : public LinearOperator {
public:
    DenseOperator(Matrix a, Symmetry kind);
    const Matrix& matrix() const { return a_; }

protected:
    Vector do_apply(const Vector& v) const override;
    Vector do_apply_conjugate(const Vector& v) const override;

private:
    Matrix a_;
};

class FunctionOperator : public LinearOperator {
public:
    using Fn = std::function<Vector(const Vector&)>;
    FunctionOperator(Index dimension, Symmetry kind, Fn fn);

protected:
    Vector do_apply(const Vector& v) const override;

private:
    Fn fn_;
};

// s * A, with the kind chosen by the caller (i * skew is Hermitian)
class ScaledOperator : public LinearOperator {
public:
    ScaledOperator(OperatorPtr base, Complex scale, Symmetry kind);

protected:
    Vector do_apply(const Vector& v) const override;

private:
    OperatorPtr base_;
    Complex scale_;
};

// Z (x) Z acting on vec(X) for an n x n real factor, column-major vec
class KroneckerOperator : public LinearOperator {
public:
    explicit KroneckerOperator(RealMatrix z);
    const RealMatrix& factor() const { return z_; }
    Index side() const { return z_.rows(); }

protected:
    Vector do_apply(const Vector& v) const override;
    Vector do_apply_conjugate(const Vector& v) const override;

private:
    RealMatrix z_;
};

// z_jk = exp(-(j-k)^2 / (2 sigma^2)) for |j-k| <= (w-1)/2, zero-padded boundary.
// normalize applies D^{-1/2} Z D^{-1/2} with D the row sums, so rows sum to about one
// and Z stays symmetric.
RealMatrix gaussian_blur_toeplitz(Index n, Index bandwidth, double sigma, bool normalize = false);

// Checks the identity of the declared kind on random probe pairs.
bool probe_symmetry(const LinearOperator& op, int trials = 10, std::uint64_t seed = 0);

// Explicit matrix of an operator, built column by column (d <= 4096).
Matrix to_dense(const LinearOperator& op);

}  // namespace pinvminres
