#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "pinvminres/types.hpp"

namespace pinvminres {

// S : C^m -> C^d with M = S S^H.
class SubPreconditioner {
public:
    SubPreconditioner(Index rows, Index cols) : rows_(rows), cols_(cols) {}
    virtual ~SubPreconditioner() = default;

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }

    Vector apply(const Vector& x) const;            // S x
    Vector apply_adjoint(const Vector& v) const;    // S^H v
    Vector apply_transpose(const Vector& v) const;  // S^T v
    Vector apply_conjugate(const Vector& x) const;  // conj(S) x

protected:
    virtual Vector do_apply(const Vector& x) const = 0;
    virtual Vector do_apply_adjoint(const Vector& v) const = 0;

private:
    Index rows_;
    Index cols_;
};

using SubPreconditionerPtr = std::shared_ptr<const SubPreconditioner>;

class DenseSubPreconditioner : public SubPreconditioner {
public:
    explicit DenseSubPreconditioner(Matrix s);
    const Matrix& matrix() const { return s_; }

protected:
    Vector do_apply(const Vector& x) const override;
    Vector do_apply_adjoint(const Vector& v) const override;

private:
    Matrix s_;
};

// C (x) C for a real n x r factor: vec(X) -> vec(C X C^T)
class KroneckerSubPreconditioner : public SubPreconditioner {
public:
    explicit KroneckerSubPreconditioner(RealMatrix c);
    const RealMatrix& factor() const { return c_; }

protected:
    Vector do_apply(const Vector& x) const override;
    Vector do_apply_adjoint(const Vector& v) const override;

private:
    RealMatrix c_;
};

// Positive semi-definite M, optionally carrying a factor S and the economy
// factors M = P diag(lambda) P^H. Immutable after construction.
class Preconditioner {
public:
    static Preconditioner identity(Index d);
    static Preconditioner dense(Matrix m);
    static Preconditioner factored(SubPreconditionerPtr s);
    // M = P diag(lambda) P^H with S = P diag(sqrt(lambda))
    static Preconditioner from_factors(Matrix p, RealVector lambda);

    Index dimension() const { return dimension_; }
    Vector apply(const Vector& v) const;
    const SubPreconditioner* sub() const { return sub_.get(); }
    SubPreconditionerPtr sub_ptr() const { return sub_; }
    std::optional<Index> rank() const;
    const std::optional<Matrix>& range_basis() const { return p_; }
    const std::optional<RealVector>& eigenvalues() const { return lambda_; }
    bool is_identity() const { return identity_; }
    // upper-ish estimate of ||M||_2, used for zero tests
    double norm_estimate() const { return norm_; }

    Matrix dense_matrix() const;
    // M^dagger v; uses the economy factors when present, else a dense pinv
    Vector apply_pinv(const Vector& v) const;

    bool probe_psd(int trials = 10, std::uint64_t seed = 0) const;

private:
    Preconditioner() = default;

    Index dimension_ = 0;
    std::function<Vector(const Vector&)> apply_;
    SubPreconditionerPtr sub_;
    std::optional<Matrix> p_;
    std::optional<RealVector> lambda_;
    std::optional<Matrix> dense_;
    bool identity_ = false;
    double norm_ = 1.0;
};

}  // namespace pinvminres
