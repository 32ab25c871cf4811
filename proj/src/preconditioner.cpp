#include "pinvminres/preconditioner.hpp"

#include <cmath>

#include "pinvminres/random.hpp"

namespace pinvminres {

namespace {

constexpr double rank_tolerance = 1e-10;
constexpr Index eager_factor_limit = 1024;

// power iteration on v -> M v from a fixed start
double power_norm(const std::function<Vector(const Vector&)>& apply, Index d) {
    CounterRng rng(0x9e37, 0);
    Vector v = rng.complex_normal_vector(d);
    v /= v.norm();
    double est = 0.0;
    for (int k = 0; k < 60; ++k) {
        Vector w = apply(v);
        const double nw = w.norm();
        if (nw == 0.0) return est;
        est = nw;
        v = w / nw;
    }
    return est;
}

}  // namespace

Vector SubPreconditioner::apply(const Vector& x) const {
    require_same_size(cols_, x.size(), "sub-preconditioner apply");
    return do_apply(x);
}

Vector SubPreconditioner::apply_adjoint(const Vector& v) const {
    require_same_size(rows_, v.size(), "sub-preconditioner adjoint");
    return do_apply_adjoint(v);
}

Vector SubPreconditioner::apply_transpose(const Vector& v) const {
    return apply_adjoint(v.conjugate()).conjugate();
}

Vector SubPreconditioner::apply_conjugate(const Vector& x) const { return apply(x.conjugate()).conjugate(); }

DenseSubPreconditioner::DenseSubPreconditioner(Matrix s) : SubPreconditioner(s.rows(), s.cols()), s_(std::move(s)) {}

Vector DenseSubPreconditioner::do_apply(const Vector& x) const { return s_ * x; }

Vector DenseSubPreconditioner::do_apply_adjoint(const Vector& v) const { return s_.adjoint() * v; }

KroneckerSubPreconditioner::KroneckerSubPreconditioner(RealMatrix c)
    : SubPreconditioner(c.rows() * c.rows(), c.cols() * c.cols()), c_(std::move(c)) {}

Vector KroneckerSubPreconditioner::do_apply(const Vector& x) const {
    const Index n = c_.rows();
    const Index r = c_.cols();
    Eigen::Map<const Matrix> xm(x.data(), r, r);
    const Matrix cc = c_.cast<Complex>();
    Matrix y = cc * xm * cc.transpose();
    return Eigen::Map<const Vector>(y.data(), n * n);
}

Vector KroneckerSubPreconditioner::do_apply_adjoint(const Vector& v) const {
    const Index n = c_.rows();
    const Index r = c_.cols();
    Eigen::Map<const Matrix> vm(v.data(), n, n);
    const Matrix cc = c_.cast<Complex>();
    Matrix y = cc.transpose() * vm * cc;
    return Eigen::Map<const Vector>(y.data(), r * r);
}

Preconditioner Preconditioner::identity(Index d) {
    Preconditioner m;
    m.dimension_ = d;
    m.apply_ = [](const Vector& v) { return v; };
    m.identity_ = true;
    m.p_ = Matrix::Identity(d, d);
    m.lambda_ = RealVector::Ones(d);
    m.sub_ = std::make_shared<DenseSubPreconditioner>(Matrix::Identity(d, d));
    m.norm_ = 1.0;
    return m;
}

Preconditioner Preconditioner::dense(Matrix mat) {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("preconditioner matrix must be square");
    Preconditioner m;
    m.dimension_ = mat.rows();
    const Matrix herm = 0.5 * (mat + mat.adjoint());
    m.dense_ = herm;
    auto shared = std::make_shared<const Matrix>(herm);
    m.apply_ = [shared](const Vector& v) { return Vector(*shared * v); };
    if (m.dimension_ <= eager_factor_limit) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(herm);
        const RealVector& ev = eig.eigenvalues();
        const double top = ev.cwiseAbs().maxCoeff();
        std::vector<Index> keep;
        for (Index i = ev.size() - 1; i >= 0; --i)
            if (ev(i) > rank_tolerance * top) keep.push_back(i);
        Matrix p(m.dimension_, static_cast<Index>(keep.size()));
        RealVector lam(static_cast<Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) {
            p.col(static_cast<Index>(k)) = eig.eigenvectors().col(keep[k]);
            lam(static_cast<Index>(k)) = ev(keep[k]);
        }
        m.norm_ = top > 0 ? top : 1.0;
        m.sub_ = std::make_shared<DenseSubPreconditioner>(p * lam.cwiseSqrt().asDiagonal());
        m.p_ = std::move(p);
        m.lambda_ = std::move(lam);
    } else {
        m.norm_ = power_norm(m.apply_, m.dimension_);
    }
    return m;
}

Preconditioner Preconditioner::factored(SubPreconditionerPtr s) {
    Preconditioner m;
    m.dimension_ = s->rows();
    m.apply_ = [s](const Vector& v) { return s->apply(s->apply_adjoint(v)); };
    m.sub_ = s;
    const auto* dense = dynamic_cast<const DenseSubPreconditioner*>(s.get());
    if (dense && m.dimension_ <= eager_factor_limit) {
        Eigen::BDCSVD<Matrix> svd(dense->matrix(), Eigen::ComputeThinU);
        const RealVector& sv = svd.singularValues();
        const double top = sv.size() ? sv(0) : 0.0;
        Index r = 0;
        while (r < sv.size() && sv(r) > rank_tolerance * top) ++r;
        m.p_ = svd.matrixU().leftCols(r);
        m.lambda_ = sv.head(r).cwiseAbs2();
        m.norm_ = top > 0 ? top * top : 1.0;
    } else {
        const double est = power_norm(m.apply_, m.dimension_);
        m.norm_ = est > 0 ? est : 1.0;
    }
    return m;
}

Preconditioner Preconditioner::from_factors(Matrix p, RealVector lambda) {
    if (p.cols() != lambda.size()) throw std::invalid_argument("factor column count must match eigenvalue count");
    if ((lambda.array() <= 0).any()) throw std::invalid_argument("factor eigenvalues must be positive");
    Preconditioner m;
    m.dimension_ = p.rows();
    auto s = std::make_shared<DenseSubPreconditioner>(p * lambda.cwiseSqrt().asDiagonal());
    auto pp = std::make_shared<const Matrix>(p);
    auto lam = std::make_shared<const RealVector>(lambda);
    m.apply_ = [pp, lam](const Vector& v) {
        Vector c = pp->adjoint() * v;
        return Vector(*pp * (lam->cast<Complex>().cwiseProduct(c)));
    };
    m.sub_ = std::move(s);
    m.norm_ = lambda.size() ? lambda.maxCoeff() : 1.0;
    m.p_ = std::move(p);
    m.lambda_ = std::move(lambda);
    return m;
}

Vector Preconditioner::apply(const Vector& v) const {
    require_same_size(dimension_, v.size(), "preconditioner apply");
    Vector out = apply_(v);
    if (!all_finite(out)) throw SolverError("preconditioner produced non-finite output");
    return out;
}

std::optional<Index> Preconditioner::rank() const {
    if (lambda_) return lambda_->size();
    return std::nullopt;
}

Matrix Preconditioner::dense_matrix() const {
    if (dense_) return *dense_;
    if (dimension_ > 4096) throw std::invalid_argument("dense preconditioner limited to dimension 4096");
    Matrix m(dimension_, dimension_);
    Vector e = Vector::Zero(dimension_);
    for (Index j = 0; j < dimension_; ++j) {
        e(j) = 1.0;
        m.col(j) = apply(e);
        e(j) = 0.0;
    }
    return m;
}

Vector Preconditioner::apply_pinv(const Vector& v) const {
    require_same_size(dimension_, v.size(), "preconditioner pinv");
    if (p_ && lambda_) {
        Vector c = p_->adjoint() * v;
        return *p_ * (lambda_->cwiseInverse().cast<Complex>().cwiseProduct(c));
    }
    const Matrix m = dense_matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.adjoint()));
    const RealVector& ev = eig.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    RealVector inv(ev.size());
    for (Index i = 0; i < ev.size(); ++i) inv(i) = ev(i) > rank_tolerance * top ? 1.0 / ev(i) : 0.0;
    const Matrix& u = eig.eigenvectors();
    return u * (inv.cast<Complex>().cwiseProduct(u.adjoint() * v));
}

bool Preconditioner::probe_psd(int trials, std::uint64_t seed) const {
    CounterRng rng(seed, 0x95d);
    for (int k = 0; k < trials; ++k) {
        const Vector v = rng.complex_normal_vector(dimension_);
        const Complex q = inner(v, apply(v));
        if (q.real() < -1e-12 * v.squaredNorm() * norm_) return false;
        if (std::abs(q.imag()) > 1e-10 * v.squaredNorm() * norm_) return false;
    }
    return true;
}

}  // namespace pinvminres
