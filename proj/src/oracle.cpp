#include "pinvminres/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pinvminres {

namespace {

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& a) { return Eigen::BDCSVD<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV); }

Index count_above(const RealVector& sv, double tol) {
    if (sv.size() == 0) return 0;
    const double top = sv.cwiseAbs().maxCoeff();
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (std::abs(sv(i)) > tol * top) ++r;
    return r;
}

Matrix orthogonal_complement(const Matrix& u, Index d) {
    if (u.cols() == 0) return Matrix::Identity(d, d);
    Eigen::HouseholderQR<Matrix> qr(u);
    const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    return q.rightCols(d - u.cols());
}

}  // namespace

Matrix pinv(const Matrix& a, double tol) {
    if (a.size() == 0) return Matrix(a.cols(), a.rows());
    const auto svd = thin_svd(a);
    const RealVector& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    RealVector inv = RealVector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * top && sv(i) > 0) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

Index numerical_rank(const Matrix& a, double tol) {
    if (a.size() == 0) return 0;
    return count_above(thin_svd(a).singularValues(), tol);
}

Matrix range_basis(const Matrix& a, double tol) {
    if (a.size() == 0) return Matrix(a.rows(), 0);
    const auto svd = thin_svd(a);
    return svd.matrixU().leftCols(count_above(svd.singularValues(), tol));
}

MoorePenroseCheck verify_moore_penrose(const Matrix& a, const Matrix& b, double tol) {
    MoorePenroseCheck c;
    const double na = std::max(a.norm(), 1e-300);
    const double nb = std::max(b.norm(), 1e-300);
    if (a.rows() != b.cols() || a.cols() != b.rows()) return c;
    const Matrix ab = a * b;
    const Matrix ba = b * a;
    c.aba = (ab * a - a).norm() / na;
    c.bab = (ba * b - b).norm() / nb;
    c.ab = (ab.adjoint() - ab).norm() / (na * nb);
    c.ba = (ba.adjoint() - ba).norm() / (na * nb);
    c.ok = c.aba <= tol && c.bab <= tol && c.ab <= tol && c.ba <= tol;
    return c;
}

OracleDecomposition hermitian_eigen(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigen needs a square matrix");
    if ((a - a.adjoint()).norm() > 1e-10 * std::max(a.norm(), 1e-300))
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");
    const Index d = a.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
    const RealVector& ev = eig.eigenvalues();
    const double top = d ? ev.cwiseAbs().maxCoeff() : 0.0;
    std::vector<Index> keep;
    for (Index i = d - 1; i >= 0; --i)
        if (std::abs(ev(i)) > tol * top) keep.push_back(i);
    OracleDecomposition out;
    out.kind = Symmetry::hermitian;
    out.rank = static_cast<Index>(keep.size());
    out.u.resize(d, out.rank);
    out.values.resize(out.rank);
    for (Index k = 0; k < out.rank; ++k) {
        out.u.col(k) = eig.eigenvectors().col(keep[static_cast<std::size_t>(k)]);
        out.values(k) = ev(keep[static_cast<std::size_t>(k)]);
    }
    out.complement = orthogonal_complement(out.u, d);
    return out;
}

// Takagi factors from the real symmetric embedding [[B, C], [C, -B]] of
// A = B + iC: an eigenpair (sigma, [x; y]) with sigma > 0 gives
// A conj(u) = sigma u for u = x + iy, hence A = U Sigma U^T.
OracleDecomposition takagi(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("takagi needs a square matrix");
    if ((a - a.transpose()).norm() > 1e-10 * std::max(a.norm(), 1e-300))
        throw std::invalid_argument("takagi: matrix is not complex-symmetric");
    const Index d = a.rows();
    const RealMatrix b = a.real();
    const RealMatrix c = a.imag();
    RealMatrix h(2 * d, 2 * d);
    h << b, c, c, -b;
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h);
    const RealVector& ev = eig.eigenvalues();
    const double top = d ? ev.cwiseAbs().maxCoeff() : 0.0;
    std::vector<Index> keep;
    for (Index i = 2 * d - 1; i >= 0; --i)
        if (ev(i) > tol * top) keep.push_back(i);
    OracleDecomposition out;
    out.kind = Symmetry::complex_symmetric;
    out.rank = static_cast<Index>(keep.size());
    out.u.resize(d, out.rank);
    out.values.resize(out.rank);
    for (Index k = 0; k < out.rank; ++k) {
        const Index i = keep[static_cast<std::size_t>(k)];
        const auto col = eig.eigenvectors().col(i);
        for (Index j = 0; j < d; ++j) out.u(j, k) = Complex(col(j), col(d + j));
        out.values(k) = ev(i);
    }
    out.complement = orthogonal_complement(out.u, d);
    return out;
}

std::size_t grade(const Matrix& a, const Vector& b, Symmetry kind, double tol) {
    const Index d = a.rows();
    const double bn = b.norm();
    if (bn == 0.0) return 0;
    const double anorm = d ? thin_svd(a).singularValues()(0) : 0.0;
    const bool cs = kind == Symmetry::complex_symmetric;
    std::vector<Vector> basis{b / bn};
    while (static_cast<Index>(basis.size()) < d) {
        const Vector& last = basis.back();
        Vector q = cs ? Vector(a * last.conjugate()) : Vector(a * last);
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& u : basis) q -= inner(u, q) * u;
        const double qn = q.norm();
        if (qn <= tol * anorm) break;
        basis.push_back(q / qn);
    }
    return basis.size();
}

Vector lifted_problem_pinv(const Matrix& a, const Matrix& p, const Vector& b, Symmetry kind) {
    const Matrix pp = p * p.adjoint();
    if (kind == Symmetry::complex_symmetric) {
        const Matrix left = p.conjugate() * p.transpose();
        return pinv(left * a * pp) * b;
    }
    return pinv(pp * a * pp) * b;
}

Matrix preconditioner_range(const Preconditioner& m) {
    if (m.range_basis()) return *m.range_basis();
    return range_basis(m.dense_matrix());
}

Vector lifted_problem_pinv(const Matrix& a, const Preconditioner& m, const Vector& b, Symmetry kind) {
    return lifted_problem_pinv(a, preconditioner_range(m), b, kind);
}

RankAssumptions check_rank_assumptions(const Matrix& a, const Matrix& p, Symmetry kind) {
    const bool cs = kind == Symmetry::complex_symmetric;
    const Matrix u = cs ? takagi(a).u : range_basis(a);
    RankAssumptions out;
    const Matrix pu = cs ? Matrix(p.transpose() * u) : Matrix(p.adjoint() * u);
    const Matrix up = cs ? Matrix(u.transpose() * p) : Matrix(u.adjoint() * p);
    // columns of P and U are orthonormal, so compare against an absolute scale of one
    auto rank_abs = [](const Matrix& m) {
        if (m.size() == 0) return Index(0);
        const RealVector sv = thin_svd(m).singularValues();
        Index r = 0;
        for (Index i = 0; i < sv.size(); ++i)
            if (sv(i) > oracle_rank_tolerance) ++r;
        return r;
    };
    out.a_holds = rank_abs(pu) == u.cols();
    out.b_holds = rank_abs(up) == p.cols();
    return out;
}

RankAssumptions check_rank_assumptions(const Matrix& a, const Preconditioner& m, Symmetry kind) {
    return check_rank_assumptions(a, preconditioner_range(m), kind);
}

}  // namespace pinvminres
