#include "pinvminres/precon_factory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pinvminres/oracle.hpp"
#include "pinvminres/random.hpp"

namespace pinvminres {

namespace {

constexpr double perpendicular_threshold = 1e-6;
constexpr double weight_floor = 1e-3;
constexpr int max_rejections = 200;

Matrix left_singular_vectors(const Matrix& m) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU);
    return svd.matrixU();
}

// eigen/Takagi vectors of A ordered by the given key, completed to a unitary basis
Matrix ordered_basis(const Matrix& a, Symmetry kind, bool positive_first) {
    const Index d = a.rows();
    if (kind == Symmetry::complex_symmetric) {
        if (positive_first) throw std::invalid_argument("eigen_positive needs a Hermitian operator");
        const OracleDecomposition t = takagi(a);
        Matrix out(d, d);
        out << t.u, t.complement;
        return out;
    }
    const Matrix h = kind == Symmetry::skew_hermitian ? Matrix(Complex(0, 1) * a) : a;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    const RealVector& ev = eig.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
        if (positive_first) return ev(i) > ev(j);
        return std::abs(ev(i)) > std::abs(ev(j));
    });
    Matrix out(d, d);
    for (Index k = 0; k < d; ++k) out.col(k) = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    return out;
}

Matrix operator_eigenvectors(const Matrix& a, Symmetry kind) {
    if (kind == Symmetry::complex_symmetric) return takagi(a).u;
    if (kind == Symmetry::skew_hermitian) return hermitian_eigen(Complex(0, 1) * a).u;
    return hermitian_eigen(a).u;
}

Matrix random_psd_basis(Index d, CounterRng& rng, const Matrix* a, Symmetry kind) {
    const Matrix u = a ? operator_eigenvectors(*a, kind) : Matrix(d, 0);
    for (int attempt = 0; attempt < max_rejections; ++attempt) {
        const Matrix g = rng.complex_normal_matrix(d, d);
        const Matrix p = left_singular_vectors(g * g.adjoint());
        if (u.cols() == 0 || (p.adjoint() * u).cwiseAbs().minCoeff() >= perpendicular_threshold) return p;
    }
    throw std::runtime_error("could not draw a basis avoiding the eigenvectors of A");
}

}  // namespace

const char* to_string(BasisSource s) {
    switch (s) {
        case BasisSource::random_psd_svd: return "random_psd_svd";
        case BasisSource::range_preserved: return "range_preserved";
        case BasisSource::eigen_positive: return "eigen_positive";
        case BasisSource::sketch: return "sketch";
        case BasisSource::eigen_all: return "eigen_all";
    }
    return "unknown";
}

BasisSource parse_basis_source(const std::string& s) {
    for (BasisSource v : {BasisSource::random_psd_svd, BasisSource::range_preserved, BasisSource::eigen_positive,
                          BasisSource::sketch, BasisSource::eigen_all})
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown basis source '" + s + "'");
}

std::vector<RankFamilyMember> make_rank_family(const RankFamilySpec& spec, const Matrix* a) {
    const Index d = spec.dimension;
    if (d < 1) throw std::invalid_argument("rank family needs a positive dimension");
    if (a && (a->rows() != d || a->cols() != d)) throw std::invalid_argument("operator does not match the dimension");
    if (!a && spec.source != BasisSource::sketch && spec.source != BasisSource::random_psd_svd)
        throw std::invalid_argument(std::string("basis source ") + to_string(spec.source) + " needs a dense operator");

    CounterRng rng(spec.seed, 11);
    RealVector sigma(d);
    for (Index i = 0; i < d; ++i) {
        double s = 0.0;
        while (s < weight_floor) s = std::abs(rng.normal());
        sigma(i) = s;
    }

    Matrix basis;
    switch (spec.source) {
        case BasisSource::random_psd_svd:
            basis = random_psd_basis(d, rng, a, spec.kind);
            break;
        case BasisSource::range_preserved: {
            const Matrix c = rng.complex_normal_matrix(d, d);
            const Matrix lhs = spec.kind == Symmetry::complex_symmetric ? Matrix(a->conjugate()) : *a;
            basis = left_singular_vectors(lhs * c);
            break;
        }
        case BasisSource::eigen_positive:
            if (spec.kind != Symmetry::hermitian) throw std::invalid_argument("eigen_positive needs a Hermitian operator");
            basis = ordered_basis(*a, spec.kind, true);
            break;
        case BasisSource::sketch: {
            Eigen::HouseholderQR<RealMatrix> qr(rng.normal_matrix(d, d));
            const RealMatrix q = qr.householderQ() * RealMatrix::Identity(d, d);
            basis = q.cast<Complex>();
            break;
        }
        case BasisSource::eigen_all:
            basis = ordered_basis(*a, spec.kind, false);
            break;
    }

    std::vector<Index> ranks = spec.ranks;
    if (ranks.empty()) {
        ranks.resize(static_cast<std::size_t>(d));
        std::iota(ranks.begin(), ranks.end(), Index(1));
    }
    std::vector<RankFamilyMember> out;
    out.reserve(ranks.size());
    for (Index i : ranks) {
        if (i < 1 || i > d) throw std::invalid_argument("rank out of range");
        Matrix p = basis.leftCols(i);
        RealVector w = sigma.head(i);
        Preconditioner m = Preconditioner::from_factors(p, w);
        out.push_back(RankFamilyMember{i, std::move(p), std::move(w), std::move(m)});
    }
    return out;
}

NpcProblem make_npc_problem(Index d, Index rank, std::uint64_t seed) {
    if (rank < 2 || rank > d) throw std::invalid_argument("NPC problem needs 2 <= rank <= d");
    CounterRng rng(seed, 21);
    const Matrix u = rng.unitary(d);
    const Index rp = rank - 1;
    NpcProblem out;
    out.positive_eigenvalues.resize(rp);
    for (Index i = 0; i < rp; ++i)
        out.positive_eigenvalues(i) = rp == 1 ? 1.0 : std::pow(10.0, 2.0 * static_cast<double>(i) / (rp - 1));
    RealVector lambda = RealVector::Zero(d);
    lambda.head(rp) = out.positive_eigenvalues;
    lambda(rp) = -1.0;
    out.u_plus = u.leftCols(rp);
    out.u_minus = u.col(rp);
    out.a = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
    out.a = 0.5 * (out.a + out.a.adjoint());
    out.b = Vector::Ones(d);
    return out;
}

std::vector<NamedPreconditioner> make_npc_suite(const NpcProblem& problem, std::uint64_t seed) {
    const Index d = problem.a.rows();
    const Index rp = problem.u_plus.cols();
    const Index r = rp + 1;
    CounterRng rng(seed, 31);

    const RealMatrix s1 = rng.normal_matrix(d, r);
    RealVector lambda(d);
    for (Index i = 0; i < d; ++i) {
        double s = 0.0;
        while (s < weight_floor) s = std::abs(rng.normal());
        lambda(i) = s;
    }
    const Matrix v = rng.unitary(d);
    Matrix p3(d, r);
    p3 << problem.u_plus, problem.u_minus;

    std::vector<NamedPreconditioner> out;
    out.push_back({"M1", Preconditioner::factored(std::make_shared<DenseSubPreconditioner>(s1.cast<Complex>()))});
    out.push_back({"M2", Preconditioner::from_factors(v, lambda)});
    out.push_back({"M3", Preconditioner::from_factors(p3, lambda.head(r))});
    out.push_back({"M4", Preconditioner::from_factors(problem.u_plus, lambda.head(rp))});
    return out;
}

std::vector<ErrorRow> run_error_sweep(const Matrix& a, const Vector& b, const std::vector<RankFamilyMember>& family,
                                      Symmetry kind, const SolveOptions& opts) {
    if (kind == Symmetry::skew_hermitian) throw std::invalid_argument("error sweep covers Hermitian and CS operators");
    const bool cs = kind == Symmetry::complex_symmetric;
    const DenseOperator op(a, kind);
    const Vector x_ref = pinv(a) * b;
    const Vector r_ref = b - a * x_ref;
    const double xn = std::max(x_ref.norm(), 1e-300);
    const double rn = r_ref.norm() > 1e-12 * b.norm() ? r_ref.norm() : std::max(b.norm(), 1e-300);

    std::vector<ErrorRow> rows;
    rows.reserve(family.size());
    for (const RankFamilyMember& member : family) {
        const SolveReport rep = cs ? psolve_cs(op, member.m, b, opts) : psolve_h(op, member.m, b, opts);
        Vector lifted;
        try {
            lifted = plift(rep);
        } catch (const SolverError&) {
            lifted = rep.x;
        }
        const Vector r = b - a * rep.x;
        const Vector rhat = cs ? Vector(member.m.apply(r.conjugate()).conjugate()) : member.m.apply(r);
        const Vector x_p = lifted_problem_pinv(a, member.p, b, kind);
        const RankAssumptions ra = check_rank_assumptions(a, member.p, kind);

        ErrorRow row;
        row.rank = member.rank;
        row.e_x = (rep.x - x_ref).norm() / xn;
        row.e_x_hat = (lifted - x_ref).norm() / xn;
        row.e_r = (r - r_ref).norm() / rn;
        row.e_p = (lifted - x_p).norm() / std::max(x_p.norm(), 1e-300);
        row.norm_mr = rhat.norm();
        row.norm_amr = cs ? (a.conjugate() * rhat).norm() : (a * rhat).norm();
        row.a_holds = ra.a_holds;
        row.b_holds = ra.b_holds;
        row.termination = rep.termination;
        row.iterations = rep.iterations;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace pinvminres
