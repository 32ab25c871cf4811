#include "pinvminres/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pinvminres {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double breakdown_tolerance = 1e-14;

BaselineReport tsvd_from_svd(const Eigen::BDCSVD<Matrix>& svd, const Matrix& a, const Vector& b, Index rank) {
    BaselineReport rep;
    const RealVector& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    Index numerical = 0;
    while (numerical < sv.size() && sv(numerical) > 1e-10 * top) ++numerical;
    if (rank > numerical) {
        rep.warning = "requested rank " + std::to_string(rank) + " exceeds numerical rank " + std::to_string(numerical) +
                      "; clamped";
        rank = numerical;
    }
    rep.rank = rank;
    rep.x = Vector::Zero(a.cols());
    if (rank > 0) {
        const Vector coef = svd.matrixU().leftCols(rank).adjoint() * b;
        const Vector scaled = coef.cwiseQuotient(sv.head(rank).cast<Complex>());
        rep.x = svd.matrixV().leftCols(rank) * scaled;
    }
    rep.residual_norm = (b - a * rep.x).norm();
    return rep;
}

}  // namespace

BaselineReport lsqr(const LinearOperator& a, const Vector& b, std::size_t max_iter) {
    const auto start = Clock::now();
    require_same_size(a.dimension(), b.size(), "right-hand side");
    BaselineReport rep;
    rep.x = Vector::Zero(b.size());

    double beta = b.norm();
    rep.residual_history.push_back(beta);
    if (beta == 0.0) {
        rep.normal_history.push_back(0.0);
        rep.seconds = seconds_since(start);
        return rep;
    }
    Vector u = b / beta;
    Vector v = a.apply_adjoint(u);
    double alpha = v.norm();
    rep.normal_history.push_back(alpha * beta);
    if (alpha == 0.0) {
        rep.residual_norm = beta;
        rep.seconds = seconds_since(start);
        return rep;
    }
    v /= alpha;
    Vector w = v;
    double phibar = beta;
    double rhobar = alpha;
    double anorm2 = alpha * alpha;

    for (std::size_t k = 1; k <= max_iter; ++k) {
        u = a.apply(v) - alpha * u;
        beta = u.norm();
        anorm2 += beta * beta;
        const bool beta_zero = beta <= breakdown_tolerance * std::sqrt(anorm2);
        bool alpha_zero = true;
        if (!beta_zero) {
            u /= beta;
            v = a.apply_adjoint(u) - beta * v;
            alpha = v.norm();
            anorm2 += alpha * alpha;
            alpha_zero = alpha <= breakdown_tolerance * std::sqrt(anorm2);
            if (!alpha_zero) v /= alpha;
        } else {
            beta = 0.0;
        }
        if (alpha_zero) alpha = 0.0;

        const double rho = std::hypot(rhobar, beta);
        const double c = rhobar / rho;
        const double s = beta / rho;
        const double theta = s * alpha;
        rhobar = -c * alpha;
        const double phi = c * phibar;
        phibar = s * phibar;
        rep.x += (phi / rho) * w;
        w = v - (theta / rho) * w;

        rep.iterations = k;
        rep.residual_history.push_back(phibar);
        rep.normal_history.push_back(phibar * alpha * std::abs(c));
        if (beta_zero || alpha_zero) break;
        // ||A^H r|| / (||A|| ||r||) at roundoff: further steps only amplify noise
        if (alpha * std::abs(c) <= breakdown_tolerance * std::sqrt(anorm2)) break;
    }
    rep.residual_norm = (b - a.apply(rep.x)).norm();
    rep.seconds = seconds_since(start);
    return rep;
}

BaselineReport tsvd_solve(const Matrix& a, const Vector& b, Index rank) {
    const auto start = Clock::now();
    if (a.rows() != b.size()) throw std::invalid_argument("tsvd_solve: dimension mismatch");
    if (rank < 0) throw std::invalid_argument("tsvd_solve: negative rank");
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    BaselineReport rep = tsvd_from_svd(svd, a, b, rank);
    rep.seconds = seconds_since(start);
    return rep;
}

BaselineReport tsvd_solve_threshold(const Matrix& a, const Vector& b, double threshold) {
    const auto start = Clock::now();
    if (a.rows() != b.size()) throw std::invalid_argument("tsvd_solve: dimension mismatch");
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > threshold * top) ++rank;
    BaselineReport rep = tsvd_from_svd(svd, a, b, rank);
    rep.seconds = seconds_since(start);
    return rep;
}

BaselineReport tsvd_kronecker(const RealMatrix& z, const Vector& b, Index r) {
    const auto start = Clock::now();
    const Index n = z.rows();
    if (z.cols() != n) throw std::invalid_argument("tsvd_kronecker: factor must be square");
    require_same_size(n * n, b.size(), "tsvd_kronecker right-hand side");
    if (r < 0) throw std::invalid_argument("tsvd_kronecker: negative rank");
    BaselineReport rep;
    if (r > n) {
        rep.warning = "requested factor rank " + std::to_string(r) + " exceeds " + std::to_string(n) + "; clamped";
        r = n;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(z);
    const RealVector& ev = eig.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return std::abs(ev(i)) > std::abs(ev(j)); });
    const double top = n ? std::abs(ev(order[0])) : 0.0;
    Index kept = 0;
    while (kept < r && std::abs(ev(order[static_cast<std::size_t>(kept)])) > 1e-10 * top) ++kept;
    if (kept < r && rep.warning.empty())
        rep.warning = "factor rank clamped to numerical rank " + std::to_string(kept);

    RealMatrix q(n, kept);
    RealVector lam(kept);
    for (Index k = 0; k < kept; ++k) {
        q.col(k) = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
        lam(k) = ev(order[static_cast<std::size_t>(k)]);
    }
    const RealMatrix scale = lam * lam.transpose();
    const Eigen::Map<const Matrix> bm(b.data(), n, n);
    const Matrix qc = q.cast<Complex>();
    const Matrix core = (qc.transpose() * bm * qc).cwiseQuotient(scale.cast<Complex>());
    const Matrix xm = qc * core * qc.transpose();
    rep.x = Eigen::Map<const Vector>(xm.data(), n * n);
    rep.rank = kept * kept;
    const Matrix zc = z.cast<Complex>();
    rep.residual_norm = (bm - zc * xm * zc.transpose()).norm();
    rep.seconds = seconds_since(start);
    return rep;
}

}  // namespace pinvminres
