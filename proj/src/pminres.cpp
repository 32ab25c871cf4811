#include "pinvminres/pminres.hpp"

#include <cmath>

#include "pinvminres/minres_cs.hpp"
#include "recurrence.hpp"

namespace pinvminres {

void ReorthBuffer::push(Vector z_scaled, Vector w_scaled) {
    z_.push_back(std::move(z_scaled));
    w_.push_back(std::move(w_scaled));
}

namespace {

// <a, v> for the Hermitian form, a^T v for the CS form
Complex pairing(bool cs, const Vector& a, const Vector& v) {
    return cs ? Complex(a.transpose() * v) : inner(a, v);
}

}  // namespace

Vector ReorthBuffer::apply(const Vector& v) const {
    Vector out = Vector::Zero(v.size());
    for (std::size_t i = 0; i < z_.size(); ++i) out += pairing(cs_, w_[i], v) * z_[i];
    return out;
}

Vector ReorthBuffer::apply_dual(const Vector& v) const {
    Vector out = Vector::Zero(v.size());
    for (std::size_t i = 0; i < z_.size(); ++i) out += pairing(cs_, z_[i], v) * w_[i];
    return out;
}

void ReorthBuffer::reorthogonalize(Vector& z, Vector& w) const {
    if (z_.empty()) return;
    const Vector yz = apply(z);
    const Vector yw = apply_dual(w);
    z -= yz;
    w -= yw;
}

namespace {

SolveReport run_pminres(const LinearOperator& a, const Preconditioner& m, const Vector& b, const SolveOptions& opts,
                        bool cs) {
    using detail::conj_if;
    const Index n = a.dimension();
    require_same_size(n, b.size(), "right-hand side");
    require_same_size(n, m.dimension(), "preconditioner");
    if (!all_finite(b)) throw std::invalid_argument("right-hand side has non-finite entries");
    const std::size_t max_it = detail::resolve_max_iterations(opts, n);
    if (opts.verify_symmetry) {
        if (!probe_symmetry(a))
            throw std::invalid_argument(std::string("operator fails the ") + to_string(a.kind()) + " probe");
        if (!m.probe_psd()) throw std::invalid_argument("preconditioner fails the PSD probe");
    }
    const double mnorm = m.norm_estimate();
    const double eps = opts.zero_tolerance;

    // beta^2 = <z, w> (or <conj z, w>), clamped when roundoff makes it slightly negative
    auto beta_of = [&](const Vector& z, const Vector& w) {
        const double bb = pairing(cs, z, w).real();
        if (bb < -1e-12 * z.squaredNorm() * mnorm) throw SolverError("preconditioner is not positive semi-definite");
        return std::sqrt(std::max(bb, 0.0));
    };
    // w = M z in exact arithmetic, so w vanishing relative to ||M|| ||z|| means beta = 0
    auto w_vanishes = [&](const Vector& z, const Vector& w) { return w.norm() <= eps * mnorm * z.norm(); };

    SolveReport rep;
    rep.kind = a.kind();
    rep.preconditioned = true;
    rep.zero_tolerance = eps;
    rep.x = Vector::Zero(n);
    rep.residual_breve = b;

    Vector z = b;
    Vector w = m.apply(conj_if(cs, z));
    double beta = beta_of(z, w);
    rep.residual = conj_if(cs, w);
    rep.phi0 = beta;
    rep.phi = beta;
    if (beta == 0.0 || w_vanishes(z, w)) {
        rep.termination = Termination::rhs_in_null_space;
        rep.residual = Vector::Zero(n);
        rep.grade = 0;
        rep.phi = 0.0;
        return rep;
    }

    Vector z_prev = Vector::Zero(n);
    double beta_prev = beta;
    Vector d_prev = Vector::Zero(n);
    Vector d_prev2 = Vector::Zero(n);
    ReorthBuffer buffer(cs);
    if (opts.reorthogonalize) buffer.push(z / beta, w / beta);
    double tnorm = 0.0;
    detail::RotationRecurrence rot(beta);
    Vector& x = rep.x;
    Vector& rhat = rep.residual;
    Vector& rbreve = rep.residual_breve;
    rep.termination = Termination::max_iter;

    for (std::size_t t = 1; t <= max_it; ++t) {
        const Vector wt = w / beta;
        const Vector q = a.apply(wt);
        Complex alpha = pairing(cs, wt, q);
        if (!cs) alpha = alpha.real();
        Vector z_next = q - (alpha / beta) * z - (beta / beta_prev) * z_prev;
        Vector w_next = m.apply(conj_if(cs, z_next));
        if (opts.reorthogonalize) buffer.reorthogonalize(z_next, w_next);
        const double beta_next = beta_of(z_next, w_next);

        const double beta_entry = t == 1 ? 0.0 : beta;
        tnorm = std::max(tnorm, std::sqrt(std::norm(alpha) + beta_entry * beta_entry + beta_next * beta_next));
        const double floor = eps * tnorm;
        const detail::RotationStep st = rot.advance(alpha, beta_next, floor);
        const bool beta_zero = beta_next <= floor || w_vanishes(z_next, w_next);

        IterationRecord rec;
        if (opts.record_trace) {
            rec.t = t;
            rec.alpha = alpha;
            rec.beta = beta;
            rec.beta_next = beta_next;
            rec.c_prev = st.c_prev;
            rec.gamma = st.gamma;
            rec.gamma2 = st.gamma2;
            rec.delta2 = st.delta2;
            rec.epsilon = st.epsilon;
            rec.c = st.c;
            rec.s = st.s;
            rec.tau = st.tau;
            rec.phi = st.phi;
            rec.z = z;
            rec.w = w;
        }
        rep.iterations = t;

        if (st.gamma_zero) {
            rep.termination = Termination::gamma_zero;
            rep.grade = t;
            if (opts.record_trace) {
                rec.x = x;
                rec.residual = rhat;
                rec.residual_breve = rbreve;
                rec.d = Vector::Zero(n);
                rep.trace.push_back(std::move(rec));
            }
            break;
        }

        Vector dn = (wt - st.delta2 * d_prev - st.epsilon * d_prev2) / st.gamma2;
        x += st.tau * dn;
        // phi_t / beta_{t+1} = phi_{t-1} / gamma2
        const Complex coef = st.phi_prev * std::conj(st.c) / st.gamma2;
        const double s2 = st.s * st.s;
        rbreve = s2 * rbreve - coef * z_next;
        if (beta_zero)
            rhat.setZero();
        else
            rhat = s2 * rhat - coef * conj_if(cs, w_next);
        if (opts.record_trace) {
            rec.x = x;
            rec.residual = rhat;
            rec.residual_breve = rbreve;
            rec.d = dn;
            rep.trace.push_back(std::move(rec));
        }
        d_prev2 = std::move(d_prev);
        d_prev = std::move(dn);

        if (beta_zero) {
            rep.termination = Termination::beta_zero;
            rep.grade = t;
            break;
        }
        if (opts.residual_target && st.phi <= *opts.residual_target * rep.phi0) {
            rep.termination = Termination::residual_target;
            break;
        }
        if (opts.reorthogonalize) buffer.push(z_next / beta_next, w_next / beta_next);
        z_prev = std::move(z);
        z = std::move(z_next);
        w = std::move(w_next);
        beta_prev = beta;
        beta = beta_next;
    }
    rep.phi = rot.phi();
    rep.tridiagonal_norm = tnorm;
    return rep;
}

}  // namespace

SolveReport psolve_h(const LinearOperator& a, const Preconditioner& m, const Vector& b, const SolveOptions& opts) {
    if (a.kind() != Symmetry::hermitian) throw std::invalid_argument("psolve_h expects a Hermitian operator");
    return run_pminres(a, m, b, opts, false);
}

SolveReport psolve_cs(const LinearOperator& a, const Preconditioner& m, const Vector& b, const SolveOptions& opts) {
    if (a.kind() != Symmetry::complex_symmetric)
        throw std::invalid_argument("psolve_cs expects a complex-symmetric operator");
    return run_pminres(a, m, b, opts, true);
}

Vector plift(const Vector& x, const Vector& r_hat, const Vector& r_breve, Symmetry kind, double zero_tolerance) {
    require_same_size(x.size(), r_hat.size(), "plift r_hat");
    require_same_size(x.size(), r_breve.size(), "plift r_breve");
    if (r_hat.squaredNorm() == 0.0) return x;
    const bool cs = kind == Symmetry::complex_symmetric;
    const Vector rh = detail::conj_if(cs, r_hat);
    const Vector rb = detail::conj_if(cs, r_breve);
    const Complex den = inner(rh, rb);
    if (std::abs(den) <= zero_tolerance * rh.norm() * rb.norm()) throw SolverError("degenerate lifting denominator");
    return x - (inner(rb, x) / den) * rh;
}

Vector plift(const SolveReport& report) {
    if (!report.preconditioned) throw std::invalid_argument("plift expects a preconditioned report");
    if (report.termination == Termination::beta_zero || report.termination == Termination::rhs_in_null_space)
        return report.x;
    return plift(report.x, report.residual, report.residual_breve, report.kind, report.zero_tolerance);
}

SubsolveResult subsolve(const LinearOperator& a, const SubPreconditioner& s, const Vector& b, const SolveOptions& opts,
                        bool dense_reduced) {
    const Index n = a.dimension();
    require_same_size(n, s.rows(), "sub-preconditioner rows");
    require_same_size(n, b.size(), "right-hand side");
    const Index mdim = s.cols();
    if (mdim < 1) throw std::invalid_argument("sub-preconditioner needs at least one column");
    const bool cs = a.kind() == Symmetry::complex_symmetric;
    if (a.kind() == Symmetry::skew_hermitian)
        throw std::invalid_argument("subsolve covers Hermitian and complex-symmetric operators");

    // S^H y for Hermitian, S^T y for CS
    auto left = [&s, cs](const Vector& y) { return cs ? s.apply_transpose(y) : s.apply_adjoint(y); };
    FunctionOperator reduced_op(mdim, a.kind(), [&](const Vector& v) { return Vector(left(a.apply(s.apply(v)))); });
    std::unique_ptr<DenseOperator> dense_op;
    if (dense_reduced) {
        if (mdim > 2048) throw std::invalid_argument("dense reduced operator limited to 2048 columns");
        dense_op = std::make_unique<DenseOperator>(to_dense(reduced_op), a.kind());
    }
    const LinearOperator& op = dense_op ? static_cast<const LinearOperator&>(*dense_op) : reduced_op;
    const Vector bt = left(b);

    SubsolveResult out;
    out.reduced = cs ? solve_cs(op, bt, opts) : solve(op, bt, opts);
    const SolveReport& red = out.reduced;

    auto map_residual = [&s, cs](const Vector& r) { return cs ? s.apply_conjugate(r) : s.apply(r); };
    SolveReport& mp = out.mapped;
    mp.kind = red.kind;
    mp.preconditioned = true;
    mp.termination = red.termination;
    mp.iterations = red.iterations;
    mp.grade = red.grade;
    mp.phi = red.phi;
    mp.phi0 = red.phi0;
    mp.tridiagonal_norm = red.tridiagonal_norm;
    mp.zero_tolerance = red.zero_tolerance;
    mp.x = s.apply(red.x);
    mp.residual = red.termination == Termination::beta_zero ? Vector::Zero(n) : map_residual(red.residual);
    for (const IterationRecord& rr : red.trace) {
        IterationRecord rec = rr;
        rec.x = s.apply(rr.x);
        rec.residual = map_residual(rr.residual);
        rec.w = rr.beta * s.apply(detail::conj_if(cs, rr.v));
        rec.d = s.apply(rr.d);
        mp.trace.push_back(std::move(rec));
    }
    if (!mp.trace.empty() && red.termination == Termination::beta_zero) mp.trace.back().residual.setZero();
    out.lifted = s.apply(lift(red));
    return out;
}

}  // namespace pinvminres
