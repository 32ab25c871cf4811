#include "pinvminres/minres.hpp"

#include <cmath>

#include "pinvminres/minres_cs.hpp"
#include "recurrence.hpp"

namespace pinvminres {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::beta_zero: return "beta_zero";
        case Termination::gamma_zero: return "gamma_zero";
        case Termination::residual_target: return "residual_target";
        case Termination::max_iter: return "max_iter";
        case Termination::rhs_in_null_space: return "rhs_in_null_space";
    }
    return "?";
}

namespace detail {

SolveReport run_minres(const LinearOperator& a, const Vector& b, const SolveOptions& opts, bool saunders) {
    const Index n = a.dimension();
    require_same_size(n, b.size(), "right-hand side");
    if (!all_finite(b)) throw std::invalid_argument("right-hand side has non-finite entries");
    const std::size_t max_it = resolve_max_iterations(opts, n);
    if (opts.verify_symmetry && !probe_symmetry(a))
        throw std::invalid_argument(std::string("operator fails the ") + to_string(a.kind()) + " probe");

    SolveReport rep;
    rep.kind = a.kind();
    rep.zero_tolerance = opts.zero_tolerance;
    rep.x = Vector::Zero(n);
    rep.residual = b;
    const double phi0 = b.norm();
    rep.phi0 = phi0;
    rep.phi = phi0;
    if (phi0 == 0.0) {
        rep.termination = Termination::beta_zero;
        rep.grade = 0;
        return rep;
    }

    Vector v = b / phi0;
    Vector v_prev = Vector::Zero(n);
    Vector d_prev = Vector::Zero(n);
    Vector d_prev2 = Vector::Zero(n);
    std::vector<Vector> basis;
    double beta = 0.0;  // beta_t as a tridiagonal entry; beta_1 is not one
    double tnorm = 0.0;
    RotationRecurrence rot(phi0);
    Vector& x = rep.x;
    Vector& r = rep.residual;
    rep.termination = Termination::max_iter;

    for (std::size_t t = 1; t <= max_it; ++t) {
        const Vector vin = conj_if(saunders, v);
        Vector q = a.apply(vin);
        Complex alpha = inner(v, q);
        if (!saunders) alpha = alpha.real();
        q -= alpha * v + beta * v_prev;
        if (opts.reorthogonalize) {
            basis.push_back(v);
            for (const Vector& u : basis) q -= inner(u, q) * u;
        }
        const double beta_next = q.norm();
        tnorm = std::max(tnorm, std::sqrt(std::norm(alpha) + beta * beta + beta_next * beta_next));
        const double floor = opts.zero_tolerance * tnorm;
        const RotationStep st = rot.advance(alpha, beta_next, floor);

        IterationRecord rec;
        if (opts.record_trace) {
            rec.t = t;
            rec.alpha = alpha;
            rec.beta = t == 1 ? phi0 : beta;
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
            rec.v = v;
        }
        rep.iterations = t;

        if (st.gamma_zero) {
            rep.termination = Termination::gamma_zero;
            rep.grade = t;
            if (opts.record_trace) {
                rec.x = x;
                rec.residual = r;
                rec.d = Vector::Zero(n);
                rep.trace.push_back(std::move(rec));
            }
            break;
        }

        Vector dn = (vin - st.delta2 * d_prev - st.epsilon * d_prev2) / st.gamma2;
        x += st.tau * dn;
        // phi_t v_{t+1} = phi_{t-1} q / gamma2, which stays finite when beta_{t+1} vanishes
        r = st.s * st.s * r - (st.phi_prev * std::conj(st.c) / st.gamma2) * q;
        if (opts.record_trace) {
            rec.x = x;
            rec.residual = r;
            rec.d = dn;
            rep.trace.push_back(std::move(rec));
        }
        d_prev2 = std::move(d_prev);
        d_prev = std::move(dn);

        if (beta_next <= floor) {
            rep.termination = Termination::beta_zero;
            rep.grade = t;
            break;
        }
        if (opts.residual_target && st.phi <= *opts.residual_target * phi0) {
            rep.termination = Termination::residual_target;
            break;
        }
        v_prev = std::move(v);
        v = q / beta_next;
        beta = beta_next;
    }
    rep.phi = rot.phi();
    rep.tridiagonal_norm = tnorm;
    return rep;
}

}  // namespace detail

SolveReport solve(const LinearOperator& a, const Vector& b, const SolveOptions& opts) {
    if (a.kind() != Symmetry::hermitian) throw std::invalid_argument("solve expects a Hermitian operator");
    return detail::run_minres(a, b, opts, false);
}

Vector lift(const Vector& x, const Vector& r, double floor) {
    require_same_size(x.size(), r.size(), "lift residual");
    const double rr = r.squaredNorm();
    if (rr == 0.0 || std::sqrt(rr) <= floor) return x;
    return x - (inner(r, x) / rr) * r;
}

Vector lift(const SolveReport& report) {
    if (report.preconditioned) throw std::invalid_argument("preconditioned reports are lifted with plift");
    if (report.termination == Termination::beta_zero) return report.x;
    const double floor = report.zero_tolerance * report.phi0;
    if (report.kind == Symmetry::complex_symmetric) return lift_cs(report.x, report.residual, floor);
    return lift(report.x, report.residual, floor);
}

SolveReport solve_skew(const LinearOperator& a, const Vector& b, const SolveOptions& opts) {
    if (a.kind() != Symmetry::skew_hermitian) throw std::invalid_argument("solve_skew expects a skew-Hermitian operator");
    const Complex i(0.0, 1.0);
    FunctionOperator ia(a.dimension(), Symmetry::hermitian, [&a, i](const Vector& v) { return Vector(i * a.apply(v)); });
    SolveReport rep = detail::run_minres(ia, i * b, opts, false);
    rep.kind = Symmetry::skew_hermitian;
    return rep;
}

}  // namespace pinvminres
