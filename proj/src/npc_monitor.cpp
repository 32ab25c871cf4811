#include "pinvminres/npc_monitor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pinvminres {

namespace {

constexpr double detection_tolerance = 1e-10;

double lambda_min_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta, std::size_t t) {
    const Index n = static_cast<Index>(t);
    RealMatrix tt = RealMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        tt(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < n) tt(i, i + 1) = tt(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(tt, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
}

// r-hat_{t-1} from the trace; r-hat_0 = M b
Vector rhat_before(const SolveReport& report, const Preconditioner& m, const Vector& b, std::size_t t) {
    return t == 1 ? m.apply(b) : report.trace[t - 2].residual;
}

double safe_ratio(double num, double den) { return den > 0 ? num / den : num; }

}  // namespace

NpcAnalysis attach(const SolveReport& report, const LinearOperator& a, const Preconditioner& m, const Vector& b) {
    if (report.kind != Symmetry::hermitian || !report.preconditioned)
        throw std::invalid_argument("NPC monitoring needs a preconditioned Hermitian solve");
    if (report.trace.size() != report.iterations)
        throw std::invalid_argument("NPC monitoring needs a solve recorded with record_trace");
    require_same_size(a.dimension(), b.size(), "right-hand side");
    require_same_size(a.dimension(), m.dimension(), "preconditioner");

    NpcAnalysis out;
    MonotonicityTrace& tr = out.trace;
    NpcCertificate& cert = out.certificate;
    const std::size_t iters = report.iterations;
    tr.tridiagonal_norm = report.tridiagonal_norm;
    const double floor = detection_tolerance * std::max(report.tridiagonal_norm, 1e-300);

    for (std::size_t t = 1; t <= iters; ++t) {
        const IterationRecord& rec = report.trace[t - 1];
        tr.alpha.push_back(rec.alpha.real());
        if (t < iters) tr.beta.push_back(rec.beta_next);
        tr.npc_test.push_back(-(rec.c_prev * rec.gamma).real());
        tr.lambda_min.push_back(lambda_min_tridiagonal(tr.alpha, tr.beta, t));
        if (!cert.detected && tr.npc_test.back() <= floor) {
            cert.detected = true;
            cert.iteration = t;
            cert.test_value = tr.npc_test.back();
            cert.lambda_min = tr.lambda_min.back();
            cert.direction = rhat_before(report, m, b, t);
            cert.curvature = inner(cert.direction, a.apply(cert.direction)).real();
        }
    }
    if (!cert.detected && iters > 0) cert.lambda_min = tr.lambda_min.back();

    tr.detection = cert.detected ? cert.iteration : 0;
    tr.checked = cert.detected ? cert.iteration : iters;
    // the monotonic results are stated for steps strictly before the grade
    std::size_t prefix = cert.detected ? cert.iteration - 1 : iters;
    if (report.grade && prefix >= *report.grade) prefix = *report.grade - 1;
    tr.prefix = prefix;

    double anorm = 0.0;
    auto push_point = [&](const Vector& x) {
        const Vector ax = a.apply(x);
        if (x.norm() > 0) anorm = std::max(anorm, ax.norm() / x.norm());
        tr.model.push_back(0.5 * inner(x, ax).real() - inner(b, x).real());
        tr.xb.push_back(inner(x, b).real());
        tr.x_mpinv.push_back(std::sqrt(std::max(inner(x, m.apply_pinv(x)).real(), 0.0)));
    };
    push_point(Vector::Zero(b.size()));
    for (std::size_t t = 1; t <= std::max(prefix, tr.checked); ++t) push_point(report.trace[t - 1].x);
    tr.scale = b.norm() * std::max(1.0, anorm);
    return out;
}

std::vector<IdentityViolation> verify_identities(const MonotonicityTrace& trace, const SolveReport& report,
                                                 const LinearOperator& a, const Preconditioner& m, const Vector& b,
                                                 double tol) {
    std::vector<IdentityViolation> out;
    auto flag = [&](std::size_t t, const char* name, double magnitude) {
        if (!(magnitude <= tol)) out.push_back({t, name, magnitude});
    };
    const std::size_t last = std::min(trace.checked, report.trace.size());

    std::vector<Vector> rhat, arhat, ax;
    for (std::size_t t = 1; t <= last; ++t) {
        rhat.push_back(report.trace[t - 1].residual);
        arhat.push_back(a.apply(rhat.back()));
        ax.push_back(a.apply(report.trace[t - 1].x));
    }
    const double bn = b.norm();

    for (std::size_t t = 1; t <= last; ++t) {
        const Vector& r = rhat[t - 1];
        const double rn = r.norm();
        for (std::size_t i = 1; i <= t; ++i)
            flag(t, "rhat_perp_Ax", safe_ratio(std::abs(inner(r, ax[i - 1])), rn * ax[i - 1].norm()));
        for (std::size_t i = 1; i <= last; ++i)
            if (i != t)
                flag(t, "rhat_A_conjugate",
                     safe_ratio(std::abs(inner(rhat[i - 1], arhat[t - 1])), rhat[i - 1].norm() * arhat[t - 1].norm()));

        const IterationRecord& rec = report.trace[t - 1];
        const double phi_prev = t == 1 ? report.phi0 : report.trace[t - 2].phi;
        const Vector rp = rhat_before(report, m, b, t);
        const Vector arp = a.apply(rp);
        const double curvature = inner(rp, arp).real();
        const double predicted = -phi_prev * phi_prev * (rec.c_prev * rec.gamma).real();
        // phi^2 ||T|| bounds the predicted side, which matters when A r-hat vanishes
        const double cscale = rp.norm() * arp.norm() + phi_prev * phi_prev * trace.tridiagonal_norm;
        flag(t, "curvature", safe_ratio(std::abs(curvature - predicted), cscale));

        flag(t, "rhat_b_phi2", safe_ratio(std::abs(inner(r, b) - rec.phi * rec.phi), rn * bn));
    }

    // positivity facts hold strictly before the grade and the first detection
    for (std::size_t t = 1; t <= std::min(trace.prefix, report.trace.size()); ++t) {
        const IterationRecord& rec = report.trace[t - 1];
        const Vector step = rec.tau * rec.d;
        const double sn = step.norm();
        for (std::size_t j = 0; j <= t; ++j) {
            const Vector& r = t - j == 0 ? b : report.trace[t - j - 1].residual_breve;
            const double v = inner(step, r).real();
            if (!(v > -tol * sn * r.norm())) out.push_back({t, "step_residual_positive", v});
        }
        const Vector& x = rec.x;
        const double v = inner(x, b).real() - inner(x, a.apply(x)).real();
        if (!(v > -tol * x.norm() * bn)) out.push_back({t, "xb_minus_xAx_positive", v});
    }
    return out;
}

std::vector<IdentityViolation> check_monotonicity(const MonotonicityTrace& trace, double margin) {
    std::vector<IdentityViolation> out;
    const double allow = margin * trace.scale;
    for (std::size_t t = 1; t <= trace.prefix && t < trace.model.size(); ++t) {
        const double dm = trace.model[t] - trace.model[t - 1];
        if (!(dm < allow)) out.push_back({t, "model_decreasing", dm});
        const double db = trace.xb[t] - trace.xb[t - 1];
        if (!(db > -allow)) out.push_back({t, "xb_increasing", db});
        const double dx = trace.x_mpinv[t] - trace.x_mpinv[t - 1];
        if (!(dx > -allow)) out.push_back({t, "x_mpinv_increasing", dx});
    }
    const double tfloor = margin * std::max(trace.tridiagonal_norm, 1e-300);
    const std::size_t before = trace.detection ? trace.detection - 1 : trace.lambda_min.size();
    for (std::size_t t = 1; t <= before && t <= trace.lambda_min.size(); ++t)
        if (!(trace.lambda_min[t - 1] > -tfloor)) out.push_back({t, "lambda_min_positive", trace.lambda_min[t - 1]});
    if (trace.detection && trace.detection <= trace.lambda_min.size()) {
        const double lm = trace.lambda_min[trace.detection - 1];
        if (!(lm <= tfloor)) out.push_back({trace.detection, "lambda_min_nonpositive_at_detection", lm});
    }
    return out;
}

}  // namespace pinvminres
