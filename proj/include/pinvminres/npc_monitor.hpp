#pragma once

#include <string>
#include <vector>

#include "pinvminres/pminres.hpp"

namespace pinvminres {

struct NpcCertificate {
    bool detected = false;
    std::size_t iteration = 0;  // first t with -c_{t-1} gamma_t <= 0
    double test_value = 0;      // -c_{t-1} gamma_t at that t
    double curvature = 0;       // <r-hat_{t-1}, A r-hat_{t-1}>
    Vector direction;           // r-hat_{t-1}
    double lambda_min = 0;      // smallest eigenvalue of T_t
};

// Entry k describes x_k for k = 0..prefix (x_0 = 0); T-based entries start at t = 1.
struct MonotonicityTrace {
    std::vector<double> model;      // m(x_t) = <x_t, A x_t>/2 - <b, x_t>
    std::vector<double> xb;         // <x_t, b>
    std::vector<double> x_mpinv;    // ||x_t||_{M^dagger}
    std::vector<double> npc_test;   // -c_{t-1} gamma_t, t = 1..iterations
    std::vector<double> lambda_min; // lambda_min(T_t), t = 1..iterations
    std::vector<double> alpha;      // diagonal of T
    std::vector<double> beta;       // off-diagonal beta_2, beta_3, ...
    std::size_t prefix = 0;         // steps t = 1..prefix covered by the monotonicity results
    std::size_t checked = 0;        // steps t = 1..checked covered by the orthogonality identities
    std::size_t detection = 0;      // first NPC step, 0 when none
    double scale = 0;               // ||b|| max(1, ||A|| estimate)
    double tridiagonal_norm = 0;
};

struct NpcAnalysis {
    NpcCertificate certificate;
    MonotonicityTrace trace;
};

// Requires a Hermitian preconditioned report recorded with record_trace.
NpcAnalysis attach(const SolveReport& report, const LinearOperator& a, const Preconditioner& m, const Vector& b);

struct IdentityViolation {
    std::size_t iteration = 0;
    std::string identity;
    double magnitude = 0;
};

// Orthogonality and positivity facts of preconditioned Hermitian MINRES over
// the steps before the first NPC detection. Violations are reported, not thrown.
std::vector<IdentityViolation> verify_identities(const MonotonicityTrace& trace, const SolveReport& report,
                                                 const LinearOperator& a, const Preconditioner& m, const Vector& b,
                                                 double tol = 1e-8);

// m(x_t) strictly decreasing, <x_t, b> and ||x_t||_{M^dagger} strictly
// increasing, lambda_min(T_t) > 0 over the prefix.
std::vector<IdentityViolation> check_monotonicity(const MonotonicityTrace& trace, double margin = 1e-10);

}  // namespace pinvminres
