#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pinvminres/operator.hpp"

namespace pinvminres {

struct SolveOptions {
    // 0 selects 2*d + 2
    std::size_t max_iterations = 0;
    // beta_{t+1} and gamma2_t are treated as zero below this fraction of the
    // running norm estimate of the tridiagonal matrix
    double zero_tolerance = 1e-9;
    // stop once phi_t <= residual_target * phi_0
    std::optional<double> residual_target;
    bool record_trace = false;
    bool reorthogonalize = false;
    // run probe_symmetry before iterating
    bool verify_symmetry = false;
};

enum class Termination {
    beta_zero,
    gamma_zero,
    residual_target,
    max_iter,
    // preconditioned solve with M b = 0 (or M conj(b) = 0)
    rhs_in_null_space,
};

const char* to_string(Termination t);

// Scalars of step t, plus the step's vectors when tracing. For the
// unpreconditioned solvers `residual` is r_t and `v` the Lanczos/Saunders
// vector v_t; for the preconditioned ones `residual` is r-hat_t,
// `residual_breve` is r-breve_t, and z/w hold z_t, w_t.
struct IterationRecord {
    std::size_t t = 0;
    Complex alpha;
    double beta = 0;       // beta_t (beta_1 = ||b|| or sqrt<b, M b>)
    double beta_next = 0;  // beta_{t+1}
    Complex c_prev;        // c_{t-1}
    Complex gamma;         // pre-rotation gamma_t
    double gamma2 = 0;
    Complex delta2;
    Complex epsilon;
    Complex c;
    double s = 0;
    Complex tau;
    double phi = 0;  // phi_t

    Vector x;
    Vector residual;
    Vector residual_breve;
    Vector v;
    Vector z;
    Vector w;
    Vector d;
};

struct SolveReport {
    Symmetry kind = Symmetry::hermitian;
    bool preconditioned = false;
    Vector x;
    Vector residual;        // r_t, or r-hat_t when preconditioned
    Vector residual_breve;  // r-breve_t (preconditioned only)
    Termination termination = Termination::max_iter;
    std::size_t iterations = 0;
    // termination iteration when the process reached beta_zero or gamma_zero
    std::optional<std::size_t> grade;
    double phi = 0;
    double phi0 = 0;  // ||b||, or beta_1 when preconditioned
    double tridiagonal_norm = 0;
    double zero_tolerance = 1e-9;
    std::vector<IterationRecord> trace;
};

SolveReport solve(const LinearOperator& a, const Vector& b, const SolveOptions& opts = {});

// x - (<r, x> / ||r||^2) r; x unchanged when ||r|| <= floor
Vector lift(const Vector& x, const Vector& r, double floor = 0.0);
// lifts the final iterate of an unpreconditioned solve (either kind)
Vector lift(const SolveReport& report);

// Runs solve on (iA, ib). The report residual is ib - iA x_g, so lift(report)
// returns the pseudo-inverse solution of the original skew system.
SolveReport solve_skew(const LinearOperator& a, const Vector& b, const SolveOptions& opts = {});

}  // namespace pinvminres
