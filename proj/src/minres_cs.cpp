#include "pinvminres/minres_cs.hpp"

#include <cmath>

#include "recurrence.hpp"

namespace pinvminres {

SolveReport solve_cs(const LinearOperator& a, const Vector& b, const SolveOptions& opts) {
    if (a.kind() != Symmetry::complex_symmetric)
        throw std::invalid_argument("solve_cs expects a complex-symmetric operator");
    return detail::run_minres(a, b, opts, true);
}

Vector lift_cs(const Vector& x, const Vector& r, double floor) {
    require_same_size(x.size(), r.size(), "lift residual");
    const double rr = r.squaredNorm();
    if (rr == 0.0 || std::sqrt(rr) <= floor) return x;
    const Vector rc = r.conjugate();
    return x - (inner(rc, x) / rr) * rc;
}

}  // namespace pinvminres
