#pragma once

#include <algorithm>
#include <cmath>

#include "pinvminres/minres.hpp"

namespace pinvminres::detail {

// Scalar part of one MINRES step: applies the previous rotation to the new
// tridiagonal column, forms the next rotation and updates tau/phi. The same
// recurrence serves the Hermitian and complex-symmetric columns because c is
// real in the Hermitian case and conj(c) reduces to c there.
struct RotationStep {
    Complex c_prev;
    Complex delta2;
    Complex epsilon;  // epsilon_t, used by this step's direction update
    Complex gamma;
    double gamma2 = 0;
    Complex c;
    double s = 0;
    Complex tau;
    double phi_prev = 0;
    double phi = 0;
    bool gamma_zero = false;
};

class RotationRecurrence {
public:
    explicit RotationRecurrence(double phi0) : phi_(phi0) {}

    RotationStep advance(Complex alpha, double beta_next, double gamma_floor) {
        RotationStep st;
        st.c_prev = c_;
        st.epsilon = epsilon_;
        st.delta2 = std::conj(c_) * delta_ + s_ * alpha;
        const double epsilon_next = s_ * beta_next;
        st.gamma = s_ * delta_ - c_ * alpha;
        const Complex delta_next = -c_ * beta_next;
        st.gamma2 = std::hypot(std::abs(st.gamma), beta_next);
        st.phi_prev = phi_;
        if (st.gamma2 <= gamma_floor) {
            st.gamma_zero = true;
            st.c = 0.0;
            st.s = 1.0;
            st.tau = 0.0;
        } else {
            st.c = st.gamma / st.gamma2;
            st.s = beta_next / st.gamma2;
            st.tau = std::conj(st.c) * phi_;
            phi_ = st.s * phi_;
        }
        st.phi = phi_;
        c_ = st.c;
        s_ = st.s;
        delta_ = delta_next;
        epsilon_ = epsilon_next;
        return st;
    }

    double phi() const { return phi_; }

private:
    Complex c_ = -1.0;
    double s_ = 0.0;
    Complex delta_ = 0.0;
    Complex epsilon_ = 0.0;
    double phi_;
};

inline std::size_t resolve_max_iterations(const SolveOptions& opts, Index d) {
    if (!(opts.zero_tolerance > 0)) throw std::invalid_argument("zero_tolerance must be positive");
    const std::size_t n = opts.max_iterations ? opts.max_iterations : static_cast<std::size_t>(2 * d + 2);
    return std::max<std::size_t>(n, 1);
}

inline Vector conj_if(bool flag, const Vector& v) { return flag ? Vector(v.conjugate()) : v; }

// shared loop of the two unpreconditioned solvers
SolveReport run_minres(const LinearOperator& a, const Vector& b, const SolveOptions& opts, bool saunders);

}  // namespace pinvminres::detail
