#pragma once

#include <vector>

#include "pinvminres/minres.hpp"
#include "pinvminres/preconditioner.hpp"

namespace pinvminres {

// Pairs (z_i / beta_i, w_i / beta_i) defining Y = sum z_i w_i^H / beta_i^2
// (Hermitian) or Y = sum z_i w_i^T / beta_i^2 (complex-symmetric).
class ReorthBuffer {
public:
    explicit ReorthBuffer(bool complex_symmetric = false) : cs_(complex_symmetric) {}

    void push(Vector z_scaled, Vector w_scaled);
    std::size_t size() const { return z_.size(); }

    Vector apply(const Vector& v) const;       // Y v
    Vector apply_dual(const Vector& v) const;  // Y^H v, or Y^T v for the CS form

    // z <- z - Y z, w <- w - Y^H w (Y^T w for CS)
    void reorthogonalize(Vector& z, Vector& w) const;

private:
    bool cs_;
    std::vector<Vector> z_;
    std::vector<Vector> w_;
};

SolveReport psolve_h(const LinearOperator& a, const Preconditioner& m, const Vector& b, const SolveOptions& opts = {});
SolveReport psolve_cs(const LinearOperator& a, const Preconditioner& m, const Vector& b, const SolveOptions& opts = {});

// Hermitian: x - (<r_breve, x> / <r_hat, r_breve>) r_hat
// CS:        x - (<conj r_breve, x> / <conj r_hat, conj r_breve>) conj r_hat
// Returns x when r_hat is zero; throws SolverError on a degenerate denominator.
Vector plift(const Vector& x, const Vector& r_hat, const Vector& r_breve, Symmetry kind, double zero_tolerance = 1e-12);
Vector plift(const SolveReport& report);

struct SubsolveResult {
    SolveReport reduced;  // the run on (A~, b~)
    // x = S x~, residual = S r~ (conj(S) r~ for CS); when tracing, each record
    // carries the mapped x_t, r-hat_t and w_t = beta_t S v~_t (S conj(v~_t) for CS)
    SolveReport mapped;
    Vector lifted;  // S lift(x~, r~)
};

// Reduced solve on A~ = S^H A S (S^T A S for CS), b~ = S^H b (S^T b).
// dense_reduced forms A~ explicitly (m <= 2048).
SubsolveResult subsolve(const LinearOperator& a, const SubPreconditioner& s, const Vector& b,
                        const SolveOptions& opts = {}, bool dense_reduced = false);

}  // namespace pinvminres
