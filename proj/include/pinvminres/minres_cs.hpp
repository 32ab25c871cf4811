#pragma once

#include "pinvminres/minres.hpp"

namespace pinvminres {

// MINRES over the Saunders subspace for A^T = A.
SolveReport solve_cs(const LinearOperator& a, const Vector& b, const SolveOptions& opts = {});

// x - (<conj r, x> / ||r||^2) conj r; x unchanged when ||r|| <= floor
Vector lift_cs(const Vector& x, const Vector& r, double floor = 0.0);

}  // namespace pinvminres
