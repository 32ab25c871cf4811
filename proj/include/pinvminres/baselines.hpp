#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pinvminres/operator.hpp"

namespace pinvminres {

struct BaselineReport {
    Vector x;
    double residual_norm = 0;      // ||b - A x||
    std::size_t iterations = 0;    // LSQR steps taken
    Index rank = 0;                // retained rank for truncated SVD
    double seconds = 0;
    std::vector<double> residual_history;  // LSQR estimate of ||r_k||, k = 0..iterations
    std::vector<double> normal_history;    // LSQR estimate of ||A^H r_k||
    std::string warning;
};

// Golub-Kahan LSQR with a fixed budget: no atol/btol stopping. The run ends
// early only on breakdown of the bidiagonalization or once ||A^H r|| has
// reached roundoff level relative to ||A|| ||r||. Two operator
// applications (A and A^H) per step.
BaselineReport lsqr(const LinearOperator& a, const Vector& b, std::size_t max_iter);

// x = sum_{k < rank} (u_k^H b / sigma_k) v_k; a rank above the numerical rank is clamped
BaselineReport tsvd_solve(const Matrix& a, const Vector& b, Index rank);
// keeps singular values above threshold * sigma_max
BaselineReport tsvd_solve_threshold(const Matrix& a, const Vector& b, double threshold);

// Truncated solve for Z (x) Z with symmetric Z, keeping the r eigenvalues of Z
// largest in magnitude (rank r^2 of the Kronecker matrix). b is vec of an n x n image.
BaselineReport tsvd_kronecker(const RealMatrix& z, const Vector& b, Index r);

}  // namespace pinvminres
