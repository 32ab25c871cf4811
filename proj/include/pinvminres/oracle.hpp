#pragma once

#include <cstddef>

#include "pinvminres/preconditioner.hpp"

namespace pinvminres {

// Dense reference computations. Rank decisions use singular values above
// tol * sigma_max with tol = 1e-10 throughout.
constexpr double oracle_rank_tolerance = 1e-10;

// Hermitian: A = U diag(values) U^H with nonzero real eigenvalues.
// Complex-symmetric (Takagi): A = U diag(values) U^T with positive values.
struct OracleDecomposition {
    Symmetry kind = Symmetry::hermitian;
    Matrix u;
    RealVector values;
    Index rank = 0;
    Matrix complement;  // orthonormal basis of range(U)^perp
};

Matrix pinv(const Matrix& a, double tol = oracle_rank_tolerance);
Index numerical_rank(const Matrix& a, double tol = oracle_rank_tolerance);
// orthonormal basis of range(a)
Matrix range_basis(const Matrix& a, double tol = oracle_rank_tolerance);

struct MoorePenroseCheck {
    bool ok = false;
    double aba = 0;  // ||ABA - A|| / ||A||
    double bab = 0;  // ||BAB - B|| / ||B||
    double ab = 0;   // ||(AB)^H - AB|| / (||A|| ||B||)
    double ba = 0;   // ||(BA)^H - BA|| / (||A|| ||B||)
};
MoorePenroseCheck verify_moore_penrose(const Matrix& a, const Matrix& b, double tol = 1e-8);

OracleDecomposition hermitian_eigen(const Matrix& a, double tol = oracle_rank_tolerance);
OracleDecomposition takagi(const Matrix& a, double tol = oracle_rank_tolerance);

// Grade of b with respect to A: Krylov for Hermitian/skew, Saunders for CS.
std::size_t grade(const Matrix& a, const Vector& b, Symmetry kind, double tol = oracle_rank_tolerance);

// [P P^H A P P^H]^dagger b, or [conj(P) P^T A P P^H]^dagger b for CS
Vector lifted_problem_pinv(const Matrix& a, const Matrix& p, const Vector& b, Symmetry kind);
Vector lifted_problem_pinv(const Matrix& a, const Preconditioner& m, const Vector& b, Symmetry kind);

struct RankAssumptions {
    bool a_holds = false;  // rk(P^H U) = rk(U)   (CS: rk(P^T U) = rk(U))
    bool b_holds = false;  // rk(U^H P) = rk(P)   (CS: rk(U^T P) = rk(P))
};
RankAssumptions check_rank_assumptions(const Matrix& a, const Matrix& p, Symmetry kind);
RankAssumptions check_rank_assumptions(const Matrix& a, const Preconditioner& m, Symmetry kind);

// range basis P of a preconditioner (economy factors, else from the dense matrix)
Matrix preconditioner_range(const Preconditioner& m);

}  // namespace pinvminres
