#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinvminres/pminres.hpp"

namespace pinvminres {

enum class BasisSource {
    random_psd_svd,   // singular vectors of a random PSD matrix, not perpendicular to any eigenvector of A
    range_preserved,  // left singular vectors of A C (conj(A) C for CS), so the leading rk(A) span rg(A)
    eigen_positive,   // eigenvectors of positive eigenvalues first (Hermitian A)
    sketch,           // orthonormalized real Gaussian sketch
    eigen_all,        // eigen/Takagi vectors by decreasing magnitude, then the complement
};

const char* to_string(BasisSource s);
BasisSource parse_basis_source(const std::string& s);

struct RankFamilySpec {
    Index dimension = 0;
    BasisSource source = BasisSource::random_psd_svd;
    Symmetry kind = Symmetry::hermitian;
    // ranks to build; empty means 1..d
    std::vector<Index> ranks;
    std::uint64_t seed = 0;
};

struct RankFamilyMember {
    Index rank = 0;
    Matrix p;            // d x rank, orthonormal columns
    RealVector weights;  // sigma_1..sigma_rank
    Preconditioner m;
};

// M_i = P_i diag(sigma_1..sigma_i) P_i^H with sigma ~ |N(0,1)| shared across ranks.
// Every source except sketch needs the dense operator.
std::vector<RankFamilyMember> make_rank_family(const RankFamilySpec& spec, const Matrix* a = nullptr);

// Hermitian A = [U+ u-] diag(lambda+, -1) [U+ u-]^H with lambda+ log-spaced in [1, 100]
struct NpcProblem {
    Matrix a;
    Vector b;
    Matrix u_plus;
    Vector u_minus;
    RealVector positive_eigenvalues;
};

NpcProblem make_npc_problem(Index d = 20, Index rank = 15, std::uint64_t seed = 0);

struct NamedPreconditioner {
    std::string name;
    Preconditioner m;
};

// M1 sketch S S^H (S real d x r), M2 positive definite, M3 rank r on [U+ u-], M4 rank r+ on U+
std::vector<NamedPreconditioner> make_npc_suite(const NpcProblem& problem, std::uint64_t seed = 0);

struct ErrorRow {
    Index rank = 0;
    double e_x = 0;       // ||x_g - x+|| / ||x+||
    double e_x_hat = 0;   // same for the lifted iterate
    double e_r = 0;       // ||r_g - r+|| / ||r+||
    double e_p = 0;       // lifted iterate against the lifted-problem pseudo-inverse solution
    double norm_mr = 0;   // ||r-hat|| with r-hat = M r (conj(M) r for CS), r = b - A x_g
    double norm_amr = 0;  // ||A r-hat||, ||conj(A) r-hat|| for CS
    bool a_holds = false;
    bool b_holds = false;
    Termination termination = Termination::max_iter;
    std::size_t iterations = 0;
};

std::vector<ErrorRow> run_error_sweep(const Matrix& a, const Vector& b, const std::vector<RankFamilyMember>& family,
                                      Symmetry kind, const SolveOptions& opts = {});

}  // namespace pinvminres
