#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinvminres/baselines.hpp"
#include "pinvminres/csv.hpp"
#include "pinvminres/imaging.hpp"
#include "pinvminres/npc_monitor.hpp"
#include "pinvminres/precon_factory.hpp"
#include "pinvminres/random.hpp"

namespace pinvminres {

// Random singular test matrices of rank r with nonzero spectrum magnitudes
// spread over [1, 10] and kept apart, so the grade equals the number of
// distinct eigenvalues seen by b.
Matrix random_hermitian(Index d, Index r, CounterRng& rng);
Matrix random_skew_hermitian(Index d, Index r, CounterRng& rng);
Matrix random_complex_symmetric(Index d, Index r, CounterRng& rng);
Matrix random_matrix(Symmetry kind, Index d, Index r, CounterRng& rng);
Vector generic_rhs(Index d, CounterRng& rng);

// PSD preconditioner with rg(M) = rg(A) (Hermitian) or rg(conj M) = rg(A) (CS)
Preconditioner range_matched_preconditioner(const Matrix& a, Symmetry kind, CounterRng& rng);
// random PSD preconditioner of the given rank
Preconditioner random_preconditioner(Index d, Index rank, CounterRng& rng);

struct TraceDifference {
    double max_relative = 0;
    std::optional<std::size_t> first_divergent;  // first iteration above tol
    bool same_length = true;
};

// compares x_t, r-hat_t and w_t of two preconditioned traces
TraceDifference compare_traces(const SolveReport& a, const SolveReport& b, double tol = 1e-10);

// ---- synthetic lifting run ------------------------------------------------

struct SyntheticConfig {
    Index d = 20;
    Index rank = 15;
    Symmetry kind = Symmetry::hermitian;
    std::uint64_t seed = 0;
    bool reorthogonalize = true;
    std::size_t max_iterations = 0;
    bool ones_rhs = true;
};

struct SyntheticResult {
    std::vector<double> err_plain;   // per iteration
    std::vector<double> err_lifted;
    double final_plain = 0;
    double final_lifted = 0;
    SolveReport report;
};

SyntheticResult run_synthetic(const SyntheticConfig& cfg);
CsvTable synthetic_table(const SyntheticConfig& cfg, const SyntheticResult& res);

// ---- preconditioner error sweep ------------------------------------------

struct SweepConfig {
    Index d = 20;
    Index rank = 15;
    Symmetry kind = Symmetry::hermitian;
    std::uint64_t seed = 0;
    bool reorthogonalize = true;
};

struct SweepResult {
    Matrix a;
    Vector b;
    std::vector<ErrorRow> random_family;
    std::vector<ErrorRow> range_family;
};

SweepResult run_precon_sweep(const SweepConfig& cfg);
CsvTable sweep_table(const SweepConfig& cfg, const SweepResult& res);

// ---- NPC / monotonicity run ----------------------------------------------

enum class NpcOperator { standard, identity, indefinite2 };

struct NpcConfig {
    Index d = 20;
    Index rank = 15;
    std::uint64_t seed = 0;
    NpcOperator problem = NpcOperator::standard;
    bool reorthogonalize = true;
};

struct NpcRun {
    std::string name;
    SolveReport report;
    NpcAnalysis analysis;
    std::vector<IdentityViolation> identity_violations;
    std::vector<IdentityViolation> monotonicity_violations;
};

std::vector<NpcRun> run_npc(const NpcConfig& cfg);
CsvTable npc_table(const NpcConfig& cfg, const std::vector<NpcRun>& runs);

// ---- algorithm equivalence ------------------------------------------------

struct EquivConfig {
    Index d = 20;
    Index precon_rank = 10;
    Index rank = 15;
    Symmetry kind = Symmetry::hermitian;
    std::uint64_t seed = 0;
    bool identity_preconditioner = false;
    bool reorthogonalize = true;
    double tol = 1e-10;
};

struct EquivResult {
    TraceDifference psolve_vs_economy;  // direct form vs reduced form with S = P diag(sqrt(lambda))
    TraceDifference economy_vs_root;    // two factorizations: economy vs square PSD root
    bool passed = false;
};

EquivResult run_equiv(const EquivConfig& cfg);

// ---- deblurring -------------------------------------------------------------

struct DeblurConfig {
    Index n = 64;
    Index bandwidth = 9;
    double sigma_blur = 2.0;
    double sigma_noise = 1e-2;
    std::size_t iterations = 30;
    std::vector<double> rank_ratios{0.04, 0.16};
    std::uint64_t seed = 0;
    int channels = 1;
    bool normalize_blur = false;
    std::optional<std::string> input;
};

struct DeblurEntry {
    std::string solver;
    double rank_ratio = 0;  // r^2 / n^2, zero for full-space solvers
    double psnr = 0;
    double ssim = 0;
    double seconds = 0;
    ImagePlane image;
};

struct DeblurResult {
    ImagePlane original;
    ImagePlane blurred;  // blurred and noisy input
    double blurred_psnr = 0;
    double blurred_ssim = 0;
    std::vector<DeblurEntry> entries;

    const DeblurEntry* find(const std::string& solver, double ratio = 0) const;
};

// Kronecker factor C = Q diag(linspace(1, 2, r)) with Q from a thin QR of
// Z C-hat (range aligned) or of C-hat itself
RealMatrix kronecker_factor(const RealMatrix& z, const RealMatrix& c_hat, Index r, bool range_aligned);

// Reduced solve on vec(K X K) with K = C^T Z C, mapped back by C X C^T; returns
// (unlifted, lifted) images as vectors
std::pair<Vector, Vector> kronecker_subsolve(const RealMatrix& z, const RealMatrix& c, const Vector& b,
                                             std::size_t iterations);

DeblurResult run_deblur(const DeblurConfig& cfg);
// wall-clock seconds are written only with timings set, so default output is reproducible
CsvTable deblur_table(const DeblurConfig& cfg, const DeblurResult& res, bool timings = false);

}  // namespace pinvminres
