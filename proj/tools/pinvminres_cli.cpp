// pinvminres: command-line workbench for the lifting experiments.
//
// Exit codes: 0 success, 2 a checked property failed (--assert), 1 usage or I/O error.
// stdout carries a short summary; data goes to the --csv file.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pinvminres/experiments.hpp"

using namespace pinvminres;

namespace {

constexpr int exit_property = 2;
constexpr int exit_usage = 1;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PINVMINRES_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("PINVMINRES_SEED", std::string("not an unsigned integer: ") + env);
        }
    }
    return 0;
}

struct Common {
    std::uint64_t seed = 0;
    std::string csv;
    bool check = false;
    bool no_reorth = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "RNG seed (default: $PINVMINRES_SEED or 0)");
    sub->add_option("--csv", c.csv, "write the data table to this file");
    sub->add_flag("--assert", c.check, "check the subcommand's properties and exit 2 on failure");
    sub->add_flag("--no-reorth", c.no_reorth, "disable full reorthogonalization");
}

void emit(const CsvTable& t, const Common& c) {
    if (!c.csv.empty()) t.write(c.csv);
}

int verdict(bool ok, const Common& c) {
    if (!c.check) return 0;
    std::cout << (ok ? "assert: ok\n" : "assert: FAILED\n");
    return ok ? 0 : exit_property;
}

const CLI::Transformer kind_names(std::map<std::string, Symmetry>{{"hermitian", Symmetry::hermitian},
                                                                  {"h", Symmetry::hermitian},
                                                                  {"skew", Symmetry::skew_hermitian},
                                                                  {"cs", Symmetry::complex_symmetric}},
                                  CLI::ignore_case);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MINRES with lifting for singular Hermitian, skew-Hermitian and complex-symmetric systems"};
    app.require_subcommand(1);

    Common common;
    try {
        common.seed = default_seed();
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }

    SyntheticConfig syn;
    auto* s_syn = app.add_subcommand("synthetic", "relative error of plain and lifted iterates per iteration");
    s_syn->add_option("--d", syn.d, "dimension")->check(CLI::Range(1, 512));
    s_syn->add_option("--rank", syn.rank, "rank of A (default min(15, d - 1))");
    s_syn->add_option("--kind", syn.kind, "hermitian | skew | cs")->transform(kind_names);
    s_syn->add_option("--max-iter", syn.max_iterations, "iteration cap (0 = 2d + 2)");
    bool gaussian_rhs = false;
    s_syn->add_flag("--gaussian-rhs", gaussian_rhs, "complex Gaussian b instead of all ones");
    add_common(s_syn, common);

    SweepConfig sweep;
    auto* s_sweep = app.add_subcommand("precon-sweep", "error metrics over rank-i preconditioner families");
    s_sweep->add_option("--d", sweep.d, "dimension")->check(CLI::Range(2, 200));
    s_sweep->add_option("--rank", sweep.rank, "rank of A");
    s_sweep->add_option("--kind", sweep.kind, "hermitian | cs")->transform(kind_names);
    add_common(s_sweep, common);

    NpcConfig npc;
    std::string npc_problem = "standard";
    auto* s_npc = app.add_subcommand("npc", "non-positive curvature detection and monotonicity, M1..M4");
    s_npc->add_option("--d", npc.d, "dimension")->check(CLI::Range(2, 128));
    s_npc->add_option("--rank", npc.rank, "rank of A (one negative eigenvalue included)");
    s_npc->add_option("--problem", npc_problem, "standard | identity | indefinite2")
        ->check(CLI::IsMember({"standard", "identity", "indefinite2"}));
    add_common(s_npc, common);

    EquivConfig eq;
    auto* s_eq = app.add_subcommand("equiv", "direct vs factored preconditioned solve, two factorizations");
    s_eq->add_option("--d", eq.d, "dimension")->check(CLI::Range(2, 512));
    s_eq->add_option("--rank", eq.rank, "rank of A");
    s_eq->add_option("--precon-rank", eq.precon_rank, "rank of M");
    s_eq->add_option("--kind", eq.kind, "hermitian | cs")->transform(kind_names);
    s_eq->add_flag("--identity", eq.identity_preconditioner, "use M = I");
    s_eq->add_option("--tol", eq.tol, "relative trace tolerance");
    add_common(s_eq, common);

    DeblurConfig db;
    std::string out_dir;
    std::string input;
    bool timings = false;
    bool normalize_blur = false;
    auto* s_db = app.add_subcommand("deblur", "Kronecker Gaussian deblurring with MINRES, LSQR, TSVD and S1/S2");
    s_db->add_option("--n", db.n, "side of the synthetic test image")->check(CLI::Range(11, 1024));
    s_db->add_option("--input", input, "square binary PGM/PPM instead of the synthetic image")
        ->check(CLI::ExistingFile);
    s_db->add_option("--channels", db.channels, "channels of the synthetic image")->check(CLI::IsMember({1, 3}));
    s_db->add_option("--bandwidth", db.bandwidth, "odd Toeplitz bandwidth w");
    s_db->add_option("--sigma-blur", db.sigma_blur, "Gaussian blur standard deviation")->check(CLI::PositiveNumber);
    s_db->add_option("--sigma-noise", db.sigma_noise, "noise standard deviation")->check(CLI::NonNegativeNumber);
    s_db->add_option("--iterations", db.iterations, "iterations for MINRES, LSQR and the S1/S2 solves");
    s_db->add_option("--rank-ratios", db.rank_ratios, "r^2/n^2 values for TSVD and S1/S2")->delimiter(',');
    s_db->add_flag("--normalize-blur", normalize_blur, "symmetrically scale the blur so rows sum to about one");
    s_db->add_option("--out-dir", out_dir, "write original, blurred and deblurred images here");
    s_db->add_flag("--timings", timings, "fill the seconds column (output is then not reproducible)");
    add_common(s_db, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_usage;
    }

    try {
        if (*s_syn) {
            if (!s_syn->count("--rank")) syn.rank = std::min<Index>(15, syn.d - 1);
            syn.seed = common.seed;
            syn.reorthogonalize = !common.no_reorth;
            syn.ones_rhs = !gaussian_rhs;
            const SyntheticResult res = run_synthetic(syn);
            emit(synthetic_table(syn, res), common);
            std::cout << "synthetic " << to_string(syn.kind) << " d=" << syn.d << " rank=" << syn.rank
                      << " iterations=" << res.report.iterations << " (" << to_string(res.report.termination)
                      << ")\n  final err_plain  = " << res.final_plain << "\n  final err_lifted = " << res.final_lifted
                      << "\n";
            return verdict(res.final_lifted <= 1e-8, common);
        }

        if (*s_sweep) {
            sweep.seed = common.seed;
            sweep.reorthogonalize = !common.no_reorth;
            const SweepResult res = run_precon_sweep(sweep);
            emit(sweep_table(sweep, res), common);
            bool ok = true;
            for (const auto* fam : {&res.random_family, &res.range_family}) {
                for (const ErrorRow& r : *fam) {
                    if (r.a_holds && r.norm_amr > 1e-8) ok = false;
                    if (r.b_holds && (r.norm_mr > 1e-8 || r.e_p > 1e-8)) ok = false;
                }
            }
            for (const ErrorRow& r : res.range_family)
                if (r.rank == sweep.rank && r.e_x > 1e-8) ok = false;
            std::cout << "precon-sweep " << to_string(sweep.kind) << " d=" << sweep.d << " rank=" << sweep.rank << "\n";
            for (const ErrorRow& r : res.range_family)
                if (r.rank == sweep.rank)
                    std::cout << "  range_preserved i=r: E_x = " << r.e_x << ", ||M r|| = " << r.norm_mr << "\n";
            return verdict(ok, common);
        }

        if (*s_npc) {
            npc.seed = common.seed;
            npc.reorthogonalize = !common.no_reorth;
            npc.problem = npc_problem == "identity"      ? NpcOperator::identity
                          : npc_problem == "indefinite2" ? NpcOperator::indefinite2
                                                         : NpcOperator::standard;
            const std::vector<NpcRun> runs = run_npc(npc);
            emit(npc_table(npc, runs), common);
            bool ok = true;
            std::cout << "npc problem=" << npc_problem << "\n";
            for (const NpcRun& run : runs) {
                const auto& cert = run.analysis.certificate;
                std::cout << "  " << run.name << ": iterations=" << run.report.iterations;
                if (cert.detected)
                    std::cout << ", NPC at t=" << cert.iteration << " (curvature " << cert.curvature << ")";
                else
                    std::cout << ", no NPC";
                std::cout << ", violations=" << run.identity_violations.size() + run.monotonicity_violations.size()
                          << "\n";
                ok = ok && run.identity_violations.empty() && run.monotonicity_violations.empty();
                const bool expect = npc.problem == NpcOperator::standard ? run.name != "M4"
                                                                         : npc.problem == NpcOperator::indefinite2;
                if (cert.detected != expect) ok = false;
                if (npc.problem == NpcOperator::indefinite2 && cert.iteration != 1) ok = false;
            }
            return verdict(ok, common);
        }

        if (*s_eq) {
            eq.seed = common.seed;
            eq.reorthogonalize = !common.no_reorth;
            const EquivResult res = run_equiv(eq);
            CsvTable t({"comparison", "max_relative", "first_divergent", "same_length"});
            t.set_config("command", "equiv");
            t.set_config("d", std::to_string(eq.d));
            t.set_config("rank", std::to_string(eq.rank));
            t.set_config("precon_rank", eq.identity_preconditioner ? "identity" : std::to_string(eq.precon_rank));
            t.set_config("kind", to_string(eq.kind));
            t.set_config("seed", std::to_string(eq.seed));
            t.set_config("tol", CsvTable::num(eq.tol));
            auto row = [&](const char* name, const TraceDifference& d) {
                t.add_row({name, CsvTable::num(d.max_relative),
                           d.first_divergent ? std::to_string(*d.first_divergent) : std::string("none"),
                           d.same_length ? "1" : "0"});
                std::cout << "  " << name << ": max relative difference " << d.max_relative;
                if (d.first_divergent) std::cout << ", first divergent iteration " << *d.first_divergent;
                std::cout << "\n";
            };
            std::cout << "equiv " << to_string(eq.kind) << " d=" << eq.d << "\n";
            row("psolve_vs_subsolve", res.psolve_vs_economy);
            row("economy_vs_root", res.economy_vs_root);
            emit(t, common);
            std::cout << (res.passed ? "  traces agree\n" : "  traces differ\n");
            // a mismatch is this command's failure mode even without --assert
            return res.passed ? 0 : exit_property;
        }

        if (*s_db) {
            db.seed = common.seed;
            db.normalize_blur = normalize_blur;
            if (!input.empty()) db.input = input;
            const DeblurResult res = run_deblur(db);
            emit(deblur_table(db, res, timings), common);
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                const std::string ext = res.original.channel_count() == 1 ? ".pgm" : ".ppm";
                const std::filesystem::path dir(out_dir);
                write_image(res.original, (dir / ("original" + ext)).string());
                write_image(res.blurred, (dir / ("blurred" + ext)).string());
                for (const DeblurEntry& e : res.entries) {
                    std::ostringstream name;
                    name << e.solver;
                    if (e.rank_ratio > 0) name << "_r" << std::lround(e.rank_ratio * 10000);
                    write_image(e.image, (dir / (name.str() + ext)).string());
                }
            }
            std::cout << "deblur n=" << res.original.n << " w=" << db.bandwidth << " sigma_blur=" << db.sigma_blur
                      << " sigma_noise=" << db.sigma_noise << "\n  blurred: PSNR " << res.blurred_psnr << " SSIM "
                      << res.blurred_ssim << "\n";
            for (const DeblurEntry& e : res.entries)
                std::cout << "  " << e.solver << (e.rank_ratio > 0 ? "@" + CsvTable::num(e.rank_ratio) : "")
                          << ": PSNR " << e.psnr << " SSIM " << e.ssim << "\n";

            bool ok = res.find("minres_lifted")->psnr >= res.find("minres")->psnr &&
                      res.find("minres_lifted")->psnr > res.blurred_psnr;
            for (const DeblurEntry& e : res.entries) {
                if (e.solver != "s1_lifted" || e.rank_ratio < 0.04 - 1e-12) continue;
                ok = ok && e.psnr >= res.find("s1", e.rank_ratio)->psnr && e.psnr > res.blurred_psnr;
                ok = ok && e.psnr > res.find("s2_lifted", e.rank_ratio)->psnr;
            }
            return verdict(ok, common);
        }
    } catch (const ImageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return exit_property;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return 0;
}
