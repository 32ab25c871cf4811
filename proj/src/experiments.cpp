#include "pinvminres/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pinvminres/minres_cs.hpp"
#include "pinvminres/oracle.hpp"

namespace pinvminres {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// r magnitudes in [1, 10]; the i-th sits in its own slot of width 9/r
RealVector separated_magnitudes(Index r, CounterRng& rng) {
    RealVector m(r);
    for (Index i = 0; i < r; ++i) m(i) = 1.0 + 9.0 * (static_cast<double>(i) + 0.2 + 0.6 * rng.uniform()) / r;
    return m;
}

void check_shape(Index d, Index r) {
    if (d < 1 || r < 0 || r > d) throw std::invalid_argument("need 0 <= rank <= d and d >= 1");
}

RealVector positive_weights(Index n, CounterRng& rng) {
    RealVector w(n);
    for (Index i = 0; i < n; ++i) w(i) = std::abs(rng.normal()) + 0.1;
    return w;
}

std::string yes_no(bool v) { return v ? "1" : "0"; }

}  // namespace

Matrix random_hermitian(Index d, Index r, CounterRng& rng) {
    check_shape(d, r);
    const Matrix u = rng.unitary(d);
    const RealVector mag = separated_magnitudes(r, rng);
    RealVector lam = RealVector::Zero(d);
    for (Index i = 0; i < r; ++i) lam(i) = rng.uniform() < 0.5 ? -mag(i) : mag(i);
    Matrix a = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
    return 0.5 * (a + a.adjoint());
}

Matrix random_skew_hermitian(Index d, Index r, CounterRng& rng) { return Complex(0, 1) * random_hermitian(d, r, rng); }

Matrix random_complex_symmetric(Index d, Index r, CounterRng& rng) {
    check_shape(d, r);
    const Matrix v = rng.unitary(d);
    RealVector sg = RealVector::Zero(d);
    sg.head(r) = separated_magnitudes(r, rng);
    Matrix a = v * sg.cast<Complex>().asDiagonal() * v.transpose();
    return 0.5 * (a + a.transpose());
}

Matrix random_matrix(Symmetry kind, Index d, Index r, CounterRng& rng) {
    switch (kind) {
        case Symmetry::hermitian: return random_hermitian(d, r, rng);
        case Symmetry::skew_hermitian: return random_skew_hermitian(d, r, rng);
        case Symmetry::complex_symmetric: return random_complex_symmetric(d, r, rng);
    }
    throw std::invalid_argument("unknown symmetry kind");
}

Vector generic_rhs(Index d, CounterRng& rng) { return rng.complex_normal_vector(d); }

Preconditioner range_matched_preconditioner(const Matrix& a, Symmetry kind, CounterRng& rng) {
    Matrix u;
    if (kind == Symmetry::complex_symmetric)
        u = takagi(a).u.conjugate();
    else if (kind == Symmetry::skew_hermitian)
        u = hermitian_eigen(Complex(0, 1) * a).u;
    else
        u = hermitian_eigen(a).u;
    const Matrix w = rng.unitary(u.cols());
    return Preconditioner::from_factors(u * w, positive_weights(u.cols(), rng));
}

Preconditioner random_preconditioner(Index d, Index rank, CounterRng& rng) {
    check_shape(d, rank);
    return Preconditioner::from_factors(rng.unitary(d).leftCols(rank), positive_weights(rank, rng));
}

TraceDifference compare_traces(const SolveReport& a, const SolveReport& b, double tol) {
    TraceDifference out;
    out.same_length = a.trace.size() == b.trace.size();
    double rscale = 0.0;
    for (const auto& rec : a.trace) rscale = std::max(rscale, rec.residual.norm());
    rscale = std::max(rscale, 1e-300);
    const std::size_t n = std::min(a.trace.size(), b.trace.size());
    for (std::size_t t = 0; t < n; ++t) {
        const IterationRecord& p = a.trace[t];
        const IterationRecord& q = b.trace[t];
        double diff = (p.x - q.x).norm() / std::max(p.x.norm(), 1e-300);
        diff = std::max(diff, (p.residual - q.residual).norm() / rscale);
        if (p.w.size() && q.w.size()) diff = std::max(diff, (p.w - q.w).norm() / std::max(p.w.norm(), 1e-300));
        out.max_relative = std::max(out.max_relative, diff);
        if (diff > tol && !out.first_divergent) out.first_divergent = t + 1;
    }
    if (!out.same_length && !out.first_divergent) out.first_divergent = n + 1;
    return out;
}

// ---- synthetic ------------------------------------------------------------

SyntheticResult run_synthetic(const SyntheticConfig& cfg) {
    CounterRng rng(cfg.seed, 1);
    const Matrix a = random_matrix(cfg.kind, cfg.d, cfg.rank, rng);
    const Vector b = cfg.ones_rhs ? Vector(Vector::Ones(cfg.d)) : generic_rhs(cfg.d, rng);
    const Vector x_ref = pinv(a) * b;
    const double xn = std::max(x_ref.norm(), 1e-300);

    DenseOperator op(a, cfg.kind);
    SolveOptions opts;
    opts.record_trace = true;
    opts.reorthogonalize = cfg.reorthogonalize;
    opts.max_iterations = cfg.max_iterations;

    SyntheticResult res;
    switch (cfg.kind) {
        case Symmetry::hermitian: res.report = solve(op, b, opts); break;
        case Symmetry::skew_hermitian: res.report = solve_skew(op, b, opts); break;
        case Symmetry::complex_symmetric: res.report = solve_cs(op, b, opts); break;
    }
    const SolveReport& rep = res.report;
    const double floor = rep.zero_tolerance * rep.phi0;
    for (std::size_t t = 0; t < rep.trace.size(); ++t) {
        const IterationRecord& rec = rep.trace[t];
        const bool last_exact = t + 1 == rep.trace.size() && rep.termination == Termination::beta_zero;
        Vector lifted = rec.x;
        if (!last_exact)
            lifted = cfg.kind == Symmetry::complex_symmetric ? lift_cs(rec.x, rec.residual, floor)
                                                             : lift(rec.x, rec.residual, floor);
        res.err_plain.push_back((rec.x - x_ref).norm() / xn);
        res.err_lifted.push_back((lifted - x_ref).norm() / xn);
    }
    res.final_plain = (rep.x - x_ref).norm() / xn;
    res.final_lifted = (lift(rep) - x_ref).norm() / xn;
    return res;
}

CsvTable synthetic_table(const SyntheticConfig& cfg, const SyntheticResult& res) {
    CsvTable t({"t", "err_plain", "err_lifted", "kind"});
    t.set_config("command", "synthetic");
    t.set_config("d", std::to_string(cfg.d));
    t.set_config("rank", std::to_string(cfg.rank));
    t.set_config("kind", to_string(cfg.kind));
    t.set_config("seed", std::to_string(cfg.seed));
    t.set_config("reorth", yes_no(cfg.reorthogonalize));
    t.set_config("max_iter", std::to_string(cfg.max_iterations));
    t.set_config("rhs", cfg.ones_rhs ? "ones" : "gaussian");
    t.set_config("termination", to_string(res.report.termination));
    for (std::size_t i = 0; i < res.err_plain.size(); ++i)
        t.add_row({std::to_string(i + 1), CsvTable::num(res.err_plain[i]), CsvTable::num(res.err_lifted[i]),
                   to_string(cfg.kind)});
    return t;
}

// ---- sweep ----------------------------------------------------------------

SweepResult run_precon_sweep(const SweepConfig& cfg) {
    if (cfg.kind == Symmetry::skew_hermitian) throw std::invalid_argument("sweep covers Hermitian and CS operators");
    CounterRng rng(cfg.seed, 2);
    SweepResult res;
    res.a = random_matrix(cfg.kind, cfg.d, cfg.rank, rng);
    res.b = Vector::Ones(cfg.d);
    SolveOptions opts;
    opts.reorthogonalize = cfg.reorthogonalize;

    RankFamilySpec spec;
    spec.dimension = cfg.d;
    spec.kind = cfg.kind;
    spec.seed = cfg.seed;
    spec.source = BasisSource::random_psd_svd;
    res.random_family = run_error_sweep(res.a, res.b, make_rank_family(spec, &res.a), cfg.kind, opts);
    spec.source = BasisSource::range_preserved;
    res.range_family = run_error_sweep(res.a, res.b, make_rank_family(spec, &res.a), cfg.kind, opts);
    return res;
}

CsvTable sweep_table(const SweepConfig& cfg, const SweepResult& res) {
    CsvTable t({"family", "i", "E_x", "E_x_hat", "E_r", "E_P", "norm_Mr", "norm_AMr", "a_holds", "b_holds",
                "termination", "iterations"});
    t.set_config("command", "precon-sweep");
    t.set_config("d", std::to_string(cfg.d));
    t.set_config("rank", std::to_string(cfg.rank));
    t.set_config("kind", to_string(cfg.kind));
    t.set_config("seed", std::to_string(cfg.seed));
    t.set_config("reorth", yes_no(cfg.reorthogonalize));
    auto emit = [&](const char* family, const std::vector<ErrorRow>& rows) {
        for (const ErrorRow& r : rows)
            t.add_row({family, std::to_string(r.rank), CsvTable::num(r.e_x), CsvTable::num(r.e_x_hat),
                       CsvTable::num(r.e_r), CsvTable::num(r.e_p), CsvTable::num(r.norm_mr),
                       CsvTable::num(r.norm_amr), yes_no(r.a_holds), yes_no(r.b_holds), to_string(r.termination),
                       std::to_string(r.iterations)});
    };
    emit("random_psd_svd", res.random_family);
    emit("range_preserved", res.range_family);
    return t;
}

// ---- NPC ------------------------------------------------------------------

std::vector<NpcRun> run_npc(const NpcConfig& cfg) {
    if (cfg.d > 128) throw std::invalid_argument("NPC runs are limited to d <= 128");
    Matrix a;
    Vector b;
    std::vector<NamedPreconditioner> suite;
    switch (cfg.problem) {
        case NpcOperator::standard: {
            const NpcProblem p = make_npc_problem(cfg.d, cfg.rank, cfg.seed);
            a = p.a;
            b = p.b;
            suite = make_npc_suite(p, cfg.seed);
            break;
        }
        case NpcOperator::identity: {
            a = Matrix::Identity(cfg.d, cfg.d);
            b = Vector::Ones(cfg.d);
            CounterRng rng(cfg.seed, 3);
            suite.push_back({"I", Preconditioner::identity(cfg.d)});
            suite.push_back({"PD", random_preconditioner(cfg.d, cfg.d, rng)});
            break;
        }
        case NpcOperator::indefinite2: {
            a = Matrix::Zero(2, 2);
            a(0, 0) = 1.0;
            a(1, 1) = -1.0;
            b = Vector::Ones(2);
            suite.push_back({"I", Preconditioner::identity(2)});
            break;
        }
    }
    const DenseOperator op(a, Symmetry::hermitian);
    SolveOptions opts;
    opts.record_trace = true;
    opts.reorthogonalize = cfg.reorthogonalize;

    std::vector<NpcRun> runs;
    for (const NamedPreconditioner& np : suite) {
        NpcRun run{np.name, psolve_h(op, np.m, b, opts), {}, {}, {}};
        run.analysis = attach(run.report, op, np.m, b);
        run.identity_violations = verify_identities(run.analysis.trace, run.report, op, np.m, b);
        run.monotonicity_violations = check_monotonicity(run.analysis.trace);
        runs.push_back(std::move(run));
    }
    return runs;
}

CsvTable npc_table(const NpcConfig& cfg, const std::vector<NpcRun>& runs) {
    CsvTable t({"preconditioner", "t", "npc_test", "lambda_min", "model", "xb", "x_mpinv", "detected_at", "iterations"});
    t.set_config("command", "npc");
    t.set_config("d", std::to_string(cfg.d));
    t.set_config("rank", std::to_string(cfg.rank));
    t.set_config("seed", std::to_string(cfg.seed));
    t.set_config("problem", cfg.problem == NpcOperator::standard   ? "standard"
                            : cfg.problem == NpcOperator::identity ? "identity"
                                                                   : "indefinite2");
    t.set_config("reorth", yes_no(cfg.reorthogonalize));
    for (const NpcRun& run : runs) {
        const MonotonicityTrace& tr = run.analysis.trace;
        const std::string det = std::to_string(tr.detection);
        const std::string its = std::to_string(run.report.iterations);
        const std::size_t rows = std::max(tr.npc_test.size() + 1, tr.model.size());
        for (std::size_t k = 0; k < rows; ++k) {
            auto at = [](const std::vector<double>& v, std::size_t i) {
                return i < v.size() ? CsvTable::num(v[i]) : std::string();
            };
            t.add_row({run.name, std::to_string(k), k ? at(tr.npc_test, k - 1) : std::string(),
                       k ? at(tr.lambda_min, k - 1) : std::string(), at(tr.model, k), at(tr.xb, k),
                       at(tr.x_mpinv, k), det, its});
        }
    }
    return t;
}

// ---- equivalence ----------------------------------------------------------

EquivResult run_equiv(const EquivConfig& cfg) {
    if (cfg.kind == Symmetry::skew_hermitian) throw std::invalid_argument("equivalence covers Hermitian and CS operators");
    CounterRng rng(cfg.seed, 4);
    const Matrix a = random_matrix(cfg.kind, cfg.d, cfg.rank, rng);
    const Vector b = generic_rhs(cfg.d, rng);
    const DenseOperator op(a, cfg.kind);

    Matrix s_econ;
    Matrix s_root;
    std::optional<Preconditioner> m;
    if (cfg.identity_preconditioner) {
        m = Preconditioner::identity(cfg.d);
        s_econ = Matrix::Identity(cfg.d, cfg.d);
        s_root = rng.unitary(cfg.d);  // S S^H = I as well
    } else {
        const Matrix p = rng.unitary(cfg.d).leftCols(cfg.precon_rank);
        const RealVector lam = positive_weights(cfg.precon_rank, rng);
        m = Preconditioner::from_factors(p, lam);
        s_econ = p * lam.cwiseSqrt().cast<Complex>().asDiagonal();
        s_root = s_econ * p.adjoint();
    }

    SolveOptions opts;
    opts.record_trace = true;
    opts.reorthogonalize = cfg.reorthogonalize;
    const bool cs = cfg.kind == Symmetry::complex_symmetric;
    const SolveReport direct = cs ? psolve_cs(op, *m, b, opts) : psolve_h(op, *m, b, opts);
    const SubsolveResult econ = subsolve(op, DenseSubPreconditioner(s_econ), b, opts);
    const SubsolveResult root = subsolve(op, DenseSubPreconditioner(s_root), b, opts);

    EquivResult res;
    res.psolve_vs_economy = compare_traces(direct, econ.mapped, cfg.tol);
    res.economy_vs_root = compare_traces(econ.mapped, root.mapped, cfg.tol);
    res.passed = !res.psolve_vs_economy.first_divergent && !res.economy_vs_root.first_divergent;
    return res;
}

// ---- deblurring -------------------------------------------------------------

const DeblurEntry* DeblurResult::find(const std::string& solver, double ratio) const {
    for (const DeblurEntry& e : entries)
        if (e.solver == solver && std::abs(e.rank_ratio - ratio) < 1e-12) return &e;
    return nullptr;
}

RealMatrix kronecker_factor(const RealMatrix& z, const RealMatrix& c_hat, Index r, bool range_aligned) {
    const Index n = z.rows();
    if (r < 1 || r > n) throw std::invalid_argument("factor rank out of range");
    const RealMatrix g = range_aligned ? RealMatrix(z * c_hat.leftCols(r)) : RealMatrix(c_hat.leftCols(r));
    Eigen::HouseholderQR<RealMatrix> qr(g);
    const RealMatrix q = qr.householderQ() * RealMatrix::Identity(n, r);
    RealVector sigma(r);
    for (Index i = 0; i < r; ++i) sigma(i) = r == 1 ? 1.0 : 1.0 + static_cast<double>(i) / (r - 1);
    return q * sigma.asDiagonal();
}

std::pair<Vector, Vector> kronecker_subsolve(const RealMatrix& z, const RealMatrix& c, const Vector& b,
                                             std::size_t iterations) {
    const Index n = z.rows();
    const Index r = c.cols();
    require_same_size(n * n, b.size(), "image vector");
    RealMatrix k = c.transpose() * z * c;
    k = 0.5 * (k + k.transpose());
    const RealMatrix bm = unvec(b, n);
    const RealMatrix bt = c.transpose() * bm * c;
    const KroneckerOperator op(k);
    SolveOptions opts;
    opts.max_iterations = iterations;
    const SolveReport rep = solve(op, vec(bt), opts);
    auto map_back = [&](const Vector& v) { return vec(c * unvec(v, r) * c.transpose()); };
    return {map_back(rep.x), map_back(lift(rep))};
}

DeblurResult run_deblur(const DeblurConfig& cfg) {
    DeblurResult res;
    if (cfg.input) {
        res.original = read_image(*cfg.input);
    } else {
        res.original = make_test_image(cfg.n, cfg.channels);
    }
    const Index n = res.original.n;
    if (cfg.bandwidth < 1 || cfg.bandwidth % 2 == 0) throw std::invalid_argument("bandwidth must be odd and positive");
    const RealMatrix z = gaussian_blur_toeplitz(n, cfg.bandwidth, cfg.sigma_blur, cfg.normalize_blur);
    const KroneckerOperator aop(z);

    ImagePlane blurred = res.original;
    for (RealMatrix& ch : blurred.channels) ch = z * ch * z.transpose();
    res.blurred = add_noise(blurred, cfg.sigma_noise, cfg.seed);
    const ImagePlane shown = clamp01(res.blurred);
    res.blurred_psnr = psnr(shown, res.original);
    res.blurred_ssim = ssim(shown, res.original);

    CounterRng rng(cfg.seed, 51);
    const RealMatrix c_hat = rng.normal_matrix(n, n);

    auto run = [&](const std::string& name, double ratio, auto&& per_channel) {
        DeblurEntry e;
        e.solver = name;
        e.rank_ratio = ratio;
        e.image = res.original;
        const auto start = Clock::now();
        for (std::size_t c = 0; c < res.blurred.channels.size(); ++c)
            e.image.channels[c] = unvec(per_channel(vec(res.blurred.channels[c])), n);
        e.seconds = seconds_since(start);
        e.image = clamp01(e.image);
        e.psnr = psnr(e.image, res.original);
        e.ssim = ssim(e.image, res.original);
        res.entries.push_back(std::move(e));
    };

    SolveOptions opts;
    opts.max_iterations = cfg.iterations;
    std::vector<Vector> lifted_cache;
    run("minres", 0.0, [&](const Vector& b) {
        const SolveReport rep = solve(aop, b, opts);
        lifted_cache.push_back(lift(rep));
        return rep.x;
    });
    std::size_t next = 0;
    run("minres_lifted", 0.0, [&](const Vector&) { return lifted_cache[next++]; });
    res.entries.back().seconds += res.entries[res.entries.size() - 2].seconds;
    run("lsqr", 0.0, [&](const Vector& b) { return lsqr(aop, b, cfg.iterations).x; });

    for (double ratio : cfg.rank_ratios) {
        if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("rank ratios must lie in (0, 1]");
        const Index r = std::clamp<Index>(static_cast<Index>(std::lround(n * std::sqrt(ratio))), 1, n);
        const double actual = static_cast<double>(r * r) / static_cast<double>(n * n);
        run("tsvd", actual, [&](const Vector& b) { return tsvd_kronecker(z, b, r).x; });
        for (int which = 1; which <= 2; ++which) {
            const RealMatrix c = kronecker_factor(z, c_hat, r, which == 1);
            const std::string name = which == 1 ? "s1" : "s2";
            std::vector<Vector> lifted;
            run(name, actual, [&](const Vector& b) {
                auto [x, xl] = kronecker_subsolve(z, c, b, cfg.iterations);
                lifted.push_back(std::move(xl));
                return x;
            });
            std::size_t k = 0;
            run(name + "_lifted", actual, [&](const Vector&) { return lifted[k++]; });
            res.entries.back().seconds += res.entries[res.entries.size() - 2].seconds;
        }
    }
    return res;
}

CsvTable deblur_table(const DeblurConfig& cfg, const DeblurResult& res, bool timings) {
    CsvTable t({"solver", "rank_ratio", "psnr", "ssim", "seconds"});
    t.set_config("command", "deblur");
    t.set_config("n", std::to_string(res.original.n));
    t.set_config("bandwidth", std::to_string(cfg.bandwidth));
    t.set_config("sigma_blur", CsvTable::num(cfg.sigma_blur));
    t.set_config("sigma_noise", CsvTable::num(cfg.sigma_noise));
    t.set_config("iterations", std::to_string(cfg.iterations));
    std::string ratios;
    for (double r : cfg.rank_ratios) ratios += (ratios.empty() ? "" : ";") + CsvTable::num(r);
    t.set_config("rank_ratios", ratios);
    t.set_config("seed", std::to_string(cfg.seed));
    t.set_config("channels", std::to_string(res.original.channel_count()));
    t.set_config("normalize_blur", yes_no(cfg.normalize_blur));
    t.set_config("input", cfg.input ? *cfg.input : "synthetic");
    t.set_config("timings", yes_no(timings));
    t.add_row({"blurred", "0", CsvTable::num(res.blurred_psnr), CsvTable::num(res.blurred_ssim), "na"});
    for (const DeblurEntry& e : res.entries)
        t.add_row({e.solver, CsvTable::num(e.rank_ratio), CsvTable::num(e.psnr), CsvTable::num(e.ssim),
                   timings ? CsvTable::num(e.seconds) : std::string("na")});
    return t;
}

}  // namespace pinvminres
