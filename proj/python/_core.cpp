// Python bindings: dense front ends for the solvers plus the deblurring experiment.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pinvminres/experiments.hpp"
#include "pinvminres/minres.hpp"
#include "pinvminres/minres_cs.hpp"
#include "pinvminres/oracle.hpp"
#include "pinvminres/pminres.hpp"

namespace py = pybind11;
using namespace pinvminres;

namespace {

SolveOptions options(std::size_t max_iter, bool reorth, std::optional<double> residual_target) {
    SolveOptions o;
    o.max_iterations = max_iter;
    o.reorthogonalize = reorth;
    o.residual_target = residual_target;
    return o;
}

py::dict report_dict(const SolveReport& rep, const Vector& lifted) {
    py::dict d;
    d["x"] = rep.x;
    d["lifted"] = lifted;
    d["residual"] = rep.residual;
    d["iterations"] = rep.iterations;
    d["termination"] = to_string(rep.termination);
    d["grade"] = rep.grade ? py::cast(*rep.grade) : py::none();
    d["kind"] = to_string(rep.kind);
    if (rep.preconditioned) d["residual_breve"] = rep.residual_breve;
    return d;
}

py::dict solve_dense(const Matrix& a, const Vector& b, const std::string& kind, std::size_t max_iter, bool reorth,
                     std::optional<double> residual_target) {
    const Symmetry k = parse_symmetry(kind);
    const DenseOperator op(a, k);
    const SolveOptions o = options(max_iter, reorth, residual_target);
    SolveReport rep;
    switch (k) {
        case Symmetry::hermitian: rep = solve(op, b, o); break;
        case Symmetry::skew_hermitian: rep = solve_skew(op, b, o); break;
        case Symmetry::complex_symmetric: rep = solve_cs(op, b, o); break;
    }
    return report_dict(rep, lift(rep));
}

py::dict psolve_dense(const Matrix& a, const Matrix& m, const Vector& b, const std::string& kind,
                      std::size_t max_iter, bool reorth) {
    const Symmetry k = parse_symmetry(kind);
    if (k == Symmetry::skew_hermitian) throw std::invalid_argument("preconditioned solves take hermitian or cs");
    const DenseOperator op(a, k);
    const Preconditioner pm = Preconditioner::dense(m);
    const SolveOptions o = options(max_iter, reorth, std::nullopt);
    const SolveReport rep = k == Symmetry::hermitian ? psolve_h(op, pm, b, o) : psolve_cs(op, pm, b, o);
    return report_dict(rep, plift(rep));
}

Matrix random_dense(const std::string& kind, Index d, Index rank, std::uint64_t seed, std::uint64_t stream) {
    if (d < 1 || rank < 0 || rank > d) throw std::invalid_argument("need d >= 1 and 0 <= rank <= d");
    CounterRng rng(seed, stream);
    return random_matrix(parse_symmetry(kind), d, rank, rng);
}

py::dict deblur(Index n, Index bandwidth, double sigma_blur, double sigma_noise, std::size_t iterations,
                std::vector<double> rank_ratios, std::uint64_t seed, bool normalize_blur) {
    DeblurConfig cfg;
    cfg.n = n;
    cfg.bandwidth = bandwidth;
    cfg.sigma_blur = sigma_blur;
    cfg.sigma_noise = sigma_noise;
    cfg.iterations = iterations;
    cfg.rank_ratios = std::move(rank_ratios);
    cfg.seed = seed;
    cfg.normalize_blur = normalize_blur;
    const DeblurResult res = run_deblur(cfg);
    py::dict out;
    out["blurred_psnr"] = res.blurred_psnr;
    out["blurred_ssim"] = res.blurred_ssim;
    py::list entries;
    for (const DeblurEntry& e : res.entries) {
        py::dict row;
        row["solver"] = e.solver;
        row["rank_ratio"] = e.rank_ratio;
        row["psnr"] = e.psnr;
        row["ssim"] = e.ssim;
        row["image"] = e.image.channels.front();
        entries.append(row);
    }
    out["entries"] = entries;
    out["original"] = res.original.channels.front();
    out["blurred"] = res.blurred.channels.front();
    out["csv"] = deblur_table(cfg, res).str();
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MINRES variants that return pseudo-inverse solutions";

    py::register_exception<SolverError>(m, "SolverError", PyExc_ArithmeticError);

    m.def("solve", &solve_dense, py::arg("a"), py::arg("b"), py::arg("kind") = "hermitian",
          py::arg("max_iter") = 0, py::arg("reorth") = false, py::arg("residual_target") = py::none(),
          "Run MINRES on a dense matrix. 'lifted' in the result is the minimum-norm solution.");
    m.def("psolve", &psolve_dense, py::arg("a"), py::arg("m"), py::arg("b"), py::arg("kind") = "hermitian",
          py::arg("max_iter") = 0, py::arg("reorth") = false,
          "Preconditioned MINRES with a dense PSD preconditioner M.");
    m.def("pinv", [](const Matrix& a) { return pinv(a); }, py::arg("a"), "SVD pseudo-inverse used as reference.");
    m.def("random_matrix", &random_dense, py::arg("kind"), py::arg("d"), py::arg("rank"), py::arg("seed") = 0,
          py::arg("stream") = 0);
    m.def("deblur", &deblur, py::arg("n") = 64, py::arg("bandwidth") = 9, py::arg("sigma_blur") = 2.0,
          py::arg("sigma_noise") = 1e-2, py::arg("iterations") = 30,
          py::arg("rank_ratios") = std::vector<double>{0.04, 0.16}, py::arg("seed") = 0,
          py::arg("normalize_blur") = false, "Deblur the synthetic test image; returns PSNR per solver.");
}
