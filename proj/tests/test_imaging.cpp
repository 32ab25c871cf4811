#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "pinvminres/csv.hpp"
#include "pinvminres/experiments.hpp"
#include "pinvminres/imaging.hpp"
#include "support.hpp"

using namespace pinvminres;

namespace {

ImagePlane random_plane(Index n, int channels, std::uint64_t seed) {
    ImagePlane p = make_plane(n, channels);
    CounterRng rng(seed, 3);
    for (RealMatrix& c : p.channels)
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i) c(i, j) = rng.uniform();
    return p;
}

double max_diff(const ImagePlane& a, const ImagePlane& b) {
    double m = 0;
    for (std::size_t c = 0; c < a.channels.size(); ++c)
        m = std::max(m, (a.channels[c] - b.channels[c]).cwiseAbs().maxCoeff());
    return m;
}

}  // namespace

TEST_CASE("pgm and ppm round trips within quantization") {
    for (int channels : {1, 3}) {
        const ImagePlane p = random_plane(16, channels, static_cast<std::uint64_t>(channels));
        const ImagePlane q = decode_pnm(encode_pnm(p));
        CHECK(q.channel_count() == channels);
        CHECK(max_diff(p, q) <= 0.5 / 255 + 1e-12);
    }
    const auto path = std::filesystem::temp_directory_path() / "pinvminres_roundtrip.pgm";
    const ImagePlane p = random_plane(16, 1, 9);
    write_image(p, path.string());
    CHECK(max_diff(p, read_image(path.string())) <= 1.0 / 255);
    std::filesystem::remove(path);
}

TEST_CASE("malformed images report byte offsets") {
    const std::string good = encode_pnm(random_plane(4, 1, 1));
    try {
        decode_pnm(good.substr(0, good.size() - 3));
        FAIL("expected an error");
    } catch (const ImageError& e) {
        CHECK(std::string(e.what()).find("missing 3 of 16 bytes") != std::string::npos);
    }
    CHECK_THROWS_AS(decode_pnm("P5\n4 5\n255\n" + std::string(20, 'a')), ImageError);
    CHECK_THROWS_AS(decode_pnm("P5\n4 4\n65535\n" + std::string(32, 'a')), ImageError);
    CHECK_THROWS_AS(decode_pnm("P2\n4 4\n255\n"), ImageError);
    try {
        decode_pnm("P5\n# comment\n4 x\n");
        FAIL("expected an error");
    } catch (const ImageError& e) {
        CHECK(e.offset() == 15);
    }
}

TEST_CASE("psnr values") {
    const ImagePlane x = random_plane(12, 1, 2);
    CHECK(psnr_is_infinite(psnr(x, x)));
    ImagePlane y = x;
    y.channels[0].array() += 0.1;
    CHECK(psnr(x, y) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(psnr(x, y) == psnr(y, x));
    double last = INFINITY;
    for (double amp : {0.01, 0.02, 0.05, 0.1}) {
        ImagePlane z = x;
        z.channels[0].array() += amp;
        CHECK(psnr(x, z) < last);
        last = psnr(x, z);
    }
    CHECK_THROWS(psnr(x, random_plane(13, 1, 2)));
}

TEST_CASE("ssim values") {
    const ImagePlane x = random_plane(32, 1, 4);
    CHECK(ssim(x, x) == 1.0);
    const ImagePlane half = make_plane(16, 1, 0.5);
    ImagePlane flipped = half;
    flipped.channels[0] = (1.0 - half.channels[0].array()).matrix();
    CHECK(ssim(half, flipped) == 1.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const ImagePlane a = random_plane(32, 1, 100 + s), b = random_plane(32, 1, 200 + s);
        CHECK(ssim(a, b) < 0.2);
        CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
    }
    CHECK_THROWS(ssim(make_plane(10, 1), make_plane(10, 1)));
}

TEST_CASE("add_noise") {
    const ImagePlane x = random_plane(16, 1, 5);
    CHECK(max_diff(add_noise(x, 0.0, 1), x) == 0.0);
    CHECK(max_diff(add_noise(x, 0.1, 7), add_noise(x, 0.1, 7)) == 0.0);
    CHECK(max_diff(add_noise(x, 0.1, 7), add_noise(x, 0.1, 8)) > 0.0);
    const ImagePlane zero = make_plane(1000, 1);
    const double mean = add_noise(zero, 1.0, 3).channels[0].mean();
    CHECK(std::abs(mean) <= 3.0 / 1000.0);
    CHECK_THROWS(add_noise(x, -1.0, 0));
}

TEST_CASE("vec and unvec are column-major inverses") {
    RealMatrix m(2, 2);
    m << 1, 2, 3, 4;
    const Vector v = vec(m);
    CHECK(v(1).real() == 3.0);
    CHECK((unvec(v, 2) - m).norm() == 0.0);
}

TEST_CASE("csv format and parse") {
    CsvTable t({"a", "b"});
    t.set_config("k", "v");
    t.add_row({CsvTable::num(0.1), CsvTable::num(static_cast<long long>(3))});
    t.add_row({CsvTable::num(std::nan("")), CsvTable::num(-INFINITY)});
    const std::string s = t.str();
    CHECK(s.rfind("pinv-minres-csv v1\n# k=v\na,b\n0.10000000000000001,3\n", 0) == 0);
    const CsvTable back = parse_csv(s);
    CHECK(back.str() == s);
    CHECK(back.config_value("k") == "v");
    CHECK(back.cell(1, "b") == "-inf");
    CHECK_THROWS(t.add_row({"1"}));
    CHECK_THROWS(t.add_row({"1,2", "3"}));
    CHECK_THROWS(parse_csv("a,b\n"));
}

TEST_CASE("identity blur without noise returns the input") {
    DeblurConfig cfg;
    cfg.n = 16;
    cfg.bandwidth = 1;
    cfg.sigma_noise = 0.0;
    cfg.rank_ratios = {1.0};
    const DeblurResult r = run_deblur(cfg);
    CHECK(max_diff(r.blurred, r.original) == 0.0);
    for (const char* s : {"minres", "minres_lifted", "lsqr"}) CHECK(max_diff(r.find(s)->image, r.original) < 1e-12);
    CHECK(max_diff(r.find("tsvd", 1.0)->image, r.original) < 1e-12);
}

TEST_CASE("kronecker subsolve maps back through C") {
    const RealMatrix z = gaussian_blur_toeplitz(8, 3, 1.0);
    const RealMatrix c_hat = CounterRng(1, 51).normal_matrix(8, 8);
    const RealMatrix c = kronecker_factor(z, c_hat, 8, true);
    // full-rank C: the reduced problem is equivalent to the original one
    const Vector b = vec(CounterRng(2).normal_matrix(8, 8));
    auto [x, xl] = kronecker_subsolve(z, c, b, 64);
    const RealMatrix dense = testref::kron(z, z);
    CHECK(testref::rel(xl, dense.cast<Complex>().lu().solve(b)) <= 1e-8);
    const RealMatrix c2 = kronecker_factor(z, c_hat, 3, false);
    CHECK(c2.cols() == 3);
    CHECK((c2.transpose() * c2).diagonal().maxCoeff() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("deblur table is reproducible and carries the config") {
    DeblurConfig cfg;
    cfg.n = 24;
    cfg.bandwidth = 5;
    cfg.iterations = 8;
    cfg.rank_ratios = {0.25};
    const std::string a = deblur_table(cfg, run_deblur(cfg)).str();
    const std::string b = deblur_table(cfg, run_deblur(cfg)).str();
    CHECK(a == b);
    const CsvTable t = parse_csv(a);
    CHECK(t.config_value("bandwidth") == "5");
    CHECK(t.rows().size() == 1 + 3 + 5);
    CHECK(t.cell(0, "solver") == "blurred");
}

TEST_CASE("synthetic run: lifted error collapses, plain does not") {
    for (Symmetry kind : {Symmetry::hermitian, Symmetry::skew_hermitian, Symmetry::complex_symmetric}) {
        SyntheticConfig cfg;
        cfg.kind = kind;
        const SyntheticResult r = run_synthetic(cfg);
        CHECK(r.final_lifted <= 1e-8);
        CHECK(r.final_plain > 1e-2);
        CHECK(synthetic_table(cfg, r).str() == synthetic_table(cfg, run_synthetic(cfg)).str());
    }
    SyntheticConfig one;
    one.d = 1;
    one.rank = 0;
    const SyntheticResult r = run_synthetic(one);
    CHECK(r.report.iterations == 1);
}
