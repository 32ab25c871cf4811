#include <doctest.h>

#include "pinvminres/experiments.hpp"
#include "pinvminres/oracle.hpp"
#include "pinvminres/precon_factory.hpp"
#include "support.hpp"

using namespace pinvminres;

TEST_CASE("full-rank random member is positive definite") {
    CounterRng rng(1, 2);
    const Matrix a = random_hermitian(10, 7, rng);
    RankFamilySpec spec;
    spec.dimension = 10;
    spec.ranks = {10};
    const auto fam = make_rank_family(spec, &a);
    REQUIRE(fam.size() == 1);
    CHECK(fam[0].m.rank().value() == 10);
    CHECK(fam[0].m.probe_psd());
    CHECK(check_rank_assumptions(a, fam[0].p, Symmetry::hermitian).a_holds);
}

TEST_CASE("range-preserved family: exact at i = r, b holds below") {
    for (Symmetry kind : {Symmetry::hermitian, Symmetry::complex_symmetric}) {
        CounterRng rng(3, 2);
        const Matrix a = random_matrix(kind, 20, 15, rng);
        RankFamilySpec spec;
        spec.dimension = 20;
        spec.kind = kind;
        spec.source = BasisSource::range_preserved;
        const auto fam = make_rank_family(spec, &a);
        REQUIRE(fam.size() == 20);
        const Matrix u = range_basis(kind == Symmetry::complex_symmetric ? Matrix(a.conjugate()) : a);
        const Matrix p15 = fam[14].p;
        CHECK((p15 * p15.adjoint() - u * u.adjoint()).norm() < 1e-10);
        for (Index i = 0; i < 15; ++i) CHECK(check_rank_assumptions(a, fam[static_cast<std::size_t>(i)].p, kind).b_holds);

        SolveOptions o;
        o.reorthogonalize = true;
        const auto rows = run_error_sweep(a, Vector::Ones(20), fam, kind, o);
        CHECK(rows[14].e_x <= 1e-8);
        for (const ErrorRow& r : rows) {
            CAPTURE(r.rank);
            if (r.b_holds) CHECK(r.e_p <= 1e-8);
            if (r.b_holds) CHECK(r.norm_mr <= 1e-8);
            if (r.a_holds) CHECK(r.norm_amr <= 1e-8);
        }
    }
}

TEST_CASE("random family never recovers A^+ b exactly") {
    for (Symmetry kind : {Symmetry::hermitian, Symmetry::complex_symmetric}) {
        SweepConfig cfg;
        cfg.kind = kind;
        const SweepResult res = run_precon_sweep(cfg);
        for (const ErrorRow& r : res.random_family) {
            CAPTURE(r.rank);
            CHECK(r.e_x > 1e-3);
            if (r.b_holds) CHECK(r.e_p <= 1e-8);
        }
    }
}

TEST_CASE("family members share weights and have orthonormal bases") {
    RankFamilySpec spec;
    spec.dimension = 8;
    spec.source = BasisSource::sketch;
    spec.seed = 4;
    const auto fam = make_rank_family(spec);
    REQUIRE(fam.size() == 8);
    for (const auto& m : fam) {
        CHECK((m.p.adjoint() * m.p - Matrix::Identity(m.rank, m.rank)).norm() < 1e-12);
        CHECK((m.weights - fam.back().weights.head(m.rank)).norm() == 0.0);
    }
    CHECK_THROWS(make_rank_family([] {
        RankFamilySpec s;
        s.dimension = 4;
        s.source = BasisSource::range_preserved;
        return s;
    }()));
}

TEST_CASE("basis source names round-trip") {
    for (BasisSource s : {BasisSource::random_psd_svd, BasisSource::range_preserved, BasisSource::eigen_positive,
                          BasisSource::sketch, BasisSource::eigen_all})
        CHECK(parse_basis_source(to_string(s)) == s);
    CHECK_THROWS(parse_basis_source("nope"));
}

TEST_CASE("npc problem spectrum") {
    const NpcProblem p = make_npc_problem(20, 15, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p.a);
    const RealVector ev = eig.eigenvalues();
    CHECK(ev(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev(19) == doctest::Approx(100.0).epsilon(1e-12));
    int zeros = 0;
    for (Index i = 0; i < 20; ++i) zeros += std::abs(ev(i)) < 1e-10;
    CHECK(zeros == 5);
}
