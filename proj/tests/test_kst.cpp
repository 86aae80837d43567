#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "splinekit/kst.hpp"

using namespace splinekit;
using namespace splinekit::kst;

TEST_CASE("inner functions are strictly increasing with range [0, 1]") {
    InnerFunctions inner = build_inner_functions(5);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int q = 0; q < 5; ++q) {
        CHECK(inner.phi(q, 0.0) == 0.0);
        CHECK(inner.phi(q, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
        for (int trial = 0; trial < 2000; ++trial) {
            double a = uni(rng), b = uni(rng);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            CHECK(inner.phi(q, a) < inner.phi(q, b));
        }
    }
}

TEST_CASE("tables nest across resolutions") {
    InnerFunctions coarse = build_inner_functions(4);
    InnerFunctions fine = build_inner_functions(5);
    long n = static_cast<long>(coarse.phi_tab[0].size()) - 1;
    for (int q = 0; q < 5; ++q)
        for (long j = 0; j <= n; ++j) {
            double x = double(j) / n;
            CHECK(std::abs(coarse.phi(q, x) - fine.phi(q, x)) < std::pow(6.0, -4));
            if (j < n)  // shared grid point: digit extension by zeros is exact
                CHECK(coarse.phi_tab[q][j] == fine.phi_tab[q][j * 6]);
        }
}

TEST_CASE("the five inner functions are pairwise distinct") {
    InnerFunctions inner = build_inner_functions(4);
    long n = static_cast<long>(inner.phi_tab[0].size());
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) {
            double diff = 0;
            for (long j = 0; j < n; ++j)
                diff = std::max(diff, std::abs(inner.phi_tab[a][j] - inner.phi_tab[b][j]));
            CHECK(diff > 1e-3);
        }
}

TEST_CASE("lambda weights keep the inner argument inside [0, 2]") {
    InnerFunctions inner = build_inner_functions(4);
    CHECK(inner.lambda[0] + inner.lambda[1] < 1.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int trial = 0; trial < 500; ++trial) {
        Point2 p{uni(rng), uni(rng)};
        for (int q = 0; q < 5; ++q) {
            double t = inner.inner_arg(q, p);
            CHECK(t >= 0.0);
            CHECK(t <= 2.0);
        }
    }
}

TEST_CASE("K-polynomial degenerate cases") {
    InnerFunctions inner = build_inner_functions(4);
    CHECK(k_polynomial(inner, 0, {0.3, 0.7}) == doctest::Approx(5.0).epsilon(1e-15));
    double s = 0;
    for (int q = 0; q < 5; ++q) s += inner.inner_arg(q, {0.3, 0.7});
    CHECK(k_polynomial(inner, 1, {0.3, 0.7}) == doctest::Approx(s).epsilon(1e-14));
    CHECK(k_polynomial(inner, 4, {0.9, 0.1}) >= 0.0);
}

TEST_CASE("univariate B-splines form a partition of unity") {
    KBBasis basis = make_kb_basis(build_inner_functions(3), 6);
    for (double t : {0.0, 0.01, 0.3, 0.777, 1.0, 1.5, 1.999, 2.0}) {
        double s = 0;
        for (int i = 0; i < basis.size(); ++i) {
            double v = basis.bspline(i, t);
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        int first;
        std::vector<double> vals;
        basis.bspline_nonzero(t, first, vals);
        REQUIRE(static_cast<int>(vals.size()) == basis.k + 1);
        for (int r = 0; r <= basis.k; ++r)
            CHECK(vals[r] == doctest::Approx(basis.bspline(first + r, t)).epsilon(1e-13));
    }
}

TEST_CASE("KB basis sums to 2d+1 and is nonnegative") {
    KBBasis basis = make_kb_basis(build_inner_functions(4), 8);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        Point2 p{uni(rng), uni(rng)};
        Eigen::VectorXd all = kb_eval_all(basis, p);
        CHECK(all.sum() == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(all.minCoeff() >= 0.0);
        for (int i = 0; i < basis.size(); i += 5)
            CHECK(all[i] == doctest::Approx(kb_eval(basis, i, p)).epsilon(1e-13));
    }
}

TEST_CASE("LKB smoothing certifies C2 and reproduces constants through DLS") {
    KBBasis kb = make_kb_basis(build_inner_functions(4), 4);
    LKBBasis lkb = lkb_build(kb, 41, 1.0);
    CHECK(lkb.max_smoothness_violation < 1e-8);
    for (int i = 0; i < lkb.kb.size(); ++i) CHECK(lkb.spline(i).certified);
    DlsResult constant = dls_fit(lkb, [](double, double) { return 3.0; }, 41, 101);
    CHECK(constant.rmse_train < 1e-8);
    CHECK(constant.rmse_test < 1e-8);
}

TEST_CASE("penalized smoothing has no more energy than the unpenalized fit") {
    KBBasis kb = make_kb_basis(build_inner_functions(4), 4);
    LKBBasis smooth = lkb_build(kb, 31, 1.0);
    LKBBasis rough = lkb_build(kb, 31, 0.0);
    Eigen::SparseMatrix<double> E = energy_matrix(*smooth.space);
    for (int i = 0; i < kb.size(); ++i) {
        double es = smooth.coeffs.col(i).dot(E * smooth.coeffs.col(i));
        double er = rough.coeffs.col(i).dot(E * rough.coeffs.col(i));
        CHECK(es <= er + 1e-8);
    }
}

TEST_CASE("LKB basis round-trips through disk") {
    KBBasis kb = make_kb_basis(build_inner_functions(3), 3);
    LKBBasis lkb = lkb_build(kb, 21, 1.0);
    std::string dir = "lkb_roundtrip";
    save_lkb(lkb, dir);
    LKBBasis back = load_lkb(dir);
    CHECK(back.kb.n == kb.n);
    CHECK(back.kb.inner.resolution == 3);
    CHECK((back.coeffs - lkb.coeffs).lpNorm<Eigen::Infinity>() < 1e-15);
    std::filesystem::remove_all(dir);
}

TEST_CASE("benchmark report has the documented shape") {
    BenchmarkReport rep = benchmark_suite({4}, 3, 21, 41);
    CHECK(rep.names.size() == 10);
    CHECK(rep.rmse_test.rows() == 10);
    CHECK(rep.rmse_test.cols() == 1);
    CHECK(rep.rmse_test.minCoeff() >= 0.0);
}
