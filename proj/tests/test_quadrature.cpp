#include <doctest.h>

#include <cmath>

#include "splinekit/quadrature.hpp"

using namespace splinekit;
using namespace splinekit::quadrature;

namespace {

// Exact integral of x^p y^q over the reference triangle {x,y >= 0, x+y <= 1}:
// p! q! / (p+q+2)!.
double ref_monomial(int p, int q) {
    double v = 1.0;
    for (int i = 1; i <= p; ++i) v *= i;
    for (int i = 1; i <= q; ++i) v *= i;
    for (int i = 1; i <= p + q + 2; ++i) v /= i;
    return v;
}

}  // namespace

TEST_CASE("Gauss-Legendre nodes integrate polynomials on [0,1]") {
    std::vector<double> nodes, weights;
    for (int n : {1, 2, 5, 10}) {
        gauss_legendre01(n, nodes, weights);
        REQUIRE(static_cast<int>(nodes.size()) == n);
        double w = 0;
        for (double wi : weights) w += wi;
        CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
        // Exact through degree 2n-1.
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double acc = 0;
            for (int i = 0; i < n; ++i) acc += weights[i] * std::pow(nodes[i], p);
            CHECK(acc == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("triangle rule is exact to the requested degree") {
    std::array<Point2, 3> ref = {{{0, 0}, {1, 0}, {0, 1}}};
    for (int deg : {1, 3, 7, 12}) {
        auto rule = triangle_rule(ref, deg);
        for (int p = 0; p <= deg; ++p) {
            for (int q = 0; p + q <= deg; ++q) {
                double acc = 0;
                for (const auto& pt : rule) acc += pt.w * std::pow(pt.p.x, p) * std::pow(pt.p.y, q);
                CHECK(acc == doctest::Approx(ref_monomial(p, q)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("weights sum to the triangle area on a skew triangle") {
    std::array<Point2, 3> v = {{{0.2, -0.1}, {1.3, 0.4}, {0.5, 1.1}}};
    double area = 0.5 * std::abs((v[1].x - v[0].x) * (v[2].y - v[0].y) -
                                 (v[2].x - v[0].x) * (v[1].y - v[0].y));
    double w = 0;
    for (const auto& pt : triangle_rule(v, 5)) w += pt.w;
    CHECK(w == doctest::Approx(area).epsilon(1e-13));
}

TEST_CASE("affine invariance: linear function integrates to centroid value times area") {
    std::array<Point2, 3> v = {{{1, 1}, {3, 1.5}, {1.5, 4}}};
    double area = 0.5 * std::abs((v[1].x - v[0].x) * (v[2].y - v[0].y) -
                                 (v[2].x - v[0].x) * (v[1].y - v[0].y));
    double cx = (v[0].x + v[1].x + v[2].x) / 3, cy = (v[0].y + v[1].y + v[2].y) / 3;
    double acc = 0;
    for (const auto& pt : triangle_rule(v, 2)) acc += pt.w * (2 * pt.p.x - pt.p.y + 1);
    CHECK(acc == doctest::Approx(area * (2 * cx - cy + 1)).epsilon(1e-13));
}
