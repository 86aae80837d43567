#include "splinekit/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace splinekit::quadrature {

void gauss_legendre01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("quadrature: n >= 1 required");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-based initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], reversed order is harmless
        weights[i] = 1.0 / ((1 - x * x) * dp * dp);
    }
}

std::vector<QuadPoint> triangle_rule(const std::array<Point2, 3>& v, int deg) {
    if (deg < 0) deg = 0;
    // Duffy: (u,t) in [0,1]^2 -> b = (1-u, u(1-t), ut), Jacobian factor u.
    // The integrand for a degree-p polynomial is degree <= p+1 in u and
    // <= p in t, so n Gauss points per axis suffice when 2n-1 >= p+1.
    int n = (deg + 3) / 2;
    std::vector<double> xs, ws;
    gauss_legendre01(n, xs, ws);
    double area = std::abs(signed_area(v[0], v[1], v[2]));
    std::vector<QuadPoint> rule;
    rule.reserve(n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double u = xs[i], t = xs[j];
            double b1 = 1 - u, b2 = u * (1 - t), b3 = u * t;
            QuadPoint q;
            q.p = {b1 * v[0].x + b2 * v[1].x + b3 * v[2].x,
                   b1 * v[0].y + b2 * v[1].y + b3 * v[2].y};
            q.w = 2.0 * area * u * ws[i] * ws[j];
            rule.push_back(q);
        }
    }
    return rule;
}

}  // namespace splinekit::quadrature
