#include "splinekit/bform.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace splinekit::bform {

namespace {

void check_degree(int d) {
    if (d < 0 || d > kMaxDegree) throw std::invalid_argument("bform: degree out of range [0,18]");
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Barycentric gradient coordinates of a Cartesian direction u: the triple
// a with sum 0 such that D_u b_i = a_i.
std::array<double, 3> direction_coords(const std::array<Point2, 3>& v, double ux, double uy) {
    double area2 = 2.0 * signed_area(v[0], v[1], v[2]);
    if (std::abs(area2) < 1e-300) throw std::invalid_argument("bform: degenerate triangle");
    // grad b1 = rot90(v3 - v2) / (2 area), cyclically.
    std::array<double, 3> a{};
    for (int i = 0; i < 3; ++i) {
        const Point2& p = v[(i + 1) % 3];
        const Point2& q = v[(i + 2) % 3];
        double gx = (p.y - q.y) / area2;
        double gy = (q.x - p.x) / area2;
        a[i] = gx * ux + gy * uy;
    }
    return a;
}

}  // namespace

int coeff_count(int d) {
    check_degree(d);
    return (d + 2) * (d + 1) / 2;
}

const std::vector<MultiIndex>& multi_indices(int d) {
    check_degree(d);
    static std::map<int, std::vector<MultiIndex>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    std::vector<MultiIndex> mis;
    for (int a1 = d; a1 >= 0; --a1)
        for (int a2 = d - a1; a2 >= 0; --a2)
            mis.push_back({a1, a2, d - a1 - a2});
    return cache.emplace(d, std::move(mis)).first->second;
}

int mi_index(int d, int a1, int a2) {
    int m = d - a1;
    return m * (m + 1) / 2 + (m - a2);
}

Bary barycentric(const std::array<Point2, 3>& v, const Point2& p) {
    double area = signed_area(v[0], v[1], v[2]);
    if (std::abs(area) < 1e-300) throw std::invalid_argument("bform: degenerate triangle");
    Bary b;
    b.b1 = signed_area(p, v[1], v[2]) / area;
    b.b2 = signed_area(v[0], p, v[2]) / area;
    b.b3 = signed_area(v[0], v[1], p) / area;
    return b;
}

Point2 from_barycentric(const std::array<Point2, 3>& v, const Bary& b) {
    return {b.b1 * v[0].x + b.b2 * v[1].x + b.b3 * v[2].x,
            b.b1 * v[0].y + b.b2 * v[1].y + b.b3 * v[2].y};
}

std::vector<Point2> domain_points(int d, const std::array<Point2, 3>& v) {
    if (d < 1) throw std::invalid_argument("bform: domain_points requires d >= 1");
    std::vector<Point2> pts;
    for (const auto& mi : multi_indices(d))
        pts.push_back({(mi.a1 * v[0].x + mi.a2 * v[1].x + mi.a3 * v[2].x) / d,
                       (mi.a1 * v[0].y + mi.a2 * v[1].y + mi.a3 * v[2].y) / d});
    return pts;
}

double eval_bform(int d, const Eigen::VectorXd& coeffs, const Bary& b) {
    check_degree(d);
    if (coeffs.size() != coeff_count(d)) throw std::invalid_argument("bform: coefficient length mismatch");
    // Triangular array indexed by (a1, a2) at each level.
    std::vector<double> work(coeffs.data(), coeffs.data() + coeffs.size());
    for (int m = d; m >= 1; --m) {
        // Level m-1 from level m; index layout stays canonical for each level.
        std::vector<double> next(coeff_count(m - 1));
        for (const auto& mi : multi_indices(m - 1)) {
            next[mi_index(m - 1, mi.a1, mi.a2)] =
                b.b1 * work[mi_index(m, mi.a1 + 1, mi.a2)] +
                b.b2 * work[mi_index(m, mi.a1, mi.a2 + 1)] +
                b.b3 * work[mi_index(m, mi.a1, mi.a2)];
        }
        work.swap(next);
    }
    return work[0];
}

Eigen::RowVectorXd eval_basis_row(int d, const Bary& b) {
    check_degree(d);
    // Factorials up to 18 are exact in double.
    static const auto fact = [] {
        std::array<double, kMaxDegree + 1> f{};
        f[0] = 1;
        for (int i = 1; i <= kMaxDegree; ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    const auto& mis = multi_indices(d);
    Eigen::RowVectorXd row(mis.size());
    for (size_t i = 0; i < mis.size(); ++i) {
        const auto& mi = mis[i];
        row[i] = fact[d] / (fact[mi.a1] * fact[mi.a2] * fact[mi.a3]) *
                 std::pow(b.b1, mi.a1) * std::pow(b.b2, mi.a2) * std::pow(b.b3, mi.a3);
    }
    return row;
}

Eigen::MatrixXd directional_reduction(int d, const std::array<Point2, 3>& v, double ux, double uy) {
    check_degree(d);
    if (d < 1) throw std::invalid_argument("bform: reduction needs d >= 1");
    auto a = direction_coords(v, ux, uy);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(coeff_count(d - 1), coeff_count(d));
    for (const auto& mi : multi_indices(d - 1)) {
        int r = mi_index(d - 1, mi.a1, mi.a2);
        D(r, mi_index(d, mi.a1 + 1, mi.a2)) += d * a[0];
        D(r, mi_index(d, mi.a1, mi.a2 + 1)) += d * a[1];
        D(r, mi_index(d, mi.a1, mi.a2)) += d * a[2];
    }
    return D;
}

std::vector<Eigen::RowVectorXd> derivative_rows(int d, const std::array<Point2, 3>& v,
                                                const Bary& b,
                                                const std::vector<std::pair<int, int>>& orders) {
    check_degree(d);
    std::vector<Eigen::RowVectorXd> rows;
    for (auto [px, py] : orders) {
        int total = px + py;
        if (px < 0 || py < 0 || total > 2)
            throw std::invalid_argument("bform: derivative order must have total <= 2");
        if (total > d) {
            rows.push_back(Eigen::RowVectorXd::Zero(coeff_count(d)));
            continue;
        }
        Eigen::MatrixXd reduce = Eigen::MatrixXd::Identity(coeff_count(d), coeff_count(d));
        int deg = d;
        for (int i = 0; i < px; ++i) reduce = (directional_reduction(deg--, v, 1, 0) * reduce).eval();
        for (int i = 0; i < py; ++i) reduce = (directional_reduction(deg--, v, 0, 1) * reduce).eval();
        rows.push_back(eval_basis_row(deg, b) * reduce);
    }
    return rows;
}

Eigen::MatrixXd product_integral_matrix(int d, const std::array<Point2, 3>& v) {
    check_degree(d);
    double area = std::abs(signed_area(v[0], v[1], v[2]));
    if (area < 1e-300) throw std::invalid_argument("bform: degenerate triangle");
    const auto& mis = multi_indices(d);
    const double denom = binom(2 * d, d) * binom(2 * d + 2, 2);
    Eigen::MatrixXd G(mis.size(), mis.size());
    for (size_t i = 0; i < mis.size(); ++i) {
        for (size_t j = i; j < mis.size(); ++j) {
            double num = binom(mis[i].a1 + mis[j].a1, mis[i].a1) *
                         binom(mis[i].a2 + mis[j].a2, mis[i].a2) *
                         binom(mis[i].a3 + mis[j].a3, mis[i].a3);
            G(i, j) = G(j, i) = area * num / denom;
        }
    }
    return G;
}

}  // namespace splinekit::bform
