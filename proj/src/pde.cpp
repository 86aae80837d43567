#include "splinekit/pde.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "splinekit/quadrature.hpp"

namespace splinekit {

EllipticProblem EllipticProblem::poisson(ScalarField f, ScalarField g) {
    EllipticProblem p;
    p.a11 = [](double, double) { return -1.0; };
    p.a12 = [](double, double) { return 0.0; };
    p.a22 = [](double, double) { return -1.0; };
    p.b1 = p.b2 = p.c0 = [](double, double) { return 0.0; };
    p.f = std::move(f);
    p.g = std::move(g);
    return p;
}

std::vector<CollocationPoint> collocation_points(const SplineSpace& space, int Dprime) {
    if (Dprime < 1) throw std::invalid_argument("collocation_points: Dprime >= 1 required");
    const Triangulation& tri = space.tri;
    const EdgeTable& et = space.edge_table;
    std::vector<CollocationPoint> pts;
    std::set<int> seen_vertex;
    std::set<std::pair<int, int>> seen_edge_pos;  // (edge id, exponent on edge.b)
    // Barycentric lattice of order Dprime, built directly so the collocation
    // density is not limited by the polynomial degree cap.
    std::vector<std::array<int, 3>> lattice;
    for (int a1 = Dprime; a1 >= 0; --a1)
        for (int a2 = Dprime - a1; a2 >= 0; --a2) lattice.push_back({a1, a2, Dprime - a1 - a2});
    for (int t = 0; t < tri.triangle_count(); ++t) {
        const auto& tv = tri.triangles[t];
        auto corners = tri.corners(t);
        for (const auto& a : lattice) {
            int zeros = (a[0] == 0) + (a[1] == 0) + (a[2] == 0);
            if (zeros == 2) {
                int which = a[0] == Dprime ? 0 : (a[1] == Dprime ? 1 : 2);
                int v = tv[which];
                if (et.vertex_on_boundary[v]) continue;
                if (!seen_vertex.insert(v).second) continue;
            } else if (zeros == 1) {
                int opp = a[0] == 0 ? 0 : (a[1] == 0 ? 1 : 2);
                int u = tv[(opp + 1) % 3], w = tv[(opp + 2) % 3];
                int eid = et.edge_index(u, w);
                if (eid < 0 || !et.edges[eid].interior()) continue;
                int exp_b = et.edges[eid].b == u ? a[(opp + 1) % 3] : a[(opp + 2) % 3];
                if (!seen_edge_pos.insert({eid, exp_b}).second) continue;
            }
            CollocationPoint cp;
            cp.triangle = t;
            cp.bary = {double(a[0]) / Dprime, double(a[1]) / Dprime, double(a[2]) / Dprime};
            cp.p = bform::from_barycentric(corners, cp.bary);
            pts.push_back(cp);
        }
    }
    return pts;
}

bool check_ellipticity(const SplineSpace& space, const EllipticProblem& problem, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const Triangulation& tri = space.tri;
    int checked = 0;
    while (checked < 100) {
        int t = static_cast<int>(rng() % tri.triangle_count());
        double b1 = uni(rng), b2 = uni(rng) * (1 - b1);
        auto c = tri.corners(t);
        Point2 p = bform::from_barycentric(c, {b1, b2, 1 - b1 - b2});
        double a11 = problem.a11(p.x, p.y), a12 = problem.a12(p.x, p.y), a22 = problem.a22(p.x, p.y);
        if (a11 * a22 - a12 * a12 <= 0) return false;
        ++checked;
    }
    return true;
}

std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> assemble_collocation(
    const SplineSpace& space, const EllipticProblem& problem, int Dprime) {
    if (!check_ellipticity(space, problem))
        std::cerr << "pde: warning: ellipticity condition fails at sampled points\n";
    auto pts = collocation_points(space, Dprime);
    const int lc = space.local_count();
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd f(pts.size());
    static const std::vector<std::pair<int, int>> orders = {{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}};
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto& cp = pts[i];
        auto verts = space.tri.corners(cp.triangle);
        auto rows = bform::derivative_rows(space.d, verts, cp.bary, orders);
        Eigen::RowVectorXd basis = bform::eval_basis_row(space.d, cp.bary);
        double x = cp.p.x, y = cp.p.y;
        Eigen::RowVectorXd row = problem.a11(x, y) * rows[0] + 2.0 * problem.a12(x, y) * rows[1] +
                                 problem.a22(x, y) * rows[2] + problem.b1(x, y) * rows[3] +
                                 problem.b2(x, y) * rows[4] + problem.c0(x, y) * basis;
        int base = space.global_index(cp.triangle, 0);
        for (int j = 0; j < lc; ++j)
            if (row[j] != 0.0) trip.emplace_back(static_cast<int>(i), base + j, row[j]);
        f[i] = problem.f(x, y);
    }
    Eigen::SparseMatrix<double> K(pts.size(), space.n_coeffs());
    K.setFromTriplets(trip.begin(), trip.end());
    return {std::move(K), std::move(f)};
}

namespace {

double residual_l2(const Spline& s, const EllipticProblem& problem) {
    const SplineSpace& space = *s.space;
    static const std::vector<std::pair<int, int>> orders = {{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}};
    double acc = 0;
    for (int t = 0; t < space.tri.triangle_count(); ++t) {
        auto verts = space.tri.corners(t);
        auto rule = quadrature::triangle_rule(verts, std::max(2 * space.d, 5));
        Eigen::VectorXd local = s.c.segment(space.global_index(t, 0), space.local_count());
        for (const auto& q : rule) {
            auto b = bform::barycentric(verts, q.p);
            auto rows = bform::derivative_rows(space.d, verts, b, orders);
            Eigen::RowVectorXd basis = bform::eval_basis_row(space.d, b);
            double x = q.p.x, y = q.p.y;
            double op = problem.a11(x, y) * rows[0].dot(local) +
                        2.0 * problem.a12(x, y) * rows[1].dot(local) +
                        problem.a22(x, y) * rows[2].dot(local) + problem.b1(x, y) * rows[3].dot(local) +
                        problem.b2(x, y) * rows[4].dot(local) + problem.c0(x, y) * basis.dot(local);
            double r = op - problem.f(x, y);
            acc += q.w * r * r;
        }
    }
    return std::sqrt(acc);
}

}  // namespace

EllipticSolution solve_elliptic(std::shared_ptr<const SplineSpace> space,
                                const EllipticProblem& problem, int Dprime,
                                const SolveOptions& opts) {
    if (Dprime < 0) Dprime = space->d;
    auto [K, f] = assemble_collocation(*space, problem, Dprime);
    if (K.rows() == 0) throw std::runtime_error("solve_elliptic: empty collocation system");
    QuadraticProgram qp;
    qp.n = space->n_coeffs();
    qp.options = opts;
    qp.terms.push_back({std::move(K), std::move(f), 1.0});
    ConstraintBlock B = boundary_matrix(*space, problem.g);
    if (B.rows > 0) qp.equalities.push_back(std::move(B));
    if (space->r >= 0) {
        ConstraintBlock H = smoothness_matrix(*space);
        if (H.rows > 0) qp.equalities.push_back(std::move(H));
    }
    SolveReport rep = solve(qp);
    EllipticSolution sol{make_spline(space, rep.c), std::move(rep)};
    sol.report.epsilon1 = residual_l2(sol.s, problem);
    return sol;
}

std::pair<double, double> grid_errors(const Spline& s, const ScalarField& exact, int grid_n) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : s.space->tri.vertices) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    double sum2 = 0, maxe = 0;
    long count = 0;
    for (int j = 0; j < grid_n; ++j) {
        double y = ymin + (ymax - ymin) * j / (grid_n - 1);
        for (int i = 0; i < grid_n; ++i) {
            double x = xmin + (xmax - xmin) * i / (grid_n - 1);
            double v = s.eval_or_nan({x, y});
            if (std::isnan(v)) continue;
            double e = v - exact(x, y);
            sum2 += e * e;
            maxe = std::max(maxe, std::abs(e));
            ++count;
        }
    }
    return {count ? std::sqrt(sum2 / count) : 0.0, maxe};
}

std::pair<double, double> quadrature_errors(const Spline& s, const targets::Target& exact) {
    const SplineSpace& space = *s.space;
    static const std::vector<std::pair<int, int>> orders = {{1, 0}, {0, 1}};
    double l2 = 0, g2 = 0;
    for (int t = 0; t < space.tri.triangle_count(); ++t) {
        auto verts = space.tri.corners(t);
        auto rule = quadrature::triangle_rule(verts, std::max(2 * space.d, 5));
        Eigen::VectorXd local = s.c.segment(space.global_index(t, 0), space.local_count());
        for (const auto& q : rule) {
            auto b = bform::barycentric(verts, q.p);
            double v = bform::eval_bform(space.d, local, b);
            auto rows = bform::derivative_rows(space.d, verts, b, orders);
            double e = v - exact.u(q.p.x, q.p.y);
            double ex = rows[0].dot(local) - exact.ux(q.p.x, q.p.y);
            double ey = rows[1].dot(local) - exact.uy(q.p.x, q.p.y);
            l2 += q.w * e * e;
            g2 += q.w * (ex * ex + ey * ey);
        }
    }
    return {std::sqrt(l2), std::sqrt(g2)};
}

ConvergenceResult convergence_study(const Triangulation& base, int d, int r,
                                    const targets::Target& exact, int levels, int Dprime,
                                    int grid_n) {
    if (levels < 3) throw std::invalid_argument("convergence_study: levels >= 3 required");
    ConvergenceResult result;
    Triangulation mesh = base;
    EllipticProblem problem = EllipticProblem::poisson(
        [&exact](double x, double y) { return -exact.laplacian(x, y); }, exact.u);
    for (int level = 0; level < levels; ++level) {
        auto space = make_space(mesh, d, r);
        auto sol = solve_elliptic(space, problem, Dprime);
        ConvergenceRow row;
        row.mesh_size = mesh_size(mesh);
        auto [l2, g] = quadrature_errors(sol.s, exact);
        row.l2_error = l2;
        row.grad_l2_error = g;
        auto [rmse, maxe] = grid_errors(sol.s, exact.u, grid_n);
        row.rmse = rmse;
        row.max_error = maxe;
        row.epsilon1 = sol.report.epsilon1.value_or(0.0);
        result.rows.push_back(row);
        if (level + 1 < levels) mesh = refine_uniform(mesh);
    }
    result.exact = true;
    for (const auto& row : result.rows) result.exact = result.exact && row.l2_error < 1e-10;
    if (!result.exact) {
        // Least-squares slope of log error against log mesh size.
        auto slope = [&](auto pick) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int n = 0;
            for (const auto& row : result.rows) {
                double e = pick(row);
                if (e <= 0) continue;
                double lx = std::log(row.mesh_size), ly = std::log(e);
                sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
                ++n;
            }
            return n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
        };
        result.l2_rate = slope([](const ConvergenceRow& r) { return r.l2_error; });
        result.grad_rate = slope([](const ConvergenceRow& r) { return r.grad_l2_error; });
    }
    return result;
}

}  // namespace splinekit
