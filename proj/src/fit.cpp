#include "splinekit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace splinekit {

double Spline::eval_at(int triangle, const bform::Bary& b) const {
    int lc = space->local_count();
    return bform::eval_bform(space->d, c.segment(space->global_index(triangle, 0), lc), b);
}

double Spline::eval(const Point2& p) const {
    auto loc = locate(space->tri, p);
    if (!loc) throw std::runtime_error("Spline::eval: point outside the domain");
    return eval_at(loc->triangle, {loc->bary[0], loc->bary[1], loc->bary[2]});
}

double Spline::eval_or_nan(const Point2& p) const {
    auto loc = locate(space->tri, p);
    if (!loc) return std::numeric_limits<double>::quiet_NaN();
    return eval_at(loc->triangle, {loc->bary[0], loc->bary[1], loc->bary[2]});
}

std::shared_ptr<const SplineSpace> make_space(Triangulation tri, int d, int r) {
    return std::make_shared<const SplineSpace>(std::move(tri), d, r);
}

Spline make_spline(std::shared_ptr<const SplineSpace> space, Eigen::VectorXd c) {
    if (c.size() != space->n_coeffs()) throw std::invalid_argument("make_spline: coefficient length mismatch");
    Spline s;
    s.space = std::move(space);
    s.c = std::move(c);
    if (s.space->r >= 0) {
        ConstraintBlock H = smoothness_matrix(*s.space);
        if (H.rows > 0)
            s.smoothness_violation = (H.to_sparse() * s.c).lpNorm<Eigen::Infinity>();
    }
    s.certified = s.smoothness_violation <= 1e-8;
    return s;
}

void save_coeffs(const Spline& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "tri,a1,a2,a3,coef\n";
    const auto& mis = bform::multi_indices(s.space->d);
    for (int t = 0; t < s.space->tri.triangle_count(); ++t)
        for (size_t i = 0; i < mis.size(); ++i)
            out << t << "," << mis[i].a1 << "," << mis[i].a2 << "," << mis[i].a3 << ","
                << s.c[s.space->global_index(t, static_cast<int>(i))] << "\n";
}

Eigen::VectorXd load_coeffs(const SplineSpace& space, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty coefficient file " + path);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(space.n_coeffs());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        int t, a1, a2, a3;
        double v;
        if (!(ls >> t >> a1 >> a2 >> a3 >> v)) throw std::runtime_error("bad coefficient line: " + line);
        if (t < 0 || t >= space.tri.triangle_count() || a1 + a2 + a3 != space.d)
            throw std::runtime_error("coefficient row out of range: " + line);
        c[space.global_index(t, bform::mi_index(space.d, a1, a2))] = v;
    }
    return c;
}

namespace {

QuadraticProgram base_program(const SplineSpace& space, double lambda, const SolveOptions& opts) {
    QuadraticProgram qp;
    qp.n = space.n_coeffs();
    qp.options = opts;
    if (lambda > 0 && space.d >= 2) {
        EnergyTerm e;
        e.E = energy_matrix(space);
        e.root = energy_root(space);
        e.lambda = lambda;
        qp.energy = std::move(e);
    }
    if (space.r >= 0) {
        ConstraintBlock H = smoothness_matrix(space);
        if (H.rows > 0) qp.equalities.push_back(std::move(H));
    }
    return qp;
}

}  // namespace

Spline fit_penalized(std::shared_ptr<const SplineSpace> space, const std::vector<Point2>& points,
                     const Eigen::VectorXd& values, double lambda, const SolveOptions& opts) {
    if (points.empty()) throw std::invalid_argument("fit_penalized: no data points");
    if (lambda < 0) throw std::invalid_argument("fit_penalized: lambda must be >= 0");
    QuadraticProgram qp = base_program(*space, lambda, opts);
    ConstraintBlock I = interpolation_matrix(*space, points, values);
    qp.terms.push_back({I.to_sparse(), I.rhs, 1.0});
    SolveReport rep = solve(qp);
    return make_spline(space, rep.c);
}

Spline interpolate_min_energy(std::shared_ptr<const SplineSpace> space,
                              const std::vector<Point2>& points, const Eigen::VectorXd& values,
                              const SolveOptions& opts) {
    QuadraticProgram qp = base_program(*space, 1.0, opts);
    if (!qp.energy && space->d >= 2) throw std::logic_error("interpolate_min_energy: missing energy");
    ConstraintBlock I = interpolation_matrix(*space, points, values);
    qp.equalities.push_back(std::move(I));
    SolveReport rep;
    try {
        rep = solve(qp);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("interpolate_min_energy: inconsistent constraints (") +
                                 e.what() + ")");
    }
    return make_spline(space, rep.c);
}

Spline solve_levelset(const LevelSetProblem& problem, std::shared_ptr<const SplineSpace> space,
                      const SolveOptions& opts) {
    if (problem.cloud.empty() || problem.outer_boundary.empty())
        throw std::invalid_argument("solve_levelset: cloud and outer boundary must be nonempty");
    QuadraticProgram qp = base_program(*space, problem.lambda, opts);
    auto add_term = [&](const std::vector<Point2>& pts, double target) {
        if (pts.empty()) return;
        Eigen::VectorXd vals = Eigen::VectorXd::Constant(pts.size(), target);
        ConstraintBlock I = interpolation_matrix(*space, pts, vals);
        qp.terms.push_back({I.to_sparse(), I.rhs, 1.0});
    };
    add_term(problem.cloud, 1.0);
    add_term(problem.outer_boundary, 0.0);
    add_term(problem.hole_boundaries, 2.0);
    SolveReport rep = solve(qp);
    return make_spline(space, rep.c);
}

Eigen::MatrixXd sample_grid(const Spline& s, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("sample_grid: grid_n must be >= 2");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : s.space->tri.vertices) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    Eigen::MatrixXd grid(grid_n, grid_n);
    for (int j = 0; j < grid_n; ++j) {
        double y = ymin + (ymax - ymin) * j / (grid_n - 1);
        for (int i = 0; i < grid_n; ++i) {
            double x = xmin + (xmax - xmin) * i / (grid_n - 1);
            grid(j, i) = s.eval_or_nan({x, y});
        }
    }
    return grid;
}

namespace {

struct EdgeKey {
    int i, j;
    char orient;  // 'H' or 'V'
    bool operator<(const EdgeKey& o) const {
        return std::tie(i, j, orient) < std::tie(o.i, o.j, o.orient);
    }
};

struct Segment {
    EdgeKey from, to;
    Point2 a, b;
};

}  // namespace

std::vector<Polyline> extract_contour(const Spline& s, double level, int grid_n) {
    if (grid_n < 16) throw std::invalid_argument("extract_contour: grid_n must be >= 16");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : s.space->tri.vertices) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    Eigen::MatrixXd v = sample_grid(s, grid_n);
    auto X = [&](int i) { return xmin + (xmax - xmin) * i / (grid_n - 1); };
    auto Y = [&](int j) { return ymin + (ymax - ymin) * j / (grid_n - 1); };

    std::vector<Segment> segments;
    for (int j = 0; j + 1 < grid_n; ++j) {
        for (int i = 0; i + 1 < grid_n; ++i) {
            // Corners CCW from the bottom-left.
            double val[4] = {v(j, i), v(j, i + 1), v(j + 1, i + 1), v(j + 1, i)};
            bool skip = false;
            for (double vv : val) skip |= std::isnan(vv);
            if (skip) continue;
            bool in[4];
            for (int k = 0; k < 4; ++k) in[k] = val[k] > level;
            Point2 corner[4] = {{X(i), Y(j)}, {X(i + 1), Y(j)}, {X(i + 1), Y(j + 1)}, {X(i), Y(j + 1)}};
            EdgeKey keys[4] = {{i, j, 'H'}, {i + 1, j, 'V'}, {i, j + 1, 'H'}, {i, j, 'V'}};
            // Crossings in CCW traversal order; each is an exit (inside ->
            // outside) or an entry.
            struct Crossing { Point2 p; EdgeKey key; bool exit; };
            std::vector<Crossing> cr;
            for (int k = 0; k < 4; ++k) {
                int k2 = (k + 1) % 4;
                if (in[k] == in[k2]) continue;
                double t = (level - val[k]) / (val[k2] - val[k]);
                Point2 p{corner[k].x + t * (corner[k2].x - corner[k].x),
                         corner[k].y + t * (corner[k2].y - corner[k].y)};
                cr.push_back({p, keys[k], in[k]});
            }
            if (cr.size() == 2) {
                int e = cr[0].exit ? 0 : 1;
                segments.push_back({cr[e].key, cr[1 - e].key, cr[e].p, cr[1 - e].p});
            } else if (cr.size() == 4) {
                // Saddle: resolve with the center value.
                double center = 0.25 * (val[0] + val[1] + val[2] + val[3]);
                bool center_in = center > level;
                for (int k = 0; k < 4; ++k) {
                    if (!cr[k].exit) continue;
                    int partner = center_in ? (k + 1) % 4 : (k + 3) % 4;
                    segments.push_back({cr[k].key, cr[partner].key, cr[k].p, cr[partner].p});
                }
            }
        }
    }

    // Stitch directed segments into polylines.
    std::map<EdgeKey, int> out_seg;
    std::map<EdgeKey, int> in_count;
    for (size_t k = 0; k < segments.size(); ++k) {
        out_seg[segments[k].from] = static_cast<int>(k);
        in_count[segments[k].to]++;
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> curves;
    auto trace = [&](int start) {
        Polyline pl;
        int k = start;
        pl.points.push_back(segments[k].a);
        while (true) {
            used[k] = true;
            pl.points.push_back(segments[k].b);
            auto it = out_seg.find(segments[k].to);
            if (it == out_seg.end() || used[it->second]) break;
            k = it->second;
        }
        const Point2& p0 = pl.points.front();
        const Point2& p1 = pl.points.back();
        pl.closed = std::abs(p0.x - p1.x) < 1e-12 && std::abs(p0.y - p1.y) < 1e-12;
        curves.push_back(std::move(pl));
    };
    // Open chains start at edges with no incoming segment.
    for (size_t k = 0; k < segments.size(); ++k)
        if (!used[k] && in_count.find(segments[k].from) == in_count.end()) trace(static_cast<int>(k));
    for (size_t k = 0; k < segments.size(); ++k)
        if (!used[k]) trace(static_cast<int>(k));
    return curves;
}

void write_contours_csv(const std::vector<Polyline>& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "curve_id,x,y\n";
    for (size_t k = 0; k < curves.size(); ++k)
        for (const auto& p : curves[k].points) out << k << "," << p.x << "," << p.y << "\n";
}

void write_grid_csv(const Eigen::MatrixXd& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    for (int j = 0; j < grid.rows(); ++j) {
        for (int i = 0; i < grid.cols(); ++i) {
            if (i) out << ",";
            if (std::isnan(grid(j, i))) out << "NaN";
            else out << grid(j, i);
        }
        out << "\n";
    }
}

}  // namespace splinekit
