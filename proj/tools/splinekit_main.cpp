// Command-line front end: meshes, dimension reports, fitting, contours,
// elliptic collocation, convergence studies, and the KB/LKB benchmark.
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splinekit/dimension.hpp"
#include "splinekit/fit.hpp"
#include "splinekit/kst.hpp"
#include "splinekit/pde.hpp"

namespace sk = splinekit;

namespace {

struct Common {
    bool dry_run = false;
    int threads = 0;
    unsigned seed = 12345;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_flag("--dry-run", common.dry_run, "print the resolved configuration and exit");
    cmd->add_option("--threads", common.threads, "worker cap (env SPLINEKIT_THREADS)");
    cmd->add_option("--seed", common.seed, "random seed where applicable");
}

void apply_threads(const Common& common) {
    int t = common.threads;
    if (t <= 0) {
        if (const char* env = std::getenv("SPLINEKIT_THREADS")) t = std::atoi(env);
    }
    if (t > 0) Eigen::setNbThreads(t);
}

/// Built-in generator names ("square_grid(4)", "square_grid:4",
/// "single_triangle", "two_triangle_square") or a mesh file path.
sk::Triangulation resolve_mesh(const std::string& spec) {
    if (spec == "single_triangle") return sk::single_triangle();
    if (spec == "two_triangle_square") return sk::two_triangle_square();
    if (spec.rfind("square_grid", 0) == 0) {
        std::string rest = spec.substr(11);
        int k = 0;
        if (!rest.empty() && (rest.front() == '(' || rest.front() == ':')) {
            k = std::atoi(rest.c_str() + 1);
        }
        if (k < 1) throw CLI::ValidationError("--mesh", "bad square_grid parameter in '" + spec + "'");
        return sk::square_grid(k);
    }
    return sk::load_mesh(spec);
}

std::ostream& out17(std::ostream& os) {
    os.precision(17);
    return os;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    return out;
}

std::vector<sk::Point2> read_points(const std::string& path, Eigen::VectorXd* values) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--data", "cannot open " + path);
    std::vector<sk::Point2> pts;
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, y, z = 0;
        if (!(ls >> x >> y)) continue;  // skip header lines
        if (values && !(ls >> z)) throw std::runtime_error("missing value column in " + path);
        pts.push_back({x, y});
        vals.push_back(z);
    }
    if (pts.empty()) throw std::runtime_error("no points in " + path);
    if (values) *values = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
    return pts;
}

std::vector<sk::Point2> domain_sample_grid(const sk::Triangulation& tri, int n) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : tri.vertices) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    std::vector<sk::Point2> pts;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            sk::Point2 p{xmin + (xmax - xmin) * i / (n - 1), ymin + (ymax - ymin) * j / (n - 1)};
            if (sk::locate(tri, p)) pts.push_back(p);
        }
    return pts;
}

void report_spline(const sk::Spline& s) {
    std::cout << out17 << "n_coeffs=" << s.c.size() << "\n"
              << "smoothness_violation=" << s.smoothness_violation << "\n"
              << "certified=" << (s.certified ? 1 : 0) << "\n";
}

sk::targets::Field lookup_field(const std::string& name) {
    for (const auto& [n, f] : sk::targets::benchmark_functions())
        if (n == name) return f;
    return sk::targets::lookup(name).u;  // throws with a clear message
}

// ---------------------------------------------------------------- commands

struct DimArgs {
    Common common;
    std::string mesh;
    int d = 1, r = 0;
    bool rank = false;
    double slope_tol = 1e-9;
    std::string export_h;
};

int run_dim(const DimArgs& a) {
    if (a.common.dry_run) {
        std::cout << "command=dim\nmesh=" << a.mesh << "\nd=" << a.d << "\nr=" << a.r
                  << "\nrank=" << a.rank << "\nslope_tol=" << a.slope_tol << "\n";
        return 0;
    }
    sk::SplineSpace space(resolve_mesh(a.mesh), a.d, a.r);
    sk::DimensionReport rep = sk::schumaker_bounds(space, a.slope_tol);
    if (a.rank) rep.rank_dim = sk::dim_via_rank(space);
    std::cout << "D=" << rep.D << "\n"
              << "interior_vertices=" << rep.interior_vertices.size() << "\n";
    int sig = 0, sig_t = 0;
    for (int v : rep.sigma) sig += v;
    for (int v : rep.sigma_tilde) sig_t += v;
    std::cout << "sigma=" << sig << "\nsigma_tilde=" << sig_t << "\n"
              << "lower=" << rep.lower << "\nupper=" << rep.upper << "\n";
    if (rep.rank_dim) std::cout << "rank_dim=" << *rep.rank_dim << "\n";
    if (!a.export_h.empty()) sk::write_matrix_market(sk::smoothness_matrix(space), a.export_h);
    return 0;
}

struct FitArgs {
    Common common;
    std::string mesh;
    int d = 5, r = 1;
    double lambda = 1.0;
    std::string data, target, out;
    int samples = 0;
    double noise = 0.0;
    bool interp = false;
};

int run_fit(const FitArgs& a) {
    if (a.common.dry_run) {
        std::cout << out17 << "command=" << (a.interp ? "interp" : "fit") << "\nmesh=" << a.mesh
                  << "\nd=" << a.d << "\nr=" << a.r << "\nlambda=" << a.lambda << "\ndata="
                  << a.data << "\ntarget=" << a.target << "\nsamples=" << a.samples
                  << "\nnoise=" << a.noise << "\nseed=" << a.common.seed << "\nout=" << a.out << "\n";
        return 0;
    }
    apply_threads(a.common);
    auto space = sk::make_space(resolve_mesh(a.mesh), a.d, a.r);
    std::vector<sk::Point2> pts;
    Eigen::VectorXd values;
    if (!a.data.empty()) {
        pts = read_points(a.data, &values);
    } else if (!a.target.empty()) {
        int n = a.samples > 0 ? a.samples : 101;
        pts = domain_sample_grid(space->tri, n);
        values.resize(static_cast<int>(pts.size()));
        auto f = lookup_field(a.target);
        std::mt19937_64 rng(a.common.seed);
        std::normal_distribution<double> gauss(0.0, a.noise);
        for (size_t i = 0; i < pts.size(); ++i) {
            values[static_cast<int>(i)] = f(pts[i].x, pts[i].y);
            if (a.noise > 0) values[static_cast<int>(i)] += gauss(rng);
        }
    } else {
        throw CLI::ValidationError("fit", "either --data or --target is required");
    }
    sk::Spline s = a.interp ? sk::interpolate_min_energy(space, pts, values)
                            : sk::fit_penalized(space, pts, values, a.lambda);
    report_spline(s);
    if (!a.out.empty()) sk::save_coeffs(s, a.out);
    return 0;
}

struct LevelsetArgs {
    Common common;
    std::string mesh;
    int d = 5, r = 1;
    double lambda = 1.0;
    std::string cloud, boundary, holes, out;
};

int run_levelset(const LevelsetArgs& a) {
    if (a.common.dry_run) {
        std::cout << out17 << "command=levelset\nmesh=" << a.mesh << "\nd=" << a.d << "\nr=" << a.r
                  << "\nlambda=" << a.lambda << "\ncloud=" << a.cloud << "\nboundary=" << a.boundary
                  << "\nholes=" << a.holes << "\nout=" << a.out << "\n";
        return 0;
    }
    apply_threads(a.common);
    auto space = sk::make_space(resolve_mesh(a.mesh), a.d, a.r);
    sk::LevelSetProblem problem;
    problem.lambda = a.lambda;
    problem.cloud = read_points(a.cloud, nullptr);
    problem.outer_boundary = read_points(a.boundary, nullptr);
    if (!a.holes.empty()) problem.hole_boundaries = read_points(a.holes, nullptr);
    sk::Spline s = sk::solve_levelset(problem, space);
    report_spline(s);
    if (!a.out.empty()) sk::save_coeffs(s, a.out);
    return 0;
}

struct GridArgs {
    Common common;
    std::string mesh, coeffs, out;
    int d = 5, r = 1;
    double level = 1.0;
    int grid_n = 256;
    bool contour = false;
};

int run_grid(const GridArgs& a) {
    if (a.common.dry_run) {
        std::cout << out17 << "command=" << (a.contour ? "contour" : "sample") << "\nmesh=" << a.mesh
                  << "\nd=" << a.d << "\nr=" << a.r << "\ncoeffs=" << a.coeffs
                  << "\nlevel=" << a.level << "\ngrid_n=" << a.grid_n << "\nout=" << a.out << "\n";
        return 0;
    }
    auto space = sk::make_space(resolve_mesh(a.mesh), a.d, a.r);
    sk::Spline s = sk::make_spline(space, sk::load_coeffs(*space, a.coeffs));
    if (a.contour) {
        auto curves = sk::extract_contour(s, a.level, a.grid_n);
        std::cout << "curves=" << curves.size() << "\n";
        sk::write_contours_csv(curves, a.out);
    } else {
        sk::write_grid_csv(sk::sample_grid(s, a.grid_n), a.out);
    }
    return 0;
}

struct EllipticArgs {
    Common common;
    std::string mesh;
    int d = 8, r = 1, dprime = -1, grid = 501;
    std::string exact, rhs, out;
    double a11 = -1, a12 = 0, a22 = -1, b1 = 0, b2 = 0, c0 = 0;
    bool poisson = false;
};

int run_elliptic(const EllipticArgs& a) {
    if (a.common.dry_run) {
        std::cout << out17 << "command=" << (a.poisson ? "poisson" : "elliptic") << "\nmesh=" << a.mesh
                  << "\nd=" << a.d << "\nr=" << a.r << "\ndprime=" << a.dprime << "\ngrid=" << a.grid
                  << "\nexact=" << a.exact << "\nrhs=" << a.rhs << "\na11=" << a.a11
                  << "\na12=" << a.a12 << "\na22=" << a.a22 << "\nb1=" << a.b1 << "\nb2=" << a.b2
                  << "\nc0=" << a.c0 << "\nout=" << a.out << "\n";
        return 0;
    }
    apply_threads(a.common);
    auto space = sk::make_space(resolve_mesh(a.mesh), a.d, a.r);
    const sk::targets::Target* exact = a.exact.empty() ? nullptr : &sk::targets::lookup(a.exact);

    sk::EllipticProblem problem;
    double a11 = a.poisson ? -1.0 : a.a11;
    double a22 = a.poisson ? -1.0 : a.a22;
    double a12 = a.poisson ? 0.0 : a.a12, b1 = a.poisson ? 0.0 : a.b1;
    double b2 = a.poisson ? 0.0 : a.b2, c0 = a.poisson ? 0.0 : a.c0;
    problem.a11 = [a11](double, double) { return a11; };
    problem.a12 = [a12](double, double) { return a12; };
    problem.a22 = [a22](double, double) { return a22; };
    problem.b1 = [b1](double, double) { return b1; };
    problem.b2 = [b2](double, double) { return b2; };
    problem.c0 = [c0](double, double) { return c0; };
    if (!a.rhs.empty()) {
        problem.f = lookup_field(a.rhs);
    } else if (exact) {
        // Manufactured right-hand side; only expressible when the second-order
        // part is a multiple of the Laplacian and first-order terms vanish.
        if (a12 != 0 || b1 != 0 || b2 != 0 || std::abs(a11 - a22) > 0)
            throw CLI::ValidationError("--rhs", "required for non-Laplacian operators");
        problem.f = [a11, c0, exact](double x, double y) {
            return a11 * exact->laplacian(x, y) + c0 * exact->u(x, y);
        };
    } else {
        throw CLI::ValidationError("--rhs", "either --rhs or --exact is required");
    }
    problem.g = exact ? exact->u : sk::ScalarField([](double, double) { return 0.0; });

    sk::EllipticSolution sol = sk::solve_elliptic(space, problem, a.dprime);
    std::cout << out17 << "epsilon1=" << sol.report.epsilon1.value_or(0.0) << "\n"
              << "constraint_violation=" << sol.report.constraint_violation << "\n"
              << "iterations=" << sol.report.iterations << "\n";
    if (exact) {
        auto [rmse, maxe] = sk::grid_errors(sol.s, exact->u, a.grid);
        auto [l2, g2] = sk::quadrature_errors(sol.s, *exact);
        std::cout << "rmse=" << rmse << "\nmax_error=" << maxe << "\nl2_error=" << l2
                  << "\ngrad_l2_error=" << g2 << "\n";
        if (!a.out.empty()) {
            auto out = open_out(a.out);
            out << "mesh_size,l2_error,grad_l2_error,rmse,max_error,epsilon1\n";
            out << sk::mesh_size(space->tri) << "," << l2 << "," << g2 << "," << rmse << ","
                << maxe << "," << sol.report.epsilon1.value_or(0.0) << "\n";
        }
    } else if (!a.out.empty()) {
        sk::save_coeffs(sol.s, a.out);
    }
    return 0;
}

struct ConvergeArgs {
    Common common;
    std::string mesh = "square_grid(2)";
    int d = 5, r = 1, levels = 3, dprime = -1, grid = 201;
    std::string exact = "sinpi", out;
};

int run_converge(const ConvergeArgs& a) {
    if (a.common.dry_run) {
        std::cout << "command=converge\nmesh=" << a.mesh << "\nd=" << a.d << "\nr=" << a.r
                  << "\nlevels=" << a.levels << "\ndprime=" << a.dprime << "\ngrid=" << a.grid
                  << "\nexact=" << a.exact << "\nout=" << a.out << "\n";
        return 0;
    }
    apply_threads(a.common);
    sk::ConvergenceResult res = sk::convergence_study(resolve_mesh(a.mesh), a.d, a.r,
                                                      sk::targets::lookup(a.exact), a.levels,
                                                      a.dprime, a.grid);
    std::cout << out17;
    std::ostringstream table;
    table.precision(17);
    table << "mesh_size,l2_error,grad_l2_error,rmse,max_error,epsilon1\n";
    for (const auto& row : res.rows)
        table << row.mesh_size << "," << row.l2_error << "," << row.grad_l2_error << ","
              << row.rmse << "," << row.max_error << "," << row.epsilon1 << "\n";
    std::cout << table.str();
    if (res.exact) std::cout << "rate=EXACT\n";
    else std::cout << "l2_rate=" << res.l2_rate << "\ngrad_rate=" << res.grad_rate << "\n";
    if (!a.out.empty()) open_out(a.out) << table.str();
    return 0;
}

struct LkbBuildArgs {
    Common common;
    int n = 10, k = 3, resolution = 8, grid_n = 101;
    double lambda = 1.0;
    std::string out;
};

int run_lkb_build(const LkbBuildArgs& a) {
    if (a.common.dry_run) {
        std::cout << out17 << "command=lkb build\nn=" << a.n << "\nk=" << a.k << "\nresolution="
                  << a.resolution << "\ngrid_n=" << a.grid_n << "\nlambda=" << a.lambda
                  << "\nout=" << a.out << "\n";
        return 0;
    }
    apply_threads(a.common);
    auto kb = sk::kst::make_kb_basis(sk::kst::build_inner_functions(a.resolution), a.n, a.k);
    sk::kst::LKBBasis lkb = sk::kst::lkb_build(kb, a.grid_n, a.lambda, a.common.threads);
    std::cout << out17 << "basis_size=" << kb.size() << "\n"
              << "max_smoothness_violation=" << lkb.max_smoothness_violation << "\n";
    sk::kst::save_lkb(lkb, a.out);
    return 0;
}

struct LkbFitArgs {
    Common common;
    std::string basis, target = "f1", out;
    int grid_n = 101, test_n = 1001;
};

int run_lkb_fit(const LkbFitArgs& a) {
    if (a.common.dry_run) {
        std::cout << "command=lkb fit\nbasis=" << a.basis << "\ntarget=" << a.target
                  << "\ngrid_n=" << a.grid_n << "\ntest_n=" << a.test_n << "\nout=" << a.out << "\n";
        return 0;
    }
    apply_threads(a.common);
    sk::kst::LKBBasis lkb = sk::kst::load_lkb(a.basis);
    sk::kst::DlsResult res = sk::kst::dls_fit(lkb, lookup_field(a.target), a.grid_n, a.test_n);
    std::cout << out17 << "rmse_train=" << res.rmse_train << "\nrmse_test=" << res.rmse_test
              << "\nrank_deficient=" << (res.rank_deficient ? 1 : 0) << "\n";
    if (!a.out.empty()) {
        auto out = open_out(a.out);
        out << "i,coef\n";
        for (int i = 0; i < res.coefficients.size(); ++i)
            out << i << "," << res.coefficients[i] << "\n";
    }
    return 0;
}

struct BenchArgs {
    Common common;
    std::string sizes = "10,100";
    int resolution = 8, grid_n = 101, test_n = 1001;
    std::string out;
};

int run_bench(const BenchArgs& a) {
    std::vector<int> sizes;
    {
        std::string s = a.sizes;
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream ls(s);
        int v;
        while (ls >> v) sizes.push_back(v);
    }
    if (a.common.dry_run) {
        std::cout << "command=bench\nsizes=" << a.sizes << "\nresolution=" << a.resolution
                  << "\ngrid_n=" << a.grid_n << "\ntest_n=" << a.test_n << "\nout=" << a.out << "\n";
        return 0;
    }
    apply_threads(a.common);
    sk::kst::BenchmarkReport rep =
        sk::kst::benchmark_suite(sizes, a.resolution, a.grid_n, a.test_n, a.common.threads);
    std::ostringstream table;
    table.precision(17);
    table << "function";
    for (int n : rep.sizes) table << ",n=" << n;
    table << "\n";
    for (size_t fi = 0; fi < rep.names.size(); ++fi) {
        table << rep.names[fi];
        for (size_t s = 0; s < rep.sizes.size(); ++s)
            table << "," << rep.rmse_test(static_cast<int>(fi), static_cast<int>(s));
        table << "\n";
    }
    std::cout << table.str();
    if (!a.out.empty()) open_out(a.out) << table.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bivariate spline toolkit: fitting, PDE collocation, dimension bounds, KB/LKB benchmark"};
    app.require_subcommand(1);
    std::cout.precision(17);

    DimArgs dim_args;
    auto* dim = app.add_subcommand("dim", "spline space dimension bounds and rank oracle");
    dim->add_option("--mesh", dim_args.mesh, "builtin name or mesh file")->required();
    dim->add_option("--d", dim_args.d, "polynomial degree")->required();
    dim->add_option("--r", dim_args.r, "smoothness order")->required();
    dim->add_flag("--rank", dim_args.rank, "also compute the exact dimension via rank");
    dim->add_option("--slope-tol", dim_args.slope_tol, "slope comparison tolerance (radians)");
    dim->add_option("--export-h", dim_args.export_h, "write the smoothness matrix (Matrix-Market)");
    add_common(dim, dim_args.common);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "penalized least-squares fit");
    fit->add_option("--mesh", fit_args.mesh)->required();
    fit->add_option("--d", fit_args.d);
    fit->add_option("--r", fit_args.r);
    fit->add_option("--lambda", fit_args.lambda, "thin-plate penalty weight");
    fit->add_option("--data", fit_args.data, "CSV of x,y,z samples");
    fit->add_option("--target", fit_args.target, "named function sampled on a grid instead of --data");
    fit->add_option("--samples", fit_args.samples, "grid side for --target sampling");
    fit->add_option("--noise", fit_args.noise, "Gaussian noise sigma added to --target samples");
    fit->add_option("--out", fit_args.out, "coefficient CSV output");
    add_common(fit, fit_args.common);

    FitArgs interp_args;
    interp_args.interp = true;
    auto* interp = app.add_subcommand("interp", "minimal-energy interpolation");
    interp->add_option("--mesh", interp_args.mesh)->required();
    interp->add_option("--d", interp_args.d);
    interp->add_option("--r", interp_args.r);
    interp->add_option("--data", interp_args.data, "CSV of x,y,z samples");
    interp->add_option("--target", interp_args.target);
    interp->add_option("--samples", interp_args.samples);
    interp->add_option("--out", interp_args.out, "coefficient CSV output");
    add_common(interp, interp_args.common);

    LevelsetArgs ls_args;
    auto* levelset = app.add_subcommand("levelset", "level-set curve fit from point sets");
    levelset->add_option("--mesh", ls_args.mesh)->required();
    levelset->add_option("--d", ls_args.d);
    levelset->add_option("--r", ls_args.r);
    levelset->add_option("--lambda", ls_args.lambda);
    levelset->add_option("--cloud", ls_args.cloud, "CSV of x,y points with target 1")->required();
    levelset->add_option("--boundary", ls_args.boundary, "CSV of x,y points with target 0")->required();
    levelset->add_option("--holes", ls_args.holes, "CSV of x,y points with target 2");
    levelset->add_option("--out", ls_args.out, "coefficient CSV output");
    add_common(levelset, ls_args.common);

    GridArgs contour_args;
    contour_args.contour = true;
    auto* contour = app.add_subcommand("contour", "extract level curves from a saved spline");
    contour->add_option("--mesh", contour_args.mesh)->required();
    contour->add_option("--d", contour_args.d);
    contour->add_option("--r", contour_args.r);
    contour->add_option("--coeffs", contour_args.coeffs, "coefficient CSV")->required();
    contour->add_option("--level", contour_args.level);
    contour->add_option("--grid-n", contour_args.grid_n);
    contour->add_option("--out", contour_args.out, "contour CSV output")->required();
    add_common(contour, contour_args.common);

    GridArgs sample_args;
    auto* sample = app.add_subcommand("sample", "sample a saved spline on a grid");
    sample->add_option("--mesh", sample_args.mesh)->required();
    sample->add_option("--d", sample_args.d);
    sample->add_option("--r", sample_args.r);
    sample->add_option("--coeffs", sample_args.coeffs, "coefficient CSV")->required();
    sample->add_option("--grid-n", sample_args.grid_n);
    sample->add_option("--out", sample_args.out, "grid CSV output")->required();
    add_common(sample, sample_args.common);

    EllipticArgs poisson_args;
    poisson_args.poisson = true;
    auto* poisson = app.add_subcommand("poisson", "-laplace(u) = f collocation solve");
    poisson->add_option("--mesh", poisson_args.mesh)->required();
    poisson->add_option("--d", poisson_args.d);
    poisson->add_option("--r", poisson_args.r);
    poisson->add_option("--dprime", poisson_args.dprime, "collocation degree (default d)");
    poisson->add_option("--exact", poisson_args.exact, "named exact solution");
    poisson->add_option("--rhs", poisson_args.rhs, "named right-hand side");
    poisson->add_option("--grid", poisson_args.grid, "error evaluation grid side");
    poisson->add_option("--out", poisson_args.out, "error CSV (with --exact) or coefficient CSV");
    add_common(poisson, poisson_args.common);

    EllipticArgs elliptic_args;
    auto* elliptic = app.add_subcommand("elliptic", "constant-coefficient elliptic collocation solve");
    elliptic->add_option("--mesh", elliptic_args.mesh)->required();
    elliptic->add_option("--d", elliptic_args.d);
    elliptic->add_option("--r", elliptic_args.r);
    elliptic->add_option("--dprime", elliptic_args.dprime);
    elliptic->add_option("--a11", elliptic_args.a11);
    elliptic->add_option("--a12", elliptic_args.a12);
    elliptic->add_option("--a22", elliptic_args.a22);
    elliptic->add_option("--b1", elliptic_args.b1);
    elliptic->add_option("--b2", elliptic_args.b2);
    elliptic->add_option("--c0", elliptic_args.c0);
    elliptic->add_option("--exact", elliptic_args.exact);
    elliptic->add_option("--rhs", elliptic_args.rhs);
    elliptic->add_option("--grid", elliptic_args.grid);
    elliptic->add_option("--out", elliptic_args.out);
    add_common(elliptic, elliptic_args.common);

    ConvergeArgs conv_args;
    auto* converge = app.add_subcommand("converge", "refinement convergence study");
    converge->add_option("--mesh", conv_args.mesh, "base mesh (refined per level)");
    converge->add_option("--d", conv_args.d);
    converge->add_option("--r", conv_args.r);
    converge->add_option("--levels", conv_args.levels);
    converge->add_option("--dprime", conv_args.dprime);
    converge->add_option("--grid", conv_args.grid);
    converge->add_option("--exact", conv_args.exact, "named exact solution");
    converge->add_option("--out", conv_args.out, "CSV output");
    add_common(converge, conv_args.common);

    auto* lkb = app.add_subcommand("lkb", "KB/LKB spline basis pipeline");
    lkb->require_subcommand(1);
    LkbBuildArgs lkb_build_args;
    auto* lkb_build = lkb->add_subcommand("build", "build and persist an LKB basis");
    lkb_build->add_option("--n", lkb_build_args.n, "knot-count parameter (basis size 2n)");
    lkb_build->add_option("--k", lkb_build_args.k, "B-spline degree");
    lkb_build->add_option("--resolution", lkb_build_args.resolution, "inner-function table depth");
    lkb_build->add_option("--grid-n", lkb_build_args.grid_n, "smoothing sample grid side");
    lkb_build->add_option("--lambda", lkb_build_args.lambda, "smoothing penalty weight");
    lkb_build->add_option("--out", lkb_build_args.out, "output directory")->required();
    add_common(lkb_build, lkb_build_args.common);
    LkbFitArgs lkb_fit_args;
    auto* lkb_fit = lkb->add_subcommand("fit", "least-squares fit of a target onto an LKB basis");
    lkb_fit->add_option("--basis", lkb_fit_args.basis, "directory from lkb build")->required();
    lkb_fit->add_option("--target", lkb_fit_args.target, "f1..f10 or a named function");
    lkb_fit->add_option("--grid-n", lkb_fit_args.grid_n);
    lkb_fit->add_option("--test-n", lkb_fit_args.test_n);
    lkb_fit->add_option("--out", lkb_fit_args.out, "basis coefficient CSV");
    add_common(lkb_fit, lkb_fit_args.common);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "RMSE table of the ten benchmark functions");
    bench->add_option("--sizes", bench_args.sizes, "comma-separated n values");
    bench->add_option("--resolution", bench_args.resolution);
    bench->add_option("--grid-n", bench_args.grid_n);
    bench->add_option("--test-n", bench_args.test_n);
    bench->add_option("--out", bench_args.out, "CSV output");
    add_common(bench, bench_args.common);

    try {
        app.parse(argc, argv);
        if (*dim) return run_dim(dim_args);
        if (*fit) return run_fit(fit_args);
        if (*interp) return run_fit(interp_args);
        if (*levelset) return run_levelset(ls_args);
        if (*contour) return run_grid(contour_args);
        if (*sample) return run_grid(sample_args);
        if (*poisson) return run_elliptic(poisson_args);
        if (*elliptic) return run_elliptic(elliptic_args);
        if (*converge) return run_converge(conv_args);
        if (*lkb_build) return run_lkb_build(lkb_build_args);
        if (*lkb_fit) return run_lkb_fit(lkb_fit_args);
        if (*bench) return run_bench(bench_args);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        // Numerical failures (infeasibility, rank problems, bad files at
        // solve time) land here.
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
