#include "splinekit/kst.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "splinekit/bform.hpp"

namespace splinekit::kst {

namespace {

// Digit injections {0..5} -> {0..6}: s_q skips the value q+1 and fixes 0,
// so refining the table by one base-6 digit leaves existing entries alone.
int inject(int q, int digit) { return digit + (digit >= q + 1 ? 1 : 0); }

}  // namespace

InnerFunctions build_inner_functions(int resolution) {
    if (resolution < 1 || resolution > 10)
        throw std::invalid_argument("build_inner_functions: resolution must be in [1, 10]");
    InnerFunctions inner;
    inner.lambda = {0.55, 0.55 * (std::sqrt(2.0) - 1.0)};
    inner.resolution = resolution;
    long table_n = 1;
    for (int i = 0; i < resolution; ++i) table_n *= 6;
    inner.phi_tab.assign(5, std::vector<double>(table_n + 1));
    for (int q = 0; q < 5; ++q) {
        auto& tab = inner.phi_tab[q];
        for (long j = 0; j < table_n; ++j) {
            // Base-6 digits of j/6^R reinterpreted in base 7 through s_q.
            double v = 0, scale = 1.0 / 7.0;
            long rest = j;
            long place = table_n / 6;
            for (int i = 0; i < resolution; ++i) {
                int digit = static_cast<int>(rest / place);
                rest %= place;
                place = std::max(place / 6, 1L);
                v += inject(q, digit) * scale;
                scale /= 7.0;
            }
            tab[j] = v;
        }
        // s_q(5) = 6 for every q, so the closing entry lands exactly on 1.
        tab[table_n] = tab[table_n - 1] + std::pow(7.0, -resolution);
    }
    return inner;
}

double InnerFunctions::phi(int q, double x) const {
    if (q < 0 || q >= 5) throw std::out_of_range("InnerFunctions::phi: q must be in [0, 5)");
    x = std::clamp(x, 0.0, 1.0);
    const auto& tab = phi_tab[q];
    long n = static_cast<long>(tab.size()) - 1;
    double t = x * n;
    long i = std::min(static_cast<long>(t), n - 1);
    double frac = t - i;
    return tab[i] + frac * (tab[i + 1] - tab[i]);
}

double InnerFunctions::inner_arg(int q, const Point2& x) const {
    return lambda[0] * phi(q, x.x) + lambda[1] * phi(q, x.y);
}

double k_polynomial(const InnerFunctions& inner, int n, const Point2& x) {
    if (n < 0) throw std::invalid_argument("k_polynomial: n must be >= 0");
    double acc = 0;
    for (int q = 0; q < 5; ++q) acc += std::pow(inner.inner_arg(q, x), n);
    return acc;
}

KBBasis make_kb_basis(InnerFunctions inner, int n, int k) {
    if (k < 1) throw std::invalid_argument("make_kb_basis: degree must be >= 1");
    if (n * inner.dim_d < k + 1)
        throw std::invalid_argument("make_kb_basis: need n * d >= degree + 1");
    KBBasis basis;
    basis.inner = std::move(inner);
    basis.n = n;
    basis.k = k;
    const int N = basis.size();
    const double hi = static_cast<double>(basis.inner.dim_d);
    basis.knots.resize(N + k + 1);
    for (int j = 0; j <= k; ++j) basis.knots[j] = 0.0;
    for (int j = k + 1; j < N; ++j) basis.knots[j] = hi * (j - k) / (N - k);
    for (int j = N; j <= N + k; ++j) basis.knots[j] = hi;
    basis.arg_scale = hi / (basis.inner.lambda[0] + basis.inner.lambda[1]);
    return basis;
}

namespace {

int find_span(const KBBasis& basis, double t) {
    const int N = basis.size(), k = basis.k;
    if (t >= basis.knots[N]) return N - 1;
    if (t <= basis.knots[k]) return k;
    int lo = k, hi = N;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        (t < basis.knots[mid] ? hi : lo) = mid;
    }
    return lo;
}

}  // namespace

void KBBasis::bspline_nonzero(double t, int& first, std::vector<double>& vals) const {
    // Cox-de Boor triangle for the k+1 basis functions alive on the span.
    int mu = find_span(*this, t);
    first = mu - k;
    vals.assign(k + 1, 0.0);
    vals[0] = 1.0;
    std::vector<double> left(k + 1), right(k + 1);
    for (int j = 1; j <= k; ++j) {
        left[j] = t - knots[mu + 1 - j];
        right[j] = knots[mu + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            double tmp = vals[r] / (right[r + 1] + left[j - r]);
            vals[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        vals[j] = saved;
    }
}

double KBBasis::bspline(int i, double t) const {
    if (i < 0 || i >= size()) throw std::out_of_range("KBBasis::bspline: index out of range");
    int first;
    std::vector<double> vals;
    bspline_nonzero(t, first, vals);
    if (i < first || i > first + k) return 0.0;
    return vals[i - first];
}

double kb_eval(const KBBasis& basis, int i, const Point2& x) {
    if (i < 0 || i >= basis.size()) throw std::out_of_range("kb_eval: index out of range");
    double acc = 0;
    for (int q = 0; q < 5; ++q) acc += basis.bspline(i, basis.arg_scale * basis.inner.inner_arg(q, x));
    return acc;
}

Eigen::VectorXd kb_eval_all(const KBBasis& basis, const Point2& x) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.size());
    int first;
    std::vector<double> vals;
    for (int q = 0; q < 5; ++q) {
        basis.bspline_nonzero(basis.arg_scale * basis.inner.inner_arg(q, x), first, vals);
        for (int r = 0; r <= basis.k; ++r) out[first + r] += vals[r];
    }
    return out;
}

namespace {

std::vector<Point2> unit_grid(int grid_n) {
    std::vector<Point2> pts;
    pts.reserve(static_cast<size_t>(grid_n) * grid_n);
    for (int j = 0; j < grid_n; ++j)
        for (int i = 0; i < grid_n; ++i)
            pts.push_back({double(i) / (grid_n - 1), double(j) / (grid_n - 1)});
    return pts;
}

// Direct cell lookup for the square_grid(k) layout on [0,1]^2.
struct GridLocator {
    int k;
    explicit GridLocator(const SplineSpace& space) {
        int t = space.tri.triangle_count();
        k = static_cast<int>(std::lround(std::sqrt(t / 2.0)));
        if (2 * k * k != t) throw std::logic_error("GridLocator: not a square_grid mesh");
    }
    std::pair<int, bform::Bary> operator()(const SplineSpace& space, const Point2& p) const {
        int i = std::min(static_cast<int>(p.x * k), k - 1);
        int j = std::min(static_cast<int>(p.y * k), k - 1);
        double fx = p.x * k - i, fy = p.y * k - j;
        int t = 2 * (j * k + i) + (fy > fx ? 1 : 0);
        return {t, bform::barycentric(space.tri.corners(t), p)};
    }
};

}  // namespace

LKBBasis lkb_build(const KBBasis& kb, int grid_n, double lambda, int threads) {
    if (grid_n < 2) throw std::invalid_argument("lkb_build: grid_n must be >= 2");
    if (threads > 0) Eigen::setNbThreads(threads);
    LKBBasis lkb;
    lkb.kb = kb;
    lkb.space = make_space(square_grid(4), 8, 2);
    const SplineSpace& space = *lkb.space;
    auto pts = unit_grid(grid_n);
    ConstraintBlock I =
        interpolation_matrix(space, pts, Eigen::VectorXd::Zero(static_cast<int>(pts.size())));
    Eigen::SparseMatrix<double> A = I.to_sparse();
    ConstraintBlock H = smoothness_matrix(space);
    SolveOptions opts;
    // One factorization serves every basis function; only the data vector
    // changes between solves.
    AugLagSolver solver(space.n_coeffs(), {{A, 1.0}}, {{energy_root(space), lambda}},
                        H.to_sparse(), opts);
    const int N = kb.size();
    lkb.coeffs.resize(space.n_coeffs(), N);
    lkb.rmse_vs_raw.resize(N);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(H.rows);
    Eigen::MatrixXd values(static_cast<int>(pts.size()), N);
    for (size_t p = 0; p < pts.size(); ++p)
        values.row(static_cast<int>(p)) = kb_eval_all(kb, pts[p]).transpose();
    for (int i = 0; i < N; ++i) {
        SolveReport rep = solver.solve({values.col(i)}, g);
        lkb.coeffs.col(i) = rep.c;
        lkb.rmse_vs_raw[i] = rep.residuals[0] / std::sqrt(double(pts.size()));
        lkb.max_smoothness_violation = std::max(lkb.max_smoothness_violation, rep.constraint_violation);
    }
    return lkb;
}

Spline LKBBasis::spline(int i) const {
    if (i < 0 || i >= coeffs.cols()) throw std::out_of_range("LKBBasis::spline: index out of range");
    return make_spline(space, coeffs.col(i));
}

namespace {

// Rows of LKB basis values at the given points: row p = basis row of the
// spline space at pts[p] times the coefficient matrix.
Eigen::MatrixXd lkb_value_matrix(const LKBBasis& lkb, const std::vector<Point2>& pts) {
    const SplineSpace& space = *lkb.space;
    GridLocator loc(space);
    const int lc = space.local_count();
    Eigen::MatrixXd G(static_cast<int>(pts.size()), lkb.coeffs.cols());
    for (size_t p = 0; p < pts.size(); ++p) {
        auto [t, b] = loc(space, pts[p]);
        Eigen::RowVectorXd basis = bform::eval_basis_row(space.d, b);
        G.row(static_cast<int>(p)) = basis * lkb.coeffs.middleRows(space.global_index(t, 0), lc);
    }
    return G;
}

}  // namespace

DlsResult dls_fit(const LKBBasis& lkb, const targets::Field& f, int grid_n, int test_n) {
    if (grid_n < 2 || test_n < 2) throw std::invalid_argument("dls_fit: grids must have >= 2 points per side");
    auto pts = unit_grid(grid_n);
    Eigen::MatrixXd G = lkb_value_matrix(lkb, pts);
    Eigen::VectorXd z(G.rows());
    for (size_t p = 0; p < pts.size(); ++p) z[static_cast<int>(p)] = f(pts[p].x, pts[p].y);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    qr.setThreshold(1e-9);
    DlsResult result;
    result.coefficients = qr.solve(z);
    result.rank_deficient = qr.rank() < G.cols();
    result.rmse_train = (G * result.coefficients - z).norm() / std::sqrt(double(G.rows()));

    // Combine into one spline coefficient vector, then walk the test grid.
    Eigen::VectorXd chat = lkb.coeffs * result.coefficients;
    const SplineSpace& space = *lkb.space;
    GridLocator loc(space);
    const int lc = space.local_count();
    double sum2 = 0;
    for (int j = 0; j < test_n; ++j) {
        double y = double(j) / (test_n - 1);
        for (int i = 0; i < test_n; ++i) {
            double x = double(i) / (test_n - 1);
            auto [t, b] = loc(space, {x, y});
            double v = bform::eval_bform(space.d, chat.segment(space.global_index(t, 0), lc), b);
            double e = v - f(x, y);
            sum2 += e * e;
        }
    }
    result.rmse_test = std::sqrt(sum2 / (double(test_n) * test_n));
    return result;
}

BenchmarkReport benchmark_suite(const std::vector<int>& sizes, int resolution, int grid_n,
                                int test_n, int threads) {
    if (sizes.empty()) throw std::invalid_argument("benchmark_suite: no sizes given");
    BenchmarkReport report;
    report.sizes = sizes;
    const auto& fns = targets::benchmark_functions();
    for (const auto& [name, fn] : fns) report.names.push_back(name);
    report.rmse_test.resize(static_cast<int>(fns.size()), static_cast<int>(sizes.size()));
    report.rmse_train.resize(static_cast<int>(fns.size()), static_cast<int>(sizes.size()));
    InnerFunctions inner = build_inner_functions(resolution);
    for (size_t s = 0; s < sizes.size(); ++s) {
        KBBasis kb = make_kb_basis(inner, sizes[s]);
        LKBBasis lkb = lkb_build(kb, grid_n, 1.0, threads);
        for (size_t fi = 0; fi < fns.size(); ++fi) {
            DlsResult r = dls_fit(lkb, fns[fi].second, grid_n, test_n);
            report.rmse_test(static_cast<int>(fi), static_cast<int>(s)) = r.rmse_test;
            report.rmse_train(static_cast<int>(fi), static_cast<int>(s)) = r.rmse_train;
        }
    }
    return report;
}

void save_lkb(const LKBBasis& lkb, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream meta(dir + "/meta.txt");
        if (!meta) throw std::runtime_error("cannot write " + dir + "/meta.txt");
        meta.precision(17);
        meta << "resolution " << lkb.kb.inner.resolution << "\n";
        meta << "n " << lkb.kb.n << "\n";
        meta << "degree " << lkb.kb.k << "\n";
        meta << "violation " << lkb.max_smoothness_violation << "\n";
        meta << "rmse_vs_raw";
        for (double r : lkb.rmse_vs_raw) meta << " " << r;
        meta << "\n";
    }
    std::ofstream out(dir + "/coeffs.csv");
    if (!out) throw std::runtime_error("cannot write " + dir + "/coeffs.csv");
    out.precision(17);
    for (int row = 0; row < lkb.coeffs.rows(); ++row) {
        for (int col = 0; col < lkb.coeffs.cols(); ++col) {
            if (col) out << ",";
            out << lkb.coeffs(row, col);
        }
        out << "\n";
    }
}

LKBBasis load_lkb(const std::string& dir) {
    std::ifstream meta(dir + "/meta.txt");
    if (!meta) throw std::runtime_error("cannot open " + dir + "/meta.txt");
    int resolution = 0, n = 0, degree = 3;
    double violation = 0;
    std::vector<double> rmse;
    std::string key;
    while (meta >> key) {
        if (key == "resolution") meta >> resolution;
        else if (key == "n") meta >> n;
        else if (key == "degree") meta >> degree;
        else if (key == "violation") meta >> violation;
        else if (key == "rmse_vs_raw") {
            double r;
            while (meta >> r) rmse.push_back(r);
        }
    }
    if (resolution < 1 || n < 2) throw std::runtime_error("load_lkb: bad metadata in " + dir);
    LKBBasis lkb;
    lkb.kb = make_kb_basis(build_inner_functions(resolution), n, degree);
    lkb.space = make_space(square_grid(4), 8, 2);
    lkb.max_smoothness_violation = violation;
    lkb.rmse_vs_raw = std::move(rmse);
    lkb.coeffs.resize(lkb.space->n_coeffs(), lkb.kb.size());
    std::ifstream in(dir + "/coeffs.csv");
    if (!in) throw std::runtime_error("cannot open " + dir + "/coeffs.csv");
    std::string line;
    for (int row = 0; row < lkb.coeffs.rows(); ++row) {
        if (!std::getline(in, line)) throw std::runtime_error("load_lkb: truncated coefficient file");
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        for (int col = 0; col < lkb.coeffs.cols(); ++col)
            if (!(ls >> lkb.coeffs(row, col)))
                throw std::runtime_error("load_lkb: bad coefficient row " + std::to_string(row));
    }
    return lkb;
}

}  // namespace splinekit::kst
