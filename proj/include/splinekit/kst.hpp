#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "splinekit/fit.hpp"
#include "splinekit/targets.hpp"

namespace splinekit::kst {

/// Kolmogorov inner data for d = 2: weights lambda and 2d+1 = 5 strictly
/// increasing tabulated functions phi_q on [0,1], evaluated by linear
/// interpolation between table entries.
struct InnerFunctions {
    int dim_d = 2;
    std::array<double, 2> lambda{};
    int resolution = 0;                        // base-6 digit depth
    std::vector<std::vector<double>> phi_tab;  // 5 tables on the uniform 6^resolution grid

    double phi(int q, double x) const;
    double inner_arg(int q, const Point2& x) const;  // lambda1 phi_q(x1) + lambda2 phi_q(x2)
};

InnerFunctions build_inner_functions(int resolution);

/// Kp_n(x) = sum_q (lambda1 phi_q(x1) + lambda2 phi_q(x2))^n.
double k_polynomial(const InnerFunctions& inner, int n, const Point2& x);

/// Univariate B-spline basis (degree k, clamped equally spaced knots on
/// [0,2]) composed with the inner functions: n*d = 2n KB basis functions.
struct KBBasis {
    InnerFunctions inner;
    int n = 0;  // knot-count parameter; basis size = n * dim_d
    int k = 3;  // B-spline degree
    std::vector<double> knots;
    // Maps the composed argument onto the full knot interval [0, 2]; without
    // it only [0, lambda1 + lambda2] is reachable and the B-splines supported
    // beyond that point never activate.
    double arg_scale = 1.0;

    int size() const { return n * inner.dim_d; }
    /// Single univariate basis function B_i at t in [0, 2].
    double bspline(int i, double t) const;
    /// All nonzero basis values at t: first index and k+1 values.
    void bspline_nonzero(double t, int& first, std::vector<double>& vals) const;
};

KBBasis make_kb_basis(InnerFunctions inner, int n, int k = 3);

double kb_eval(const KBBasis& basis, int i, const Point2& x);

/// All KB basis values at x at once (cheaper than size() kb_eval calls).
Eigen::VectorXd kb_eval_all(const KBBasis& basis, const Point2& x);

struct LKBBasis {
    KBBasis kb;
    std::shared_ptr<const SplineSpace> space;   // S^2_8 on the 32-triangle square
    Eigen::MatrixXd coeffs;                     // n_coeffs x basis size
    std::vector<double> rmse_vs_raw;            // per basis function, on the build grid
    double max_smoothness_violation = 0;

    Spline spline(int i) const;
};

/// Smooth every KB basis function by penalized least squares on the
/// grid_n^2 uniform grid of [0,1]^2.
LKBBasis lkb_build(const KBBasis& kb, int grid_n = 101, double lambda = 1.0, int threads = 0);

struct DlsResult {
    Eigen::VectorXd coefficients;
    double rmse_train = 0;  // on the fitting grid
    double rmse_test = 0;   // on the 1001^2 grid
    bool rank_deficient = false;
};

DlsResult dls_fit(const LKBBasis& lkb, const targets::Field& f, int grid_n = 101, int test_n = 1001);

struct BenchmarkReport {
    std::vector<int> sizes;
    std::vector<std::string> names;
    Eigen::MatrixXd rmse_test;   // functions x sizes
    Eigen::MatrixXd rmse_train;
};

BenchmarkReport benchmark_suite(const std::vector<int>& sizes, int resolution = 8, int grid_n = 101,
                                int test_n = 1001, int threads = 0);

void save_lkb(const LKBBasis& lkb, const std::string& dir);
LKBBasis load_lkb(const std::string& dir);

}  // namespace splinekit::kst
