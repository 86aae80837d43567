#include "splinekit/lsq.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace splinekit {

namespace {

// Second-derivative coefficient maps on one triangle: d-coeffs to the
// (d-2)-coeffs of s_xx, s_xy, s_yy.
struct SecondDerivMaps {
    Eigen::MatrixXd xx, xy, yy;
};

SecondDerivMaps second_deriv_maps(int d, const std::array<Point2, 3>& v) {
    Eigen::MatrixXd Rx_d = bform::directional_reduction(d, v, 1, 0);
    Eigen::MatrixXd Ry_d = bform::directional_reduction(d, v, 0, 1);
    Eigen::MatrixXd Rx_d1 = bform::directional_reduction(d - 1, v, 1, 0);
    Eigen::MatrixXd Ry_d1 = bform::directional_reduction(d - 1, v, 0, 1);
    return {Rx_d1 * Rx_d, Ry_d1 * Rx_d, Ry_d1 * Ry_d};
}

}  // namespace

Eigen::SparseMatrix<double> energy_matrix(const SplineSpace& space) {
    const int d = space.d;
    const int n = space.n_coeffs();
    Eigen::SparseMatrix<double> E(n, n);
    if (d < 2) return E;
    std::vector<Eigen::Triplet<double>> trip;
    for (int t = 0; t < space.tri.triangle_count(); ++t) {
        auto v = space.tri.corners(t);
        auto D = second_deriv_maps(d, v);
        Eigen::MatrixXd G = bform::product_integral_matrix(d - 2, v);
        Eigen::MatrixXd Et =
            D.xx.transpose() * G * D.xx + 2.0 * D.xy.transpose() * G * D.xy + D.yy.transpose() * G * D.yy;
        int base = space.global_index(t, 0);
        for (int i = 0; i < Et.rows(); ++i)
            for (int j = 0; j < Et.cols(); ++j)
                if (Et(i, j) != 0.0) trip.emplace_back(base + i, base + j, Et(i, j));
    }
    E.setFromTriplets(trip.begin(), trip.end());
    return E;
}

Eigen::SparseMatrix<double> energy_root(const SplineSpace& space) {
    const int d = space.d;
    const int n = space.n_coeffs();
    if (d < 2) return Eigen::SparseMatrix<double>(0, n);
    const int m = bform::coeff_count(d - 2);
    std::vector<Eigen::Triplet<double>> trip;
    int row = 0;
    for (int t = 0; t < space.tri.triangle_count(); ++t) {
        auto v = space.tri.corners(t);
        auto D = second_deriv_maps(d, v);
        Eigen::MatrixXd G = bform::product_integral_matrix(d - 2, v);
        Eigen::MatrixXd Lt = Eigen::LLT<Eigen::MatrixXd>(G).matrixU();  // G = Lt^T Lt
        Eigen::MatrixXd rows(3 * m, D.xx.cols());
        rows.topRows(m) = Lt * D.xx;
        rows.middleRows(m, m) = std::sqrt(2.0) * Lt * D.xy;
        rows.bottomRows(m) = Lt * D.yy;
        int base = space.global_index(t, 0);
        for (int i = 0; i < rows.rows(); ++i)
            for (int j = 0; j < rows.cols(); ++j)
                if (rows(i, j) != 0.0) trip.emplace_back(row + i, base + j, rows(i, j));
        row += 3 * m;
    }
    Eigen::SparseMatrix<double> R(row, n);
    R.setFromTriplets(trip.begin(), trip.end());
    return R;
}

AugLagSolver::AugLagSolver(
    int ncols, const std::vector<std::pair<Eigen::SparseMatrix<double>, double>>& objectives,
    const std::optional<std::pair<Eigen::SparseMatrix<double>, double>>& energy_root_lambda,
    const Eigen::SparseMatrix<double>& equality, const SolveOptions& opts)
    : ncols_(ncols), C_(equality), opts_(opts) {
    int obj_rows_total = 0;
    double frob2 = 0;
    for (const auto& [A, w] : objectives) {
        if (A.cols() != ncols) throw std::invalid_argument("lsq: objective column count mismatch");
        obj_rows_.push_back(static_cast<int>(A.rows()));
        weights_.push_back(w);
        A_.push_back(A);
        obj_rows_total += static_cast<int>(A.rows());
        frob2 += w * A.squaredNorm();
    }
    double lambda = 0.0;
    const Eigen::SparseMatrix<double>* root = nullptr;
    if (energy_root_lambda && energy_root_lambda->second > 0 && energy_root_lambda->first.rows() > 0) {
        root = &energy_root_lambda->first;
        lambda = energy_root_lambda->second;
        energy_rows_ = static_cast<int>(root->rows());
        obj_rows_total += energy_rows_;
        frob2 += lambda * root->squaredNorm();
    }
    if (obj_rows_total == 0 && C_.rows() == 0) throw std::invalid_argument("lsq: empty problem");
    double scale = obj_rows_total > 0 ? frob2 / obj_rows_total : 1.0;
    mu_ = opts.mu_factor * std::max(scale, 1e-30);

    int total = obj_rows_total + static_cast<int>(C_.rows());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(total, ncols);
    int at = 0;
    for (size_t k = 0; k < A_.size(); ++k) {
        M.middleRows(at, obj_rows_[k]) = std::sqrt(weights_[k]) * Eigen::MatrixXd(A_[k]);
        at += obj_rows_[k];
    }
    if (root) {
        root_ = std::sqrt(lambda) * (*root);
        M.middleRows(at, energy_rows_) = Eigen::MatrixXd(root_);
        at += energy_rows_;
    }
    if (C_.rows() > 0) M.middleRows(at, C_.rows()) = std::sqrt(mu_) * Eigen::MatrixXd(C_);
    cod_.setThreshold(opts.rank_tol);
    cod_.compute(M);
}

SolveReport AugLagSolver::solve(const std::vector<Eigen::VectorXd>& f,
                                const Eigen::VectorXd& g) const {
    if (f.size() != A_.size()) throw std::invalid_argument("lsq: rhs count mismatch");
    int obj_rows_total = 0;
    for (int r : obj_rows_) obj_rows_total += r;
    const int crows = static_cast<int>(C_.rows());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(obj_rows_total + energy_rows_ + crows);
    int at = 0;
    for (size_t k = 0; k < A_.size(); ++k) {
        if (f[k].size() != obj_rows_[k]) throw std::invalid_argument("lsq: rhs length mismatch");
        rhs.segment(at, obj_rows_[k]) = std::sqrt(weights_[k]) * f[k];
        at += obj_rows_[k];
    }
    at += energy_rows_;  // energy target is zero

    SolveReport rep;
    rep.rank_deficient = cod_.rank() < ncols_;
    if (rep.rank_deficient)
        std::cerr << "lsq: warning: rank-deficient system (rank " << cod_.rank() << " of " << ncols_
                  << ")\n";
    // The penalty scaling makes the stacked matrix ill conditioned, so one
    // round of residual-based refinement per solve recovers the digits the
    // plain QR solve loses.
    auto refined_solve = [&](const Eigen::VectorXd& b) {
        Eigen::VectorXd x = cod_.solve(b);
        for (int pass = 0; pass < 2; ++pass) {
            Eigen::VectorXd r = b;
            int pos = 0;
            for (size_t k = 0; k < A_.size(); ++k) {
                r.segment(pos, obj_rows_[k]) -= std::sqrt(weights_[k]) * (A_[k] * x);
                pos += obj_rows_[k];
            }
            if (energy_rows_ > 0) {
                r.segment(pos, energy_rows_) -= root_ * x;
                pos += energy_rows_;
            }
            if (crows > 0) r.segment(pos, crows) -= std::sqrt(mu_) * (C_ * x);
            x += cod_.solve(r);
        }
        return x;
    };

    Eigen::VectorXd c = Eigen::VectorXd::Zero(ncols_);
    if (crows == 0) {
        c = refined_solve(rhs);
        rep.iterations = 1;
    } else {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(crows);  // scaled multipliers
        for (int it = 0; it < opts_.max_outer; ++it) {
            rhs.segment(at, crows) = std::sqrt(mu_) * (g - u);
            c = refined_solve(rhs);
            Eigen::VectorXd resid = C_ * c - g;
            u += resid;
            rep.iterations = it + 1;
            if (resid.lpNorm<Eigen::Infinity>() <= opts_.accept_violation) break;
        }
        rep.constraint_violation = (C_ * c - g).lpNorm<Eigen::Infinity>();
    }
    rep.c = std::move(c);
    for (size_t k = 0; k < A_.size(); ++k) rep.residuals.push_back((A_[k] * rep.c - f[k]).norm());
    return rep;
}

namespace {

SolveReport solve_kkt(const QuadraticProgram& qp, const Eigen::SparseMatrix<double>& C,
                      const Eigen::VectorXd& g) {
    const int n = qp.n;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (const auto& term : qp.terms) {
        Eigen::MatrixXd Ad(term.A);
        M += term.w * Ad.transpose() * Ad;
        b += term.w * Ad.transpose() * term.f;
    }
    if (qp.energy && qp.energy->lambda > 0) M += qp.energy->lambda * Eigen::MatrixXd(qp.energy->E);
    const int m = static_cast<int>(C.rows());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = 2.0 * M;
    if (m > 0) {
        Eigen::MatrixXd Cd(C);
        K.topRightCorner(n, m) = Cd.transpose();
        K.bottomLeftCorner(m, n) = Cd;
    }
    Eigen::VectorXd rhs(n + m);
    rhs.head(n) = 2.0 * b;
    rhs.tail(m) = g;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    lu.setThreshold(qp.options.rank_tol);
    SolveReport rep;
    rep.rank_deficient = lu.rank() < n + m;
    Eigen::VectorXd sol = lu.solve(rhs);
    rep.c = sol.head(n);
    rep.iterations = 1;
    if (m > 0) rep.constraint_violation = (C * rep.c - g).lpNorm<Eigen::Infinity>();
    for (const auto& term : qp.terms) rep.residuals.push_back((term.A * rep.c - term.f).norm());
    return rep;
}

}  // namespace

SolveReport solve(const QuadraticProgram& qp) {
    // Stack equality blocks into a single system.
    int crows = 0;
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> gall;
    for (const auto& block : qp.equalities) {
        if (block.cols != qp.n) throw std::invalid_argument("lsq: equality column count mismatch");
        for (const auto& t : block.triplets) trip.emplace_back(t.row() + crows, t.col(), t.value());
        for (int i = 0; i < block.rhs.size(); ++i) gall.push_back(block.rhs[i]);
        crows += block.rows;
    }
    Eigen::SparseMatrix<double> C(crows, qp.n);
    C.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd g = Eigen::Map<Eigen::VectorXd>(gall.data(), gall.size());

    SolveReport rep;
    if (qp.options.method == SolveMethod::KKT) {
        rep = solve_kkt(qp, C, g);
    } else {
        std::vector<std::pair<Eigen::SparseMatrix<double>, double>> objectives;
        std::vector<Eigen::VectorXd> fs;
        for (const auto& term : qp.terms) {
            objectives.emplace_back(term.A, term.w);
            fs.push_back(term.f);
        }
        std::optional<std::pair<Eigen::SparseMatrix<double>, double>> er;
        if (qp.energy && qp.energy->lambda > 0) {
            double lambda = qp.energy->lambda;
            if (qp.terms.empty() && qp.energy->root.rows() > 0) {
                // Pure minimum-energy problems are invariant under positive
                // scaling of the objective; normalize so the mean squared row
                // norm is 1 and the penalty block stays well balanced.
                double mean = qp.energy->root.squaredNorm() / qp.energy->root.rows();
                if (mean > 0) lambda /= mean;
            }
            er.emplace(qp.energy->root, lambda);
        }
        AugLagSolver solver(qp.n, objectives, er, C, qp.options);
        rep = solver.solve(fs, g);
    }
    if (crows > 0 && rep.constraint_violation > qp.options.infeasible_tol)
        throw std::runtime_error("lsq: infeasible problem (constraint violation " +
                                 std::to_string(rep.constraint_violation) + ")");
    return rep;
}

}  // namespace splinekit
