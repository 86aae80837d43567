#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>

#include "splinekit/constraints.hpp"

namespace splinekit {

struct ObjectiveTerm {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd f;
    double w = 1.0;
};

struct EnergyTerm {
    Eigen::SparseMatrix<double> E;     // c^T E c = E2(s)
    Eigen::SparseMatrix<double> root;  // R with R^T R = E, used for stacking
    double lambda = 0.0;
};

enum class SolveMethod { AUG_LAGRANGIAN, KKT };

struct SolveOptions {
    double rank_tol = 1e-9;          // relative, rank-revealing factorization
    // Early-exit constraint tolerance. Kept well below the 1e-8
    // certification threshold: derivative jumps amplify coefficient-level
    // slack by O(d^2 / h^2).
    double accept_violation = 1e-12;
    double infeasible_tol = 1e-4;    // hard failure after max_outer iterations
    double mu_factor = 1e8;          // penalty = mu_factor * objective scale
    int max_outer = 3;
    SolveMethod method = SolveMethod::AUG_LAGRANGIAN;
};

struct QuadraticProgram {
    int n = 0;
    std::vector<ObjectiveTerm> terms;
    std::optional<EnergyTerm> energy;
    std::vector<ConstraintBlock> equalities;
    SolveOptions options;
};

struct SolveReport {
    Eigen::VectorXd c;
    std::vector<double> residuals;      // ||A_k c - f_k|| per objective term
    double constraint_violation = 0.0;  // max over blocks of ||C c - g||_inf
    int iterations = 0;
    bool rank_deficient = false;
    std::optional<double> epsilon1;  // PDE residual, filled by the pde layer
};

/// Thin-plate energy matrix: c^T E c = int |s_xx|^2 + 2|s_xy|^2 + |s_yy|^2.
/// Zero for d < 2; kernel contains all global linear polynomials.
Eigen::SparseMatrix<double> energy_matrix(const SplineSpace& space);

/// Per-triangle factor R with R^T R = energy_matrix(space).
Eigen::SparseMatrix<double> energy_root(const SplineSpace& space);

/// Reusable stacked-QR solver: factorization depends only on the matrices,
/// so many right-hand sides share one decomposition.
class AugLagSolver {
  public:
    AugLagSolver(int ncols, const std::vector<std::pair<Eigen::SparseMatrix<double>, double>>& objectives,
                 const std::optional<std::pair<Eigen::SparseMatrix<double>, double>>& energy_root_lambda,
                 const Eigen::SparseMatrix<double>& equality, const SolveOptions& opts);

    /// f_k per objective term, g for the stacked equality block.
    SolveReport solve(const std::vector<Eigen::VectorXd>& f, const Eigen::VectorXd& g) const;

    double mu() const { return mu_; }

  private:
    int ncols_;
    std::vector<int> obj_rows_;
    std::vector<double> weights_;
    int energy_rows_ = 0;
    Eigen::SparseMatrix<double> root_;  // sqrt(lambda)-scaled energy factor
    Eigen::SparseMatrix<double> C_;
    double mu_ = 0.0;
    SolveOptions opts_;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
    std::vector<Eigen::SparseMatrix<double>> A_;  // kept for residual reporting
};

SolveReport solve(const QuadraticProgram& qp);

}  // namespace splinekit
