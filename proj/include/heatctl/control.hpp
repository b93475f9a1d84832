#pragma once

#include "heatctl/fem.hpp"
#include "heatctl/nonlinearity.hpp"
#include "heatctl/riesz.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heatctl {

// Weighted linearized null-control problem: potential A at every
// quadrature point plus either an initial-data source u0 or a residual
// source r = rho2*B sampled on the QuadGrid.
struct LinearizedProblem {
    std::span<const double> A_samples;              // empty means A = 0
    std::function<double(double)> u0;               // initial source
    std::span<const double> residual;               // residual source
    double nu = 0.1;
};

struct SolverOptions {
    enum class Kind { direct, cg };
    Kind kind = Kind::direct;
    double cg_tol = 1e-10;
    int cg_maxit = 20000;
    // The weighted state z of the mixed system lives in a bilinear nodal
    // space; "projected" eliminates it through the lumped mass matrix
    // (the constraint holds against nodal test functions), "pointwise"
    // collocates the constraint at every quadrature point.
    enum class Constraint { projected, pointwise };
    Constraint constraint = Constraint::projected;
};

// The SPD system in the dual variable m: entries
// int D(m_i) D(m_j) + int_{q_T} m_i m_j over the free dofs.
struct PrimalSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::VectorXd load;
};

// Minimizer of the discrete control energy together with the weighted
// state it determines: zeta = D(mu) (projected or pointwise per the
// solver options), F = -rho0^{-1} mu on q_T.
struct ControlUpdate {
    C1Field mu;
    std::vector<double> mu_samples;   // mu at quadrature points
    std::vector<double> zeta_samples; // rho * Y^1 at quadrature points
    std::vector<double> zeta_nodal;   // nodal z (projected mode only)
    double norm_zeta = 0.0;           // ||rho Y^1||_{L2(Q_T)}
    double norm_mu_qT = 0.0;          // ||rho0 F^1||_{L2(q_T)}
};

class ControlSolver {
public:
    ControlSolver(const QuadGrid& qg, SolverOptions opt, int threads);

    const DofMap& dofs() const { return dofs_; }

    // zeta = rho^{-1} L*_A (rho0 mu) evaluated at every quadrature point,
    // expanded through the cached ratio coefficients.
    void apply_D(const C1Field& mu, std::span<const double> A, double nu,
                 std::vector<double>& zeta) const;

    PrimalSystem assemble(const LinearizedProblem& p) const;

    ControlUpdate solve(const LinearizedProblem& p);

    // control energy 1/2||zeta||^2 + 1/2||m||^2_qT - <load,m> for the
    // optimality perturbation check (zeta per the constraint mode)
    double objective(const PrimalSystem& sys, const C1Field& mu,
                     std::span<const double> A, double nu) const;

    // lumped-mass nodal projection of a quadrature-point field onto the
    // bilinear state space, returned as samples at the quadrature points;
    // nodal values optionally exported
    void project_state(std::span<const double> values,
                       std::vector<double>& samples,
                       std::vector<double>* nodal = nullptr) const;

private:
    const QuadGrid* qg_;
    DofMap dofs_;
    SolverOptions opt_;
    int threads_;
    std::vector<std::array<ShapeValue, 16>> shape_; // per reference qpoint
    // state space: bilinear hats on the refined nodal grid. Per
    // reference qpoint the 4 active fine nodes (cell-local) and their
    // hat values.
    static constexpr int kStateRefine = 3;
    static constexpr int kLocalNodes =
        (kStateRefine + 1) * (kStateRefine + 1);
    struct StateHats {
        int loc[4];
        double N[4];
    };
    std::vector<StateHats> state_;
    std::vector<double> lumped_; // lumped state mass, fine grid
    int fine_node(int ix, int jt, int loc) const {
        const int R = kStateRefine;
        const int dif = loc % (R + 1), djf = loc / (R + 1);
        return (R * jt + djf) * (R * qg_->grid.nx + 1) + (R * ix + dif);
    }
    int n_state_nodes() const {
        const int R = kStateRefine;
        return (R * qg_->grid.nx + 1) * (R * qg_->grid.nt + 1);
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    bool pattern_ready_ = false;
};

} // namespace heatctl
