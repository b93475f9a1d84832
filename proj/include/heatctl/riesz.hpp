#pragma once

#include "heatctl/fem.hpp"

#include <span>
#include <vector>

namespace heatctl {

// One spatial Poisson (Riesz) solve: -c'' = r on (0,1) with homogeneous
// Dirichlet data, discretized with P1 elements on a uniform mesh. The
// tridiagonal stiffness factorization is computed once and shared across
// every time slice and iteration.
class RieszSlice {
public:
    explicit RieszSlice(int n_cells);

    int n_cells() const { return n_; }

    // ||r||_{H^-1}^2 = int |c'|^2 for the load sampled at (x_q, w_q).
    double hminus_norm_sq(std::span<const double> xq,
                          std::span<const double> wq,
                          std::span<const double> rq) const;

private:
    int n_;
    double h_;
    std::vector<double> diag_; // LDL^T of the stiffness: D entries
    std::vector<double> lower_; // L entries
    mutable std::vector<double> b_, c_; // scratch, one solve at a time
    friend class RieszEvaluator;
};

// Weighted space-time evaluator: E(r) = 1/2 sum_L wt_L ||r(.,t_L)||^2_{H^-1}
// over the Gauss time levels of a QuadGrid.
class RieszEvaluator {
public:
    RieszEvaluator(const QuadGrid& qg, int refine, int threads);

    // r given per quadrature point in QuadGrid layout.
    double weighted_E(std::span<const double> r) const;

    int refine() const { return refine_; }

private:
    const QuadGrid* qg_;
    int refine_;
    int threads_;
    int n_cells_;
    double h_;
    std::vector<double> diag_, lower_;
    // precomputed hat-function scatter of every spatial station
    std::vector<int> station_cell_;
    std::vector<double> station_loc_;

    double level_energy(std::span<const double> r, int level,
                        std::vector<double>& b,
                        std::vector<double>& c) const;
};

} // namespace heatctl
