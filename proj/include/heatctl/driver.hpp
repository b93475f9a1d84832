#pragma once

#include "heatctl/control.hpp"
#include "heatctl/fem.hpp"
#include "heatctl/forward.hpp"
#include "heatctl/nonlinearity.hpp"
#include "heatctl/riesz.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace heatctl {

// Everything one experiment needs: mesh, cached weights, nonlinearity and
// the shared solvers. Immutable except for the factorization cache inside
// the control solver.
struct Workspace {
    WeightParams wp;
    Grid grid;
    QuadGrid quad;
    Nonlinearity g;
    RieszEvaluator riesz;
    ControlSolver solver;
    double nu = 0.1;
    int threads = 1;

    Workspace(const WeightParams& wp_, const Grid& grid_,
              const Nonlinearity& g_, int quad_order, int riesz_refine,
              SolverOptions sopt, double nu_, int threads_)
        : wp(wp_), grid(grid_),
          quad(build_quadrature(grid_, quad_order, wp_, threads_)), g(g_),
          riesz(quad, riesz_refine, threads_), solver(quad, sopt, threads_),
          nu(nu_), threads(threads_) {}
};

// State of the iteration, kept entirely in weighted coordinates:
// z = rho*y and r = rho2*B at quadrature points, the control as the dual
// coefficient field mf with f = -rho0^{-1} mf on q_T.
struct IterateState {
    std::vector<double> z;
    C1Field mf;
    std::vector<double> mf_samples;
    std::vector<double> r;
    double E = 0.0;
    int k = 0;
};

struct IterationRecord {
    int k = 0;
    double rel_dy = 0.0; // ||y_k - y_{k-1}|| / ||y_{k-1}||, 0 at k = 0
    double rel_df = 0.0;
    double norm_y = 0.0; // ||y_k||_{L2(Q_T)}
    double norm_f = 0.0; // ||f_k||_{L2(q_T)}
    double sqrt2E = 0.0;
    double lambda = 0.0; // step taken from state k; 0 on the final row
};

enum class Variant { ls, newton, picard };
enum class RunStatus { converged = 0, diverged = 2, maxiter = 3 };

struct RunConfig {
    double epsilon = 1e-6;     // stop when E < epsilon
    double step_max = 1.0;     // line-search interval [0, step_max]
    int max_iters = 50;
    Variant variant = Variant::ls;
    double divergence_cap = 20.0; // abort when sqrt(2E) > cap * initial
    double picard_tol = 1e-3;     // rel_dy stop for the Picard baseline
};

struct RunResult {
    std::vector<IterationRecord> records;
    RunStatus status = RunStatus::maxiter;
    IterateState state; // final iterate
    bool picard_converged = false; // deviation flag for the baseline
    std::vector<double> direction_ratio; // (||zeta||+||mu||_qT)/sqrt(E)
};

class Driver {
public:
    explicit Driver(Workspace& ws) : ws_(ws) {}

    IterateState init_state(const std::function<double(double)>& u0);

    ControlUpdate direction(const IterateState& s);

    // rho2 * l(y, -lambda Y^1) with l(y,v) = g(y+v) - g(y) - g'(y) v,
    // evaluated in the weighted, underflow-safe form.
    void rho2_l(const IterateState& s, const ControlUpdate& u, double lambda,
                std::vector<double>& out) const;

    double E_of_lambda(const IterateState& s, const ControlUpdate& u,
                       double lambda) const;

    // coarse scan (64 samples of [0, step_max]) plus golden-section
    // refinement; never returns a lambda with E above E(0)
    double line_search(const IterateState& s, const ControlUpdate& u,
                       double step_max) const;

    IterateState step(const IterateState& s, const ControlUpdate& u,
                      double lambda) const;

    RunResult run(const std::function<double(double)>& u0,
                  const RunConfig& cfg);

    RunResult picard_run(const std::function<double(double)>& u0,
                         const RunConfig& cfg);

    // quadrature norms of the unweighted state/control
    double norm_y(std::span<const double> z) const;
    double norm_f(std::span<const double> mf_samples) const;

private:
    Workspace& ws_;

    IterationRecord make_record(const IterateState& s,
                                const IterateState* prev) const;
};

// Least-squares slope p of log e_{k+1} against log e_k over the trailing
// window (at least min_tail pairs, at most the last quartile when larger).
double convergence_order(const std::vector<IterationRecord>& records,
                         int min_tail = 3);

// Rebuilds f(x,t) = -rho0^{-1} mf 1_omega as a plain evaluator.
std::function<double(double, double)>
control_evaluator(const Workspace& ws, const C1Field& mf);

struct NullControlReport {
    double ratio = 0.0; // ||y(T)|| / ||u0||
    Trajectory trajectory;
};

NullControlReport null_control_report(const Workspace& ws,
                                      const IterateState& s,
                                      const std::function<double(double)>& u0,
                                      const ForwardConfig& fcfg);

} // namespace heatctl
