#pragma once

#include "heatctl/nonlinearity.hpp"

#include <functional>
#include <string>
#include <vector>

namespace heatctl {

// Initial-value solver for y_t - nu y_xx + g(y) = f 1_omega, used to verify
// the computed controls. Method of lines (P1 in space) with implicit time
// stepping; deliberately a different discretization family from the
// space-time solver so that agreement is evidence.
struct ForwardConfig {
    int nx = 513;  // spatial nodes (including both boundary nodes)
    int nt = 2048; // time steps
    enum class Scheme { implicit_euler, crank_nicolson };
    Scheme scheme = Scheme::crank_nicolson;
    double newton_tol = 1e-10;
    int newton_maxit = 30;
    double nu = 0.1;
    double T = 0.5;
    double blowup_cap = 1e8;
};

struct Trajectory {
    std::vector<double> final_y;    // nodal values at t = T
    std::vector<double> norm_times; // sampled times
    std::vector<double> norms;      // ||y(t)||_{L2}
    double norm_u0 = 0.0;
    double norm_final = 0.0;
    bool blew_up = false;
    double blowup_time = -1.0;
};

// f(x, t) must be evaluable on [0,1]x[0,T] (zero outside omega already
// folded in by the caller).
Trajectory solve_forward(const std::function<double(double)>& u0,
                         const std::function<double(double, double)>& f,
                         const Nonlinearity& g, const ForwardConfig& cfg);

} // namespace heatctl
