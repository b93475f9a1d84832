#pragma once

#include "heatctl/control.hpp"
#include "heatctl/driver.hpp"
#include "heatctl/forward.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heatctl {

// Flat key=value experiment configuration. Every key has a default except
// u0.beta, which a run must set.
struct ExperimentConfig {
    // geometry
    double omega_a = 0.1;
    double omega_b = 0.3;
    double T = 0.5;
    double nu = 0.1;
    // initial data u0(x) = beta sin(pi x)
    std::optional<double> u0_beta;
    // nonlinearity
    std::string g_kind = "paper"; // paper | linear | zero | custom-table
    double g_a = 0.1;
    double g_alpha = 0.95;
    double g_c = 1.0; // slope of the linear kind
    bool g_smooth_inner = false;
    std::string g_table; // path for custom-table
    // mesh
    int mesh_nx = 64;
    int mesh_nt = 64;
    int mesh_quad_order = 5;
    // solver
    std::string solver_kind = "direct"; // direct | cg
    std::string solver_constraint = "projected"; // projected | pointwise
    double solver_cg_tol = 1e-10;
    int solver_cg_maxit = 20000;
    // riesz
    int riesz_refine = 4;
    // forward oracle
    int forward_nx = 513;
    int forward_nt = 2048;
    std::string forward_scheme = "crank_nicolson";
    double forward_newton_tol = 1e-10;
    int forward_newton_maxit = 30;
    // run
    double run_epsilon = 1e-6;
    double run_step_max = 1.0;
    std::string run_variant = "ls"; // ls | newton | picard
    int run_max_iters = 50;
    double run_divergence_cap = 20.0;
    double run_picard_tol = 1e-3;
    // weights
    double weights_s = 6e-4;
    double weights_lam = 1.0;
    double weights_m = 1.1;
    // output
    std::string output_dir = ".";

    WeightParams weight_params() const;
    Grid grid() const;
    Nonlinearity nonlinearity() const;
    SolverOptions solver_options() const;
    ForwardConfig forward_config() const;
    RunConfig run_config() const;
    double beta_or_throw() const;

    // resolved key=value lines, one per key, in canonical order
    std::vector<std::string> dump() const;
};

// Parses a flat key=value file ('#' comments, blank lines allowed).
// Unknown keys, malformed lines and bad values raise ConfigError with the
// file, line number and key.
ExperimentConfig parse_config_file(const std::string& path);

// Applies one "key=value" override (used for --set and the C API).
void apply_override(ExperimentConfig& cfg, const std::string& keyval);
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

// One line per key: "key  default  description".
std::string config_key_help();

} // namespace heatctl
