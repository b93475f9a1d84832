#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatctl/errors.hpp"
#include "heatctl/forward.hpp"

#include <cmath>

using namespace heatctl;

namespace {

auto zero_f = [](double, double) { return 0.0; };

double decay_error(int nt, ForwardConfig::Scheme scheme, int nx = 2049) {
    ForwardConfig cfg;
    cfg.nx = nx;
    cfg.nt = nt;
    cfg.scheme = scheme;
    cfg.nu = 0.1;
    cfg.T = 0.5;
    const double beta = 7.0;
    auto u0 = [beta](double x) { return beta * std::sin(M_PI * x); };
    const Trajectory tr = solve_forward(u0, zero_f, zero_g(), cfg);
    const double exact =
        beta * std::exp(-cfg.nu * M_PI * M_PI * cfg.T) / std::sqrt(2.0);
    return std::abs(tr.norm_final - exact) / exact;
}

} // namespace

TEST_CASE("analytic heat decay at default resolution") {
    CHECK(decay_error(2048, ForwardConfig::Scheme::crank_nicolson, 513) <=
          1e-4);
}

TEST_CASE("linear reaction shifts the decay rate") {
    ForwardConfig cfg;
    cfg.nu = 0.1;
    cfg.T = 0.5;
    const double c = 2.0;
    auto u0 = [](double x) { return 5.0 * std::sin(M_PI * x); };
    const Trajectory tr = solve_forward(u0, zero_f, linear_g(c), cfg);
    const double exact = 5.0 *
                         std::exp(-(cfg.nu * M_PI * M_PI + c) * cfg.T) /
                         std::sqrt(2.0);
    CHECK(tr.norm_final == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("crank-nicolson is second order in time") {
    const double e1 = decay_error(8, ForwardConfig::Scheme::crank_nicolson);
    const double e2 = decay_error(16, ForwardConfig::Scheme::crank_nicolson);
    const double e3 = decay_error(32, ForwardConfig::Scheme::crank_nicolson);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("implicit euler is first order in time") {
    const double e1 = decay_error(16, ForwardConfig::Scheme::implicit_euler);
    const double e2 = decay_error(32, ForwardConfig::Scheme::implicit_euler);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("L2 norm is nonincreasing without forcing") {
    ForwardConfig cfg;
    cfg.nx = 257;
    cfg.nt = 256;
    cfg.nu = 0.1;
    cfg.T = 0.5;
    auto u0 = [](double x) {
        return std::sin(M_PI * x) + 0.5 * std::sin(5 * M_PI * x);
    };
    const Trajectory tr = solve_forward(u0, zero_f, zero_g(), cfg);
    for (std::size_t i = 1; i < tr.norms.size(); ++i)
        CHECK(tr.norms[i] <= tr.norms[i - 1] * (1 + 1e-13));
}

TEST_CASE("localized forcing is integrated correctly") {
    // forced steady-ish check: y_t - nu y_xx = f with f chosen so that
    // y(x,t) = t sin(pi x) is exact when g = 0
    ForwardConfig cfg;
    cfg.nx = 513;
    cfg.nt = 512;
    cfg.nu = 0.1;
    cfg.T = 0.5;
    auto u0 = [](double) { return 0.0; };
    auto f = [&](double x, double t) {
        return std::sin(M_PI * x) *
               (1.0 + cfg.nu * M_PI * M_PI * t);
    };
    const Trajectory tr = solve_forward(u0, f, zero_g(), cfg);
    const double exact = cfg.T / std::sqrt(2.0);
    CHECK(tr.norm_final == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("uncontrolled semilinear run grows (negative control sanity)") {
    ForwardConfig cfg;
    cfg.nu = 0.1;
    cfg.T = 0.5;
    cfg.nx = 257;
    cfg.nt = 512;
    auto u0 = [](double x) { return 10.0 * std::sin(M_PI * x); };
    const Trajectory tr = solve_forward(u0, zero_f, paper_g(), cfg);
    // the reaction term feeds the state: far from any null control
    CHECK(tr.norm_final / tr.norm_u0 > 0.5);
}

TEST_CASE("newton stagnation and config validation are reported") {
    ForwardConfig cfg;
    cfg.nx = 5; // too coarse
    CHECK_THROWS_AS(
        solve_forward([](double) { return 0.0; }, zero_f, zero_g(), cfg),
        ConfigError);
}
