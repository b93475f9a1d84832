#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatctl/fem.hpp"

#include <cmath>
#include <random>

using namespace heatctl;

namespace {

WeightParams test_wp() {
    WeightParams wp;
    wp.s_w = 0.05;
    return wp;
}

} // namespace

TEST_CASE("partition of unity of the value basis") {
    const double hx = 0.125, ht = 0.0625;
    for (double xi : {0.0, 0.17, 0.5, 0.99})
        for (double tau : {0.0, 0.31, 0.77, 1.0}) {
            const auto sv = shape_eval(xi, tau, hx, ht);
            double sum = 0.0;
            for (int node = 0; node < 4; ++node) sum += sv[4 * node].v;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
}

TEST_CASE("bicubic reproduction of x^3 t^3 on one cell") {
    Grid g;
    g.nx = 4;
    g.nt = 4;
    g.T = 0.5;
    auto f = interpolate(
        g, [](double x, double t) { return x * x * x * t * t * t; },
        [](double x, double t) { return 3 * x * x * t * t * t; },
        [](double x, double t) { return 3 * x * x * x * t * t; },
        [](double x, double t) { return 9 * x * x * t * t; });
    for (double x : {0.1, 0.33, 0.61, 0.9})
        for (double t : {0.06, 0.21, 0.4}) {
            const auto v = evaluate_field(g, f, x, t);
            CHECK(v.v ==
                  doctest::Approx(x * x * x * t * t * t).epsilon(1e-12));
            CHECK(v.dx ==
                  doctest::Approx(3 * x * x * t * t * t).epsilon(1e-10));
            CHECK(v.dt ==
                  doctest::Approx(3 * x * x * x * t * t).epsilon(1e-10));
        }
}

TEST_CASE("second derivative of the interpolant of x^2") {
    Grid g;
    g.nx = 5;
    g.nt = 4;
    g.T = 1.0;
    auto f = interpolate(
        g, [](double x, double) { return x * x; },
        [](double x, double) { return 2 * x; },
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; });
    for (double x : {0.05, 0.4, 0.73})
        for (double t : {0.1, 0.9}) {
            const auto v = evaluate_field(g, f, x, t);
            CHECK(v.dxx == doctest::Approx(2.0).epsilon(1e-10));
        }
}

TEST_CASE("zero coefficients evaluate to zero") {
    Grid g;
    g.nx = 4;
    g.nt = 4;
    C1Field f(g);
    const auto v = evaluate_field(g, f, 0.3, 0.2);
    CHECK(v.v == 0.0);
    CHECK(v.dxx == 0.0);
}

TEST_CASE("cross-edge continuity of value and gradient") {
    Grid g;
    g.nx = 8;
    g.nt = 8;
    g.T = 0.5;
    C1Field f(g);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (auto& c : f.coef) c = U(rng);

    // same physical point evaluated from both neighbouring cells
    for (int edge = 1; edge < g.nx; ++edge) {
        const double xe = edge * g.hx();
        for (double t : {0.13, 0.29, 0.46}) {
            const auto left =
                evaluate_field(g, f, std::nextafter(xe, 0.0), t);
            const auto right =
                evaluate_field(g, f, std::nextafter(xe, 1.0), t);
            CHECK(std::abs(left.v - right.v) <= 1e-10);
            CHECK(std::abs(left.dx - right.dx) <= 1e-8);
            CHECK(std::abs(left.dt - right.dt) <= 1e-8);
        }
    }
}

TEST_CASE("lateral constraint forces zero trace") {
    Grid g;
    g.nx = 6;
    g.nt = 6;
    g.T = 0.5;
    DofMap map(g);
    C1Field f(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int fd = 0; fd < map.n_free(); ++fd)
        f.coef[map.free_to_full[fd]] = U(rng);
    for (double t : {0.0, 0.17, 0.32, 0.5}) {
        CHECK(std::abs(evaluate_field(g, f, 0.0, t).v) <= 1e-14);
        CHECK(std::abs(evaluate_field(g, f, 1.0, t).v) <= 1e-14);
        CHECK(std::abs(evaluate_field(g, f, 0.0, t).dt) <= 1e-14);
    }
}

TEST_CASE("free dof count") {
    Grid g;
    g.nx = 9;
    g.nt = 13;
    DofMap map(g);
    CHECK(map.n_free() == 4 * (g.nx + 1) * (g.nt + 1) - 4 * (g.nt + 1));
}

TEST_CASE("global bicubic satisfying the mask is reproduced") {
    Grid g;
    g.nx = 6;
    g.nt = 5;
    g.T = 0.5;
    // q = (-2x^3 + x^2 + x)(t^3 + 2t - 1): value and dt vanish at x = 0, 1
    auto X = [](double x) { return -2 * x * x * x + x * x + x; };
    auto dX = [](double x) { return -6 * x * x + 2 * x + 1; };
    auto Tt = [](double t) { return t * t * t + 2 * t - 1; };
    auto dT = [](double t) { return 3 * t * t + 2; };
    auto q = [&](double x, double t) { return X(x) * Tt(t); };
    auto qx = [&](double x, double t) { return dX(x) * Tt(t); };
    auto qt = [&](double x, double t) { return X(x) * dT(t); };
    auto qxt = [&](double x, double t) { return dX(x) * dT(t); };
    auto f = interpolate(g, q, qx, qt, qxt);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> Ux(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double x = Ux(rng), t = 0.5 * Ux(rng);
        CHECK(evaluate_field(g, f, x, t).v ==
              doctest::Approx(q(x, t)).epsilon(1e-11));
    }
}

TEST_CASE("quadrature integrates exactly and caches finite bundles") {
    Grid g;
    g.nx = 10;
    g.nt = 8;
    g.T = 0.5;
    const QuadGrid qg = build_quadrature(g, 5, test_wp(), 2);

    CHECK(qg.n_points() == 25u * 10u * 8u);

    double area = 0.0, poly = 0.0, ind = 0.0;
    for (std::size_t p = 0; p < qg.n_points(); ++p) {
        area += qg.w[p];
        poly += qg.w[p] * qg.xs[p] * qg.xs[p] * qg.ts[p] * qg.ts[p];
        if (qg.in_omega[p]) ind += qg.w[p];
        CHECK(std::isfinite(qg.bundles[p].rho_inv));
        CHECK(std::isfinite(qg.bundles[p].c_dt));
        CHECK(std::isfinite(qg.bundles[p].c_dxx));
    }
    CHECK(area == doctest::Approx(g.T).epsilon(1e-14));
    const double T3 = g.T * g.T * g.T;
    CHECK(poly == doctest::Approx(T3 / 9.0).epsilon(1e-14));
    // nx = 10 aligns the omega edges with the mesh: exact area
    CHECK(ind == doctest::Approx(0.2 * g.T).epsilon(1e-13));
}

TEST_CASE("indicator area off-alignment stays within one cell") {
    Grid g;
    g.nx = 7;
    g.nt = 4;
    g.T = 0.5;
    const QuadGrid qg = build_quadrature(g, 5, test_wp(), 1);
    double ind = 0.0;
    for (std::size_t p = 0; p < qg.n_points(); ++p)
        if (qg.in_omega[p]) ind += qg.w[p];
    CHECK(std::abs(ind - 0.2 * g.T) <= g.hx() * g.T);
}

TEST_CASE("field sampling matches pointwise evaluation") {
    Grid g;
    g.nx = 5;
    g.nt = 6;
    g.T = 0.5;
    const QuadGrid qg = build_quadrature(g, 4, test_wp(), 2);
    C1Field f(g);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (auto& c : f.coef) c = U(rng);
    std::vector<double> vals;
    sample_field(qg, f, vals, 2);
    for (std::size_t p = 0; p < qg.n_points(); p += 7) {
        const auto v = evaluate_field(g, f, qg.xs[p], qg.ts[p]);
        CHECK(vals[p] == doctest::Approx(v.v).epsilon(1e-12));
    }
}
