#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatctl/riesz.hpp"

#include <cmath>
#include <random>

using namespace heatctl;

namespace {

WeightParams test_wp() {
    WeightParams wp;
    wp.s_w = 0.01;
    return wp;
}

// spatial Gauss stations covering (0,1) with n_cells cells, 5 points each
void stations(int n_cells, std::vector<double>& X, std::vector<double>& W) {
    std::vector<double> gn, gw;
    gauss_rule(5, gn, gw);
    X.clear();
    W.clear();
    for (int c = 0; c < n_cells; ++c)
        for (int k = 0; k < 5; ++k) {
            X.push_back((c + gn[k]) / n_cells);
            W.push_back(gw[k] / n_cells);
        }
}

double slice_value(int mesh_cells, const std::function<double(double)>& r) {
    RieszSlice slice(mesh_cells);
    std::vector<double> X, W, R;
    stations(256, X, W);
    R.resize(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) R[i] = r(X[i]);
    return slice.hminus_norm_sq(X, W, R);
}

} // namespace

TEST_CASE("zero load gives zero dual norm") {
    CHECK(slice_value(64, [](double) { return 0.0; }) == 0.0);
}

TEST_CASE("analytic dual norms at 512 cells") {
    const double vs =
        slice_value(512, [](double x) { return std::sin(M_PI * x); });
    CHECK(vs == doctest::Approx(1.0 / (2 * M_PI * M_PI)).epsilon(1e-3));
    const double vc = slice_value(512, [](double) { return 1.0; });
    CHECK(vc == doctest::Approx(1.0 / 12.0).epsilon(1e-3));
}

TEST_CASE("second order refinement of the slice solver") {
    const double exact = 1.0 / (2 * M_PI * M_PI);
    const double e1 =
        std::abs(slice_value(32, [](double x) { return std::sin(M_PI * x); }) -
                 exact);
    const double e2 =
        std::abs(slice_value(64, [](double x) { return std::sin(M_PI * x); }) -
                 exact);
    const double e3 = std::abs(
        slice_value(128, [](double x) { return std::sin(M_PI * x); }) - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.35));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("poincare bound against the L2 norm on random slices") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> X, W;
    stations(128, X, W);
    RieszSlice slice(256);
    for (int trial = 0; trial < 10; ++trial) {
        // smooth random field from a few sine modes
        double a[5];
        for (auto& c : a) c = U(rng);
        std::vector<double> R(X.size());
        double l2 = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            double v = 0;
            for (int k = 0; k < 5; ++k)
                v += a[k] * std::sin((k + 1) * M_PI * X[i]);
            R[i] = v;
            l2 += W[i] * v * v;
        }
        const double hm = slice.hminus_norm_sq(X, W, R);
        CHECK(hm <= l2 / (M_PI * M_PI) * (1 + 1e-6));
    }
}

TEST_CASE("weighted E of separable and zero fields") {
    Grid g;
    g.nx = 16;
    g.nt = 16;
    g.T = 0.5;
    const QuadGrid qg = build_quadrature(g, 5, test_wp(), 2);
    RieszEvaluator ev(qg, 4, 2);

    std::vector<double> r(qg.n_points(), 0.0);
    CHECK(ev.weighted_E(r) == 0.0);

    for (std::size_t p = 0; p < qg.n_points(); ++p)
        r[p] = std::sin(M_PI * qg.xs[p]);
    const double expect = g.T / (4 * M_PI * M_PI);
    CHECK(ev.weighted_E(r) == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("quadratic scaling in the load") {
    Grid g;
    g.nx = 12;
    g.nt = 10;
    g.T = 0.5;
    const QuadGrid qg = build_quadrature(g, 5, test_wp(), 1);
    RieszEvaluator ev(qg, 4, 1);
    std::vector<double> r(qg.n_points());
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (auto& v : r) v = U(rng);
    const double e1 = ev.weighted_E(r);
    for (auto& v : r) v *= 3.0;
    const double e9 = ev.weighted_E(r);
    CHECK(e9 == doctest::Approx(9.0 * e1).epsilon(1e-13));
}

TEST_CASE("manufactured field against a finer independent evaluation") {
    auto rfun = [](double x, double t) {
        return std::sin(2 * M_PI * x) * (1.0 + t) +
               x * (1 - x) * std::cos(3 * t);
    };
    Grid g;
    g.nx = 24;
    g.nt = 24;
    g.T = 0.5;
    const QuadGrid qg = build_quadrature(g, 5, test_wp(), 2);
    RieszEvaluator ev(qg, 4, 2);
    std::vector<double> r(qg.n_points());
    for (std::size_t p = 0; p < qg.n_points(); ++p)
        r[p] = rfun(qg.xs[p], qg.ts[p]);
    const double coarse = ev.weighted_E(r);

    Grid g4;
    g4.nx = 96;
    g4.nt = 96;
    g4.T = 0.5;
    const QuadGrid qg4 = build_quadrature(g4, 5, test_wp(), 2);
    RieszEvaluator ev4(qg4, 4, 2);
    std::vector<double> r4(qg4.n_points());
    for (std::size_t p = 0; p < qg4.n_points(); ++p)
        r4[p] = rfun(qg4.xs[p], qg4.ts[p]);
    const double fine = ev4.weighted_E(r4);

    CHECK(coarse == doctest::Approx(fine).epsilon(1e-3));
}

TEST_CASE("mesh refinement of E is a Cauchy sequence for smooth loads") {
    auto rfun = [](double x, double t) {
        return std::sin(M_PI * x) * std::exp(-t) + x * x * (1 - x);
    };
    Grid g;
    g.nx = 16;
    g.nt = 12;
    g.T = 0.5;
    const QuadGrid qg = build_quadrature(g, 5, test_wp(), 1);
    std::vector<double> r(qg.n_points());
    for (std::size_t p = 0; p < qg.n_points(); ++p)
        r[p] = rfun(qg.xs[p], qg.ts[p]);

    const double e1 = RieszEvaluator(qg, 1, 1).weighted_E(r);
    const double e2 = RieszEvaluator(qg, 2, 1).weighted_E(r);
    const double e4 = RieszEvaluator(qg, 4, 1).weighted_E(r);
    CHECK(std::abs(e4 - e2) <= std::abs(e2 - e1));
}
