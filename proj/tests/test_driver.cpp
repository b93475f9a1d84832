#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heatctl/driver.hpp"

#include <cmath>
#include <random>

using namespace heatctl;

namespace {

Workspace make_ws(int n, const Nonlinearity& g, double s_w = 6e-4) {
    WeightParams wp;
    wp.s_w = s_w;
    Grid grid;
    grid.nx = n;
    grid.nt = n;
    grid.T = wp.T;
    return Workspace(wp, grid, g, 5, 4, SolverOptions{}, 0.1, 2);
}

auto u0_of(double beta) {
    return [beta](double x) { return beta * std::sin(M_PI * x); };
}

} // namespace

TEST_CASE("zero nonlinearity: the linear pair already has zero residual") {
    Workspace ws = make_ws(12, zero_g());
    Driver drv(ws);
    RunConfig rc;
    const RunResult rr = drv.run(u0_of(10.0), rc);
    CHECK(rr.status == RunStatus::converged);
    CHECK(rr.records.size() == 1);
    CHECK(rr.records[0].sqrt2E == 0.0);
}

TEST_CASE("zero data gives the zero state") {
    Workspace ws = make_ws(8, paper_g());
    Driver drv(ws);
    const IterateState s = drv.init_state(u0_of(0.0));
    CHECK(s.E == 0.0);
    CHECK(drv.norm_y(s.z) == 0.0);
    CHECK(drv.norm_f(s.mf_samples) == 0.0);
}

TEST_CASE("unweighted norms agree with a direct quadrature loop") {
    Workspace ws = make_ws(10, paper_g());
    Driver drv(ws);
    const IterateState s = drv.init_state(u0_of(5.0));
    const QuadGrid& qg = ws.quad;
    double ny = 0, nf = 0;
    for (std::size_t p = 0; p < qg.n_points(); ++p) {
        const double y = qg.bundles[p].rho_inv * s.z[p];
        ny += qg.w[p] * y * y;
        if (qg.in_omega[p]) {
            const double f = qg.bundles[p].rho0_inv * s.mf_samples[p];
            nf += qg.w[p] * f * f;
        }
    }
    CHECK(drv.norm_y(s.z) == doctest::Approx(std::sqrt(ny)).epsilon(1e-13));
    CHECK(drv.norm_f(s.mf_samples) ==
          doctest::Approx(std::sqrt(nf)).epsilon(1e-13));
    // the E stored on the state is exactly the weighted functional of r
    CHECK(s.E == ws.riesz.weighted_E(s.r));
}

TEST_CASE("rho2_l vanishes at lambda 0 and for linear g") {
    Workspace wl = make_ws(10, linear_g(2.0));
    Driver drv(wl);
    IterateState s = drv.init_state(u0_of(4.0));
    CHECK(s.E > 0.0);
    ControlUpdate upd = drv.direction(s);
    std::vector<double> l;
    drv.rho2_l(s, upd, 0.0, l);
    for (double v : l) CHECK(v == 0.0);
    drv.rho2_l(s, upd, 0.7, l);
    for (double v : l) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("pointwise majorization of rho2_l for the smooth benchmark g") {
    const Nonlinearity g = paper_g(0.1, 0.95, true);
    // numeric bound for |g''|
    double g2max = 0.0;
    for (int i = 0; i <= 40000; ++i) {
        const double s = -20.0 + 40.0 * i / 40000.0;
        const double h = 1e-5;
        const double d2 =
            (g.gprime(s + h) - g.gprime(s - h)) / (2 * h);
        g2max = std::max(g2max, std::abs(d2));
    }
    Workspace ws = make_ws(10, g);
    Driver drv(ws);
    IterateState s = drv.init_state(u0_of(6.0));
    ControlUpdate upd = drv.direction(s);
    for (double lam : {0.2, 0.6, 1.0}) {
        std::vector<double> l;
        drv.rho2_l(s, upd, lam, l);
        const QuadGrid& qg = ws.quad;
        for (std::size_t p = 0; p < qg.n_points(); ++p) {
            const double bound = 0.5 * lam * lam * g2max *
                                 qg.bundles[p].w12 *
                                 qg.bundles[p].rho_inv *
                                 upd.zeta_samples[p] *
                                 upd.zeta_samples[p];
            CHECK(std::abs(l[p]) <= bound * (1 + 1e-9) + 1e-13);
        }
    }
}

TEST_CASE("E_of_lambda at 0 reproduces E exactly and is quadratic for "
          "linear g") {
    Workspace wl = make_ws(10, linear_g(1.5));
    Driver drv(wl);
    IterateState s = drv.init_state(u0_of(4.0));
    ControlUpdate upd = drv.direction(s);
    CHECK(drv.E_of_lambda(s, upd, 0.0) == s.E);
    for (double lam : {0.25, 0.5, 0.9}) {
        const double e = drv.E_of_lambda(s, upd, lam);
        CHECK(e == doctest::Approx((1 - lam) * (1 - lam) * s.E)
                       .epsilon(1e-12));
    }
    const double l = drv.line_search(s, upd, 1.0);
    CHECK(l == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("directional derivative identity at small lambda") {
    Workspace ws = make_ws(16, paper_g());
    Driver drv(ws);
    IterateState s = drv.init_state(u0_of(10.0));
    ControlUpdate upd = drv.direction(s);
    const double e3 = drv.E_of_lambda(s, upd, 1e-3);
    const double slope3 = (s.E - e3) / 1e-3;
    CHECK(std::abs(slope3 - 2 * s.E) / (2 * s.E) <= 5e-2);
    const double e4 = drv.E_of_lambda(s, upd, 1e-4);
    const double slope4 = (s.E - e4) / 1e-4;
    CHECK(std::abs(slope4 - 2 * s.E) / (2 * s.E) <= 5e-3);
}

TEST_CASE("line search agrees with a dense scan") {
    Workspace ws = make_ws(6, paper_g());
    Driver drv(ws);
    IterateState s = drv.init_state(u0_of(10.0));
    ControlUpdate upd = drv.direction(s);
    const double l = drv.line_search(s, upd, 1.0);
    const double el = drv.E_of_lambda(s, upd, l);
    double best = s.E;
    const int nscan = 20000;
    for (int i = 0; i <= nscan; ++i)
        best = std::min(best,
                        drv.E_of_lambda(s, upd, double(i) / nscan));
    CHECK(el <= best + 2e-5 * std::max(1.0, best));
}

TEST_CASE("step updates are consistent with E_of_lambda") {
    Workspace ws = make_ws(12, paper_g());
    Driver drv(ws);
    IterateState s = drv.init_state(u0_of(10.0));
    ControlUpdate upd = drv.direction(s);

    const IterateState same = drv.step(s, upd, 0.0);
    for (std::size_t p = 0; p < s.z.size(); ++p) {
        CHECK(same.z[p] == s.z[p]);
        CHECK(same.r[p] == s.r[p]);
    }
    const double lam = 0.37;
    const IterateState nxt = drv.step(s, upd, lam);
    CHECK(nxt.E == doctest::Approx(drv.E_of_lambda(s, upd, lam))
                       .epsilon(1e-12));
    // the reconstructed control matches the update rule on samples
    for (std::size_t p = 0; p < s.z.size(); p += 13) {
        const double expect =
            s.mf_samples[p] - lam * upd.mu_samples[p];
        CHECK(nxt.mf_samples[p] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("one linear step solves the linear problem exactly") {
    Workspace wl = make_ws(10, linear_g(2.0));
    Driver drv(wl);
    RunConfig rc;
    const RunResult rr = drv.run(u0_of(4.0), rc);
    CHECK(rr.status == RunStatus::converged);
    CHECK(rr.records.size() <= 3);
    CHECK(rr.records.back().sqrt2E <= 1e-10);
    CHECK(rr.records[0].lambda == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("monotone descent and the lambda -> 1 tail on a converged run") {
    Workspace ws = make_ws(24, paper_g());
    Driver drv(ws);
    RunConfig rc;
    const RunResult rr = drv.run(u0_of(10.0), rc);
    REQUIRE(rr.status == RunStatus::converged);
    for (std::size_t i = 1; i < rr.records.size(); ++i)
        CHECK(rr.records[i].sqrt2E <= rr.records[i - 1].sqrt2E);
    REQUIRE(rr.records.size() >= 3);
    const auto& recs = rr.records;
    // last two executed steps
    CHECK(std::abs(recs[recs.size() - 2].lambda - 1.0) <= 1e-3);
    CHECK(std::abs(recs[recs.size() - 3].lambda - 1.0) <= 1e-3);
}

TEST_CASE("direction ratio stays bounded over a run") {
    Workspace ws = make_ws(16, paper_g());
    Driver drv(ws);
    RunConfig rc;
    const RunResult rr = drv.run(u0_of(10.0), rc);
    REQUIRE(rr.status == RunStatus::converged);
    REQUIRE(!rr.direction_ratio.empty());
    const double first = rr.direction_ratio.front();
    for (double r : rr.direction_ratio) {
        CHECK(r <= 10.0 * first);
        CHECK(std::isfinite(r));
    }
}

TEST_CASE("picard on zero and linear nonlinearities converges immediately") {
    Workspace wz = make_ws(8, zero_g());
    Driver dz(wz);
    RunConfig rc;
    const RunResult rz = dz.picard_run(u0_of(5.0), rc);
    CHECK(rz.picard_converged);
    CHECK(rz.records.size() <= 2);

    Workspace wl = make_ws(8, linear_g(1.0));
    Driver dl(wl);
    const RunResult rl = dl.picard_run(u0_of(5.0), rc);
    CHECK(rl.picard_converged);
    CHECK(rl.records.size() <= 3);
}

TEST_CASE("convergence order fits synthetic sequences exactly") {
    std::vector<IterationRecord> quad;
    double e = 0.5;
    for (int k = 0; k < 7; ++k) {
        IterationRecord r;
        r.k = k;
        r.sqrt2E = e;
        quad.push_back(r);
        e = e * e;
    }
    CHECK(convergence_order(quad) == doctest::Approx(2.0).epsilon(1e-6));

    std::vector<IterationRecord> lin;
    e = 1.0;
    for (int k = 0; k < 8; ++k) {
        IterationRecord r;
        r.k = k;
        r.sqrt2E = e;
        lin.push_back(r);
        e *= 0.5;
    }
    CHECK(convergence_order(lin) == doctest::Approx(1.0).epsilon(1e-6));

    std::vector<IterationRecord> too_short(2);
    CHECK_THROWS(convergence_order(too_short));
}

TEST_CASE("newton variant diverges on violent data and is capped") {
    Workspace ws = make_ws(16, paper_g());
    Driver drv(ws);
    RunConfig rc;
    rc.variant = Variant::newton;
    const RunResult rr = drv.run(u0_of(10000.0), rc);
    CHECK(rr.status == RunStatus::diverged);
    const double first = rr.records.front().sqrt2E;
    CHECK(rr.records.back().sqrt2E > 10.0 * first);
}
