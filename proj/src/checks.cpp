#include "heatctl/reporting.hpp"

#include "heatctl/errors.hpp"

#include <cmath>
#include <sstream>

namespace heatctl {

namespace {

struct Collector {
    CheckReport report;

    void add(const std::string& name, bool pass,
             const std::string& detail = "") {
        report.checks.push_back({name, pass, detail});
    }

    template <typename F>
    void run(const std::string& name, F&& f) {
        try {
            f(*this, name);
        } catch (const std::exception& e) {
            add(name, false, std::string("exception: ") + e.what());
        }
    }
};

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// deterministic pseudo-random stream for sample points
struct Lcg {
    std::uint64_t s = 0x2545F4914F6CDD1DULL;
    double next() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) / 9007199254740992.0;
    }
};

// centered finite differences of rho^{-1} d(rho0) through exponent
// differences, independent of the analytic ratio formulas
double fd_c_dx(double x, double t, const WeightParams& p, double h) {
    auto ratio = [&](double xx) {
        const double db = beta(xx, p).b - beta(x, p).b;
        return std::pow(p.T - t, 1.5) *
               std::exp(p.s_w * db / ell(t, p.T).first);
    };
    return (ratio(x + h) - ratio(x - h)) / (2.0 * h);
}

double fd_c_dxx(double x, double t, const WeightParams& p, double h) {
    auto ratio = [&](double xx) {
        const double db = beta(xx, p).b - beta(x, p).b;
        return std::pow(p.T - t, 1.5) *
               std::exp(p.s_w * db / ell(t, p.T).first);
    };
    return (ratio(x + h) - 2.0 * ratio(x) + ratio(x - h)) / (h * h);
}

double fd_c_dt(double x, double t, const WeightParams& p, double h) {
    const double b = beta(x, p).b;
    auto ratio = [&](double tt) {
        const double de =
            p.s_w * b * (1.0 / ell(tt, p.T).first - 1.0 / ell(t, p.T).first);
        return std::pow(p.T - tt, 1.5) * std::exp(de);
    };
    return (ratio(t + h) - ratio(t - h)) / (2.0 * h);
}

} // namespace

CheckReport check_suite(const ExperimentConfig& base, int threads) {
    Collector col;
    ExperimentConfig cfg = base;
    cfg.mesh_nx = 32;
    cfg.mesh_nt = 32;
    if (!cfg.u0_beta) cfg.u0_beta = 10.0;

    const WeightParams wp = cfg.weight_params();

    col.run("weights.w32_identity", [&](Collector& c, const std::string& n) {
        Lcg rng;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x = rng.next();
            const double t = rng.next() * wp.T * 0.999;
            const WeightBundle wb = bundle(x, t, wp);
            worst = std::max(worst,
                             std::abs(wb.w32 - (wp.T - t) * wb.w12));
        }
        c.add(n, worst <= 1e-14, "max deviation " + num(worst));
    });

    col.run("weights.beta_positive", [&](Collector& c, const std::string& n) {
        double bmin = 1e300;
        for (int i = 0; i <= 1000; ++i)
            bmin = std::min(bmin, beta(i / 1000.0, wp).b);
        c.add(n, bmin > 0.0, "min beta " + num(bmin));
    });

    col.run("weights.invalid_m_rejected",
            [&](Collector& c, const std::string& n) {
                WeightParams bad = wp;
                bad.m_w = 0.5;
                bool threw = false;
                try {
                    validate(bad);
                } catch (const ConfigError&) {
                    threw = true;
                }
                c.add(n, threw, threw ? "rejected as required" : "accepted");
            });

    col.run("weights.rho_inv_monotone",
            [&](Collector& c, const std::string& n) {
                // ell peaks at T/2, so rho_inv decays once ell decays
                bool ok = true;
                const double x = 0.55;
                double prev = bundle(x, wp.T / 2.0, wp).rho_inv;
                for (int i = 1; i <= 200; ++i) {
                    const double t =
                        wp.T / 2.0 + (wp.T * 0.4999) * i / 200.0;
                    const double cur = bundle(x, t, wp).rho_inv;
                    if (cur > prev) ok = false;
                    prev = cur;
                }
                c.add(n, ok);
            });

    col.run("weights.log_relation", [&](Collector& c, const std::string& n) {
        Lcg rng;
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double x = rng.next();
            const double t = rng.next() * wp.T * 0.99;
            const WeightBundle wb = bundle(x, t, wp);
            const double lhs = std::log(wb.rho0_inv);
            const double rhs =
                std::log(wb.rho_inv) - 1.5 * std::log(wp.T - t);
            worst = std::max(worst, std::abs(lhs - rhs) /
                                        std::max(1.0, std::abs(rhs)));
        }
        c.add(n, worst <= 1e-12, "max log gap " + num(worst));
    });

    col.run("weights.fd_ratios", [&](Collector& c, const std::string& n) {
        Lcg rng;
        double worst = 0.0;
        const double h = 1e-4;
        for (int i = 0; i < 20; ++i) {
            const double x = 0.1 + 0.8 * rng.next();
            const double t = wp.T * (0.05 + 0.85 * rng.next());
            const WeightBundle wb = bundle(x, t, wp);
            const double ex = fd_c_dx(x, t, wp, h);
            const double et = fd_c_dt(x, t, wp, h * wp.T);
            const double exx = fd_c_dxx(x, t, wp, h);
            worst = std::max(
                worst, std::abs(wb.c_dx - ex) / std::max(1e-12, std::abs(ex)));
            worst = std::max(
                worst, std::abs(wb.c_dt - et) / std::max(1e-12, std::abs(et)));
            worst = std::max(worst, std::abs(wb.c_dxx - exx) /
                                        std::max(1e-12, std::abs(exx)));
        }
        c.add(n, worst <= 1e-6, "max relative error " + num(worst));
    });

    // small workspace shared by the operator and driver checks
    Workspace ws(wp, cfg.grid(), cfg.nonlinearity(), cfg.mesh_quad_order,
                 cfg.riesz_refine, cfg.solver_options(), cfg.nu, threads);

    col.run("operator.fd_apply", [&](Collector& c, const std::string& n) {
        // one interior Hermite basis function, A = 0
        C1Field mu(ws.grid);
        const int i0 = ws.grid.nx / 2, j0 = ws.grid.nt / 2;
        mu.coef[4 * ws.grid.node(i0, j0) + 0] = 1.0;
        std::vector<double> zeta;
        ws.solver.apply_D(mu, {}, ws.nu, zeta);

        auto G = [&](double x, double t) {
            // rho^{-1}(x0,t0) * rho0(x,t) * m(x,t) in exponent-difference
            // form, anchored per evaluation point below
            return evaluate_field(ws.grid, mu, x, t, EvalOrder::value).v;
        };
        Lcg rng;
        double worst = 0.0;
        int tested = 0;
        const double hx = 1e-5, ht = 1e-6;
        const int q = ws.quad.q;
        for (int trial = 0; trial < 60 && tested < 20; ++trial) {
            // sample inside the 2x2 cell support of the basis function
            const int cx = i0 - 1 + (rng.next() < 0.5 ? 0 : 1);
            const int ct = j0 - 1 + (rng.next() < 0.5 ? 0 : 1);
            const int gx = static_cast<int>(rng.next() * q);
            const int gt = static_cast<int>(rng.next() * q);
            const std::size_t p =
                ws.quad.index(ct * q + gt, cx * q + gx);
            const double x = ws.quad.xs[p], t = ws.quad.ts[p];
            if (t < 0.02 || t > 0.9 * wp.T) continue;
            auto ratio = [&](double xx, double tt) {
                const double db = beta(xx, wp).b / ell(tt, wp.T).first -
                                  beta(x, wp).b / ell(t, wp.T).first;
                return std::pow(wp.T - tt, 1.5) *
                       std::exp(wp.s_w * db) * G(xx, tt);
            };
            const double ddt =
                (ratio(x, t + ht) - ratio(x, t - ht)) / (2.0 * ht);
            const double ddxx = (ratio(x + hx, t) - 2.0 * ratio(x, t) +
                                 ratio(x - hx, t)) /
                                (hx * hx);
            const double expect = -ddt - ws.nu * ddxx;
            if (std::abs(expect) < 1e-8) continue;
            worst = std::max(worst, std::abs(zeta[p] - expect) /
                                        std::abs(expect));
            ++tested;
        }
        c.add(n, tested >= 10 && worst <= 1e-5,
              "max relative error " + num(worst) + " over " +
                  std::to_string(tested) + " points");
    });

    col.run("riesz.analytic", [&](Collector& c, const std::string& n) {
        RieszSlice slice(512);
        std::vector<double> xq, wq;
        gauss_rule(5, xq, wq);
        std::vector<double> X, W, R;
        for (int cell = 0; cell < 256; ++cell)
            for (int k = 0; k < 5; ++k) {
                X.push_back((cell + xq[k]) / 256.0);
                W.push_back(wq[k] / 256.0);
            }
        R.resize(X.size());
        for (std::size_t i = 0; i < X.size(); ++i)
            R[i] = std::sin(M_PI * X[i]);
        const double vs = slice.hminus_norm_sq(X, W, R);
        const double es = 1.0 / (2.0 * M_PI * M_PI);
        for (std::size_t i = 0; i < X.size(); ++i) R[i] = 1.0;
        const double vc = slice.hminus_norm_sq(X, W, R);
        const double ec = 1.0 / 12.0;
        const double rs = std::abs(vs - es) / es;
        const double rc = std::abs(vc - ec) / ec;
        c.add(n, rs <= 1e-3 && rc <= 1e-3,
              "sin err " + num(rs) + ", const err " + num(rc));
    });

    col.run("riesz.separable", [&](Collector& c, const std::string& n) {
        std::vector<double> r(ws.quad.n_points());
        for (std::size_t p = 0; p < ws.quad.n_points(); ++p)
            r[p] = std::sin(M_PI * ws.quad.xs[p]);
        const double E = ws.riesz.weighted_E(r);
        const double expect = wp.T / (4.0 * M_PI * M_PI);
        const double rel = std::abs(E - expect) / expect;
        c.add(n, rel <= 1e-3, "relative error " + num(rel));
    });

    const double beta_amp = *cfg.u0_beta;
    auto u0 = [beta_amp](double x) { return beta_amp * std::sin(M_PI * x); };
    Driver drv(ws);

    col.run("driver.derivative_identity",
            [&](Collector& c, const std::string& n) {
                IterateState s0 = drv.init_state(u0);
                ControlUpdate upd = drv.direction(s0);
                const double lam = 1e-3;
                const double El = drv.E_of_lambda(s0, upd, lam);
                const double slope = (s0.E - El) / lam;
                const double rel =
                    std::abs(slope - 2.0 * s0.E) / (2.0 * s0.E);
                c.add(n, rel <= 5e-2, "relative error " + num(rel));
            });

    RunConfig rc = cfg.run_config();
    rc.variant = Variant::ls;
    RunResult ls = drv.run(u0, rc);

    col.run("driver.monotone_descent",
            [&](Collector& c, const std::string& n) {
                bool ok = ls.status == RunStatus::converged;
                for (std::size_t i = 1; i < ls.records.size(); ++i)
                    if (ls.records[i].sqrt2E > ls.records[i - 1].sqrt2E)
                        ok = false;
                c.add(n, ok,
                      "status " +
                          std::to_string(static_cast<int>(ls.status)) +
                          ", " + std::to_string(ls.records.size()) +
                          " records");
            });

    col.run("oracle.null_control", [&](Collector& c, const std::string& n) {
        if (ls.status != RunStatus::converged) {
            c.add(n, false, "least-squares run did not converge");
            return;
        }
        ForwardConfig fc = cfg.forward_config();
        const auto rep = null_control_report(ws, ls.state, u0, fc);
        c.add(n, rep.ratio <= 0.1,
              "terminal ratio " + num(rep.ratio) + " (cap 0.1 on the 32x32 "
              "mesh)");
    });

    col.run("driver.zero_g_fast_path",
            [&](Collector& c, const std::string& n) {
                ExperimentConfig zc = cfg;
                zc.g_kind = "zero";
                Workspace wz(wp, zc.grid(), zc.nonlinearity(),
                             zc.mesh_quad_order, zc.riesz_refine,
                             zc.solver_options(), zc.nu, threads);
                Driver dz(wz);
                RunResult rr = dz.run(u0, rc);
                c.add(n,
                      rr.status == RunStatus::converged &&
                          rr.records.size() == 1 &&
                          rr.records[0].sqrt2E == 0.0,
                      "records " + std::to_string(rr.records.size()));
            });

    return col.report;
}

} // namespace heatctl
