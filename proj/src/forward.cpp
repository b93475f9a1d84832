#include "heatctl/forward.hpp"

#include "heatctl/errors.hpp"

#include <cmath>

namespace heatctl {

namespace {

// Tridiagonal in-place Thomas solve. a: sub, b: diag, c: super.
void thomas(std::vector<double>& a, std::vector<double>& b,
            std::vector<double>& c, std::vector<double>& rhs) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= b[n - 1];
    for (int i = n - 2; i >= 0; --i)
        rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
}

} // namespace

Trajectory solve_forward(const std::function<double(double)>& u0,
                         const std::function<double(double, double)>& f,
                         const Nonlinearity& g, const ForwardConfig& cfg) {
    if (cfg.nx < 9 || cfg.nt < 8)
        throw ConfigError("forward.nx must be >= 9 and forward.nt >= 8");
    const int nn = cfg.nx;          // nodes
    const int ni = nn - 2;          // interior unknowns
    const double h = 1.0 / (nn - 1);
    const double dt = cfg.T / cfg.nt;
    const double nu = cfg.nu;

    auto node_x = [h](int i) { return i * h; };

    // P1 mass and stiffness action on interior nodes (boundary is zero)
    auto mass_apply = [&](const std::vector<double>& y,
                          std::vector<double>& out) {
        for (int i = 0; i < ni; ++i) {
            const double yl = (i == 0) ? 0.0 : y[i - 1];
            const double yr = (i == ni - 1) ? 0.0 : y[i + 1];
            out[i] = h / 6.0 * (yl + 4.0 * y[i] + yr);
        }
    };
    auto stiff_apply = [&](const std::vector<double>& y,
                           std::vector<double>& out) {
        for (int i = 0; i < ni; ++i) {
            const double yl = (i == 0) ? 0.0 : y[i - 1];
            const double yr = (i == ni - 1) ? 0.0 : y[i + 1];
            out[i] = (-yl + 2.0 * y[i] - yr) / h;
        }
    };
    auto l2_norm = [&](const std::vector<double>& y) {
        std::vector<double> my(ni);
        mass_apply(y, my);
        double s = 0.0;
        for (int i = 0; i < ni; ++i) s += y[i] * my[i];
        return std::sqrt(std::max(0.0, s));
    };

    // control load b_i(t) = int_0^1 f(x,t) phi_i(x) dx, 3-point Gauss per
    // element
    const double gp[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
    const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    auto load_at = [&](double t, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (int e = 0; e < nn - 1; ++e) {
            const double x0 = node_x(e);
            for (int k = 0; k < 3; ++k) {
                const double x = x0 + gp[k] * h;
                const double fx = f(x, t);
                if (fx == 0.0) continue;
                const double w = gw[k] * h * fx;
                const double loc = gp[k];
                if (e >= 1) out[e - 1] += w * (1.0 - loc);
                if (e + 1 <= ni) out[e] += w * loc;
            }
        }
    };

    std::vector<double> y(ni), ynew(ni), gy(ni), gyn(ni), my(ni), sy(ni);
    std::vector<double> bn(ni), bn1(ni), rhs(ni), res(ni);
    std::vector<double> ta(ni), tb(ni), tc(ni);

    for (int i = 0; i < ni; ++i) y[i] = u0(node_x(i + 1));

    Trajectory tr;
    tr.norm_u0 = l2_norm(y);
    tr.norm_times.push_back(0.0);
    tr.norms.push_back(tr.norm_u0);

    const bool cn = cfg.scheme == ForwardConfig::Scheme::crank_nicolson;
    const double theta = cn ? 0.5 : 1.0;

    load_at(0.0, bn);
    for (int n = 0; n < cfg.nt; ++n) {
        const double t1 = (n + 1) * dt;
        load_at(t1, bn1);

        // residual R(Y) = M(Y - y)/dt + theta(nu S Y + M g(Y) - b1)
        //               + (1-theta)(nu S y + M g(y) - b0)
        for (int i = 0; i < ni; ++i) gyn[i] = g.g(y[i]);
        std::vector<double> expl(ni, 0.0);
        if (cn) {
            stiff_apply(y, sy);
            std::vector<double> mgy(ni);
            mass_apply(gyn, mgy);
            for (int i = 0; i < ni; ++i)
                expl[i] = (1.0 - theta) * (nu * sy[i] + mgy[i] - bn[i]);
        }

        ynew = y;
        bool converged = false;
        for (int it = 0; it < cfg.newton_maxit; ++it) {
            for (int i = 0; i < ni; ++i) gy[i] = g.g(ynew[i]);
            std::vector<double> d(ni);
            for (int i = 0; i < ni; ++i) d[i] = ynew[i] - y[i];
            mass_apply(d, my);
            stiff_apply(ynew, sy);
            std::vector<double> mg(ni);
            mass_apply(gy, mg);
            for (int i = 0; i < ni; ++i)
                res[i] = my[i] / dt + theta * (nu * sy[i] + mg[i] - bn1[i]) +
                         expl[i];

            // Jacobian: M/dt + theta (nu S + M diag(g'(Y)))
            for (int i = 0; i < ni; ++i) {
                const double gpc = g.gprime(ynew[i]);
                const double gpl = (i == 0) ? 0.0 : g.gprime(ynew[i - 1]);
                const double gpr =
                    (i == ni - 1) ? 0.0 : g.gprime(ynew[i + 1]);
                tb[i] = (4.0 * h / 6.0) / dt +
                        theta * (nu * 2.0 / h + (4.0 * h / 6.0) * gpc);
                ta[i] = (i == 0) ? 0.0
                                 : (h / 6.0) / dt +
                                       theta * (-nu / h + (h / 6.0) * gpl);
                tc[i] = (i == ni - 1)
                            ? 0.0
                            : (h / 6.0) / dt +
                                  theta * (-nu / h + (h / 6.0) * gpr);
            }
            rhs = res;
            thomas(ta, tb, tc, rhs);
            double corr = 0.0;
            for (int i = 0; i < ni; ++i) {
                ynew[i] -= rhs[i];
                corr = std::max(corr, std::abs(rhs[i]));
            }
            if (corr < cfg.newton_tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw SolverError("forward solver: Newton stagnation at t = " +
                              std::to_string(t1));

        y.swap(ynew);
        bn.swap(bn1);
        const double nrm = l2_norm(y);
        tr.norm_times.push_back(t1);
        tr.norms.push_back(nrm);
        if (!(nrm < cfg.blowup_cap)) {
            tr.blew_up = true;
            tr.blowup_time = t1;
            break;
        }
    }

    tr.final_y = y;
    tr.norm_final = tr.norms.back();
    return tr;
}

} // namespace heatctl
