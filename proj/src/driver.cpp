#include "heatctl/driver.hpp"

#include "heatctl/errors.hpp"
#include "heatctl/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace heatctl {

double Driver::norm_y(std::span<const double> z) const {
    const QuadGrid& qg = ws_.quad;
    double s = 0.0;
    for (std::size_t p = 0; p < qg.n_points(); ++p) {
        const double y = qg.bundles[p].rho_inv * z[p];
        s += qg.w[p] * y * y;
    }
    return std::sqrt(s);
}

double Driver::norm_f(std::span<const double> mf_samples) const {
    const QuadGrid& qg = ws_.quad;
    double s = 0.0;
    for (std::size_t p = 0; p < qg.n_points(); ++p) {
        if (!qg.in_omega[p]) continue;
        const double f = qg.bundles[p].rho0_inv * mf_samples[p];
        s += qg.w[p] * f * f;
    }
    return std::sqrt(s);
}

IterateState Driver::init_state(const std::function<double(double)>& u0) {
    LinearizedProblem lp;
    lp.u0 = u0;
    lp.nu = ws_.nu;
    ControlUpdate upd = ws_.solver.solve(lp);

    IterateState s;
    s.k = 0;
    s.z = std::move(upd.zeta_samples);
    s.mf = std::move(upd.mu);
    s.mf_samples = std::move(upd.mu_samples);

    // B_0 = g(y_0), so rho2 B_0 = w12 * z * gtilde(rho^{-1} z)
    const QuadGrid& qg = ws_.quad;
    s.r.assign(qg.n_points(), 0.0);
    const auto& g = ws_.g;
    parallel_for(qg.n_points(), ws_.threads,
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t p = lo; p < hi; ++p) {
                         const WeightBundle& wb = qg.bundles[p];
                         const double u = wb.rho_inv * s.z[p];
                         s.r[p] = wb.w12 * s.z[p] * g.gtilde(u);
                     }
                 });
    s.E = ws_.riesz.weighted_E(s.r);
    return s;
}

ControlUpdate Driver::direction(const IterateState& s) {
    const QuadGrid& qg = ws_.quad;
    std::vector<double> A(qg.n_points());
    const auto& g = ws_.g;
    parallel_for(qg.n_points(), ws_.threads,
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t p = lo; p < hi; ++p)
                         A[p] = g.gprime(qg.bundles[p].rho_inv * s.z[p]);
                 });
    LinearizedProblem lp;
    lp.A_samples = A;
    lp.residual = s.r;
    lp.nu = ws_.nu;
    return ws_.solver.solve(lp);
}

void Driver::rho2_l(const IterateState& s, const ControlUpdate& u,
                    double lambda, std::vector<double>& out) const {
    const QuadGrid& qg = ws_.quad;
    out.assign(qg.n_points(), 0.0);
    if (lambda == 0.0) return;
    const auto& g = ws_.g;
    parallel_for(qg.n_points(), ws_.threads,
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t p = lo; p < hi; ++p) {
                         const WeightBundle& wb = qg.bundles[p];
                         const double z = s.z[p];
                         const double zeta = u.zeta_samples[p];
                         if (z == 0.0 && zeta == 0.0) continue;
                         const double uy = wb.rho_inv * z;
                         const double a = z - lambda * zeta;
                         out[p] = wb.w12 *
                                  (a * g.gtilde(wb.rho_inv * a) -
                                   z * g.gtilde(uy) +
                                   lambda * g.gprime(uy) * zeta);
                     }
                 });
}

double Driver::E_of_lambda(const IterateState& s, const ControlUpdate& u,
                           double lambda) const {
    const QuadGrid& qg = ws_.quad;
    std::vector<double> field(qg.n_points());
    rho2_l(s, u, lambda, field);
    const double c = 1.0 - lambda;
    for (std::size_t p = 0; p < qg.n_points(); ++p)
        field[p] += c * s.r[p];
    return ws_.riesz.weighted_E(field);
}

double Driver::line_search(const IterateState& s, const ControlUpdate& u,
                           double step_max) const {
    constexpr int kScan = 64;
    double best_l = 0.0;
    double best_e = s.E; // lambda = 0 is always admissible
    auto eval = [&](double l) {
        const double e = E_of_lambda(s, u, l);
        if (e < best_e) {
            best_e = e;
            best_l = l;
        }
        return e;
    };
    for (int i = 0; i < kScan; ++i)
        eval(step_max * i / (kScan - 1.0));

    // golden-section refinement around the best coarse sample
    const double spacing = step_max / (kScan - 1.0);
    double a = std::max(0.0, best_l - spacing);
    double b = std::min(step_max, best_l + spacing);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > 1e-6) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = eval(x2);
        }
    }
    return best_l;
}

IterateState Driver::step(const IterateState& s, const ControlUpdate& u,
                          double lambda) const {
    const QuadGrid& qg = ws_.quad;
    IterateState out;
    out.k = s.k + 1;
    out.z.resize(qg.n_points());
    out.mf_samples.resize(qg.n_points());
    out.r.resize(qg.n_points());

    std::vector<double> l_term(qg.n_points());
    rho2_l(s, u, lambda, l_term);

    parallel_for(qg.n_points(), ws_.threads,
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t p = lo; p < hi; ++p) {
                         out.z[p] = s.z[p] - lambda * u.zeta_samples[p];
                         out.mf_samples[p] =
                             s.mf_samples[p] - lambda * u.mu_samples[p];
                         out.r[p] = (1.0 - lambda) * s.r[p] + l_term[p];
                         if (!std::isfinite(out.z[p]) ||
                             !std::isfinite(out.r[p]))
                             throw SolverError(
                                 "step: non-finite state update");
                     }
                 });

    out.mf = s.mf;
    for (std::size_t i = 0; i < out.mf.coef.size(); ++i)
        out.mf.coef[i] -= lambda * u.mu.coef[i];

    out.E = ws_.riesz.weighted_E(out.r);
    return out;
}

IterationRecord Driver::make_record(const IterateState& s,
                                    const IterateState* prev) const {
    IterationRecord rec;
    rec.k = s.k;
    rec.norm_y = norm_y(s.z);
    rec.norm_f = norm_f(s.mf_samples);
    rec.sqrt2E = std::sqrt(2.0 * s.E);
    rec.lambda = 0.0;
    if (prev) {
        const QuadGrid& qg = ws_.quad;
        double dy = 0.0, df = 0.0;
        for (std::size_t p = 0; p < qg.n_points(); ++p) {
            const double ddy =
                qg.bundles[p].rho_inv * (s.z[p] - prev->z[p]);
            dy += qg.w[p] * ddy * ddy;
            if (qg.in_omega[p]) {
                const double ddf = qg.bundles[p].rho0_inv *
                                   (s.mf_samples[p] - prev->mf_samples[p]);
                df += qg.w[p] * ddf * ddf;
            }
        }
        const double ny = norm_y(prev->z);
        const double nf = norm_f(prev->mf_samples);
        rec.rel_dy = ny > 0.0 ? std::sqrt(dy) / ny : 0.0;
        rec.rel_df = nf > 0.0 ? std::sqrt(df) / nf : 0.0;
    }
    return rec;
}

RunResult Driver::run(const std::function<double(double)>& u0,
                      const RunConfig& cfg) {
    RunResult res;
    IterateState state = init_state(u0);
    res.records.push_back(make_record(state, nullptr));

    const double sqrt2E0 = std::sqrt(2.0 * state.E);
    int steps = 0;
    while (true) {
        if (state.E < cfg.epsilon) {
            res.status = RunStatus::converged;
            break;
        }
        if (std::sqrt(2.0 * state.E) > cfg.divergence_cap * sqrt2E0 &&
            state.k > 0) {
            res.status = RunStatus::diverged;
            break;
        }
        if (steps >= cfg.max_iters) {
            res.status = RunStatus::maxiter;
            break;
        }
        ControlUpdate upd = direction(state);
        res.direction_ratio.push_back(
            state.E > 0.0
                ? (upd.norm_zeta + upd.norm_mu_qT) / std::sqrt(state.E)
                : 0.0);
        const double lambda = (cfg.variant == Variant::newton)
                                  ? 1.0
                                  : line_search(state, upd, cfg.step_max);
        res.records.back().lambda = lambda;
        IterateState next = step(state, upd, lambda);
        res.records.push_back(make_record(next, &state));
        state = std::move(next);
        ++steps;
    }
    res.state = std::move(state);
    return res;
}

RunResult Driver::picard_run(const std::function<double(double)>& u0,
                             const RunConfig& cfg) {
    const QuadGrid& qg = ws_.quad;
    const auto& g = ws_.g;
    RunResult res;

    IterateState state = init_state(u0);
    res.records.push_back(make_record(state, nullptr));

    for (int k = 1; k <= cfg.max_iters; ++k) {
        // potential from the previous iterate, fresh initial-data solve
        std::vector<double> A(qg.n_points());
        parallel_for(qg.n_points(), ws_.threads,
                     [&](std::size_t lo, std::size_t hi) {
                         for (std::size_t p = lo; p < hi; ++p)
                             A[p] = g.gtilde(qg.bundles[p].rho_inv *
                                             state.z[p]);
                     });
        LinearizedProblem lp;
        lp.A_samples = A;
        lp.u0 = u0;
        lp.nu = ws_.nu;
        ControlUpdate upd = ws_.solver.solve(lp);

        IterateState next;
        next.k = k;
        next.z = std::move(upd.zeta_samples);
        next.mf = std::move(upd.mu);
        next.mf_samples = std::move(upd.mu_samples);
        // nonlinear residual of the linearized solution:
        // rho2 B = w12 z (gtilde(y_k) - gtilde(y_{k-1}))
        next.r.assign(qg.n_points(), 0.0);
        for (std::size_t p = 0; p < qg.n_points(); ++p) {
            const WeightBundle& wb = qg.bundles[p];
            const double u = wb.rho_inv * next.z[p];
            next.r[p] = wb.w12 * next.z[p] * (g.gtilde(u) - A[p]);
        }
        next.E = ws_.riesz.weighted_E(next.r);

        res.records.back().lambda = 1.0;
        res.records.push_back(make_record(next, &state));
        state = std::move(next);

        if (res.records.back().rel_dy < cfg.picard_tol) {
            res.picard_converged = true;
            res.status = RunStatus::converged;
            res.state = std::move(state);
            return res;
        }
    }
    res.status = RunStatus::maxiter;
    res.state = std::move(state);
    return res;
}

double convergence_order(const std::vector<IterationRecord>& records,
                         int min_tail) {
    std::vector<double> e;
    for (const auto& r : records)
        if (r.sqrt2E > 0.0) e.push_back(r.sqrt2E);
    if (e.size() < 4)
        throw SolverError("convergence_order: need at least 4 positive "
                          "error values");
    // trailing strictly decreasing window
    std::size_t end = e.size();
    std::size_t begin = end - 1;
    while (begin > 0 && e[begin - 1] > e[begin]) --begin;
    const std::size_t avail = end - begin - 1; // pairs
    std::size_t want = std::max<std::size_t>(
        min_tail, (e.size() - 1) / 4);
    want = std::min(want, avail);
    if (want < 2)
        throw SolverError("convergence_order: fewer than 2 usable pairs");
    const std::size_t first_pair = end - 1 - want;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(want);
    for (std::size_t i = first_pair; i + 1 < end; ++i) {
        const double X = std::log(e[i]);
        const double Y = std::log(e[i + 1]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300)
        throw SolverError("convergence_order: degenerate fit");
    return (n * sxy - sx * sy) / denom;
}

std::function<double(double, double)>
control_evaluator(const Workspace& ws, const C1Field& mf) {
    const Grid grid = ws.grid;
    const WeightParams wp = ws.wp;
    const C1Field field = mf;
    return [grid, wp, field](double x, double t) {
        if (!(x > wp.omega_a && x < wp.omega_b)) return 0.0;
        const double r0i = rho0_inv_at(x, t, wp);
        if (r0i == 0.0) return 0.0;
        return -r0i * evaluate_field(grid, field, x, t, EvalOrder::value).v;
    };
}

NullControlReport null_control_report(const Workspace& ws,
                                      const IterateState& s,
                                      const std::function<double(double)>& u0,
                                      const ForwardConfig& fcfg) {
    NullControlReport rep;
    auto f = control_evaluator(ws, s.mf);
    rep.trajectory = solve_forward(u0, f, ws.g, fcfg);
    rep.ratio = rep.trajectory.norm_u0 > 0.0
                    ? rep.trajectory.norm_final / rep.trajectory.norm_u0
                    : 0.0;
    return rep;
}

} // namespace heatctl
