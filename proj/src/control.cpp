#include "heatctl/control.hpp"

#include "heatctl/errors.hpp"
#include "heatctl/parallel.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>

namespace heatctl {

ControlSolver::ControlSolver(const QuadGrid& qg, SolverOptions opt,
                             int threads)
    : qg_(&qg), dofs_(qg.grid), opt_(opt), threads_(threads) {
    const int q = qg.q;
    shape_.resize(q * q);
    state_.resize(q * q);
    for (int gt = 0; gt < q; ++gt)
        for (int gx = 0; gx < q; ++gx) {
            shape_[gt * q + gx] = shape_eval(qg.ref_xi[gx], qg.ref_tau[gt],
                                             qg.grid.hx(), qg.grid.ht());
            // active fine subcell and hats at the reference point
            const int R = kStateRefine;
            const double X = R * qg.ref_xi[gx];
            const double Tt = R * qg.ref_tau[gt];
            const int sx = std::min(static_cast<int>(X), R - 1);
            const int st = std::min(static_cast<int>(Tt), R - 1);
            const double xf = X - sx, tf = Tt - st;
            StateHats& sh = state_[gt * q + gx];
            sh.loc[0] = st * (R + 1) + sx;
            sh.loc[1] = st * (R + 1) + sx + 1;
            sh.loc[2] = (st + 1) * (R + 1) + sx;
            sh.loc[3] = (st + 1) * (R + 1) + sx + 1;
            sh.N[0] = (1 - xf) * (1 - tf);
            sh.N[1] = xf * (1 - tf);
            sh.N[2] = (1 - xf) * tf;
            sh.N[3] = xf * tf;
        }
    // lumped mass of the state space
    const Grid& g = qg.grid;
    lumped_.assign(n_state_nodes(), 0.0);
    for (int jt = 0; jt < g.nt; ++jt)
        for (int ix = 0; ix < g.nx; ++ix)
            for (int gt = 0; gt < q; ++gt)
                for (int gx = 0; gx < q; ++gx) {
                    const std::size_t p = qg.index(jt * q + gt, ix * q + gx);
                    const StateHats& sh = state_[gt * q + gx];
                    for (int i = 0; i < 4; ++i)
                        lumped_[fine_node(ix, jt, sh.loc[i])] +=
                            qg.w[p] * sh.N[i];
                }
}

void ControlSolver::apply_D(const C1Field& mu, std::span<const double> A,
                            double nu, std::vector<double>& zeta) const {
    const QuadGrid& qg = *qg_;
    const Grid& g = qg.grid;
    const int q = qg.q;
    zeta.assign(qg.n_points(), 0.0);

    const std::size_t ncells =
        static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.nt);
    parallel_for(ncells, threads_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c) {
            const int ix = static_cast<int>(c % g.nx);
            const int jt = static_cast<int>(c / g.nx);
            double loc[16];
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di)
                    for (int k = 0; k < 4; ++k)
                        loc[4 * (2 * dj + di) + k] =
                            mu.coef[4 * g.node(ix + di, jt + dj) + k];
            for (int gt = 0; gt < q; ++gt)
                for (int gx = 0; gx < q; ++gx) {
                    const auto& sv = shape_[gt * q + gx];
                    double m = 0, mx = 0, mt = 0, mxx = 0;
                    for (int a = 0; a < 16; ++a) {
                        m += loc[a] * sv[a].v;
                        mx += loc[a] * sv[a].dx;
                        mt += loc[a] * sv[a].dt;
                        mxx += loc[a] * sv[a].dxx;
                    }
                    const std::size_t p = qg.index(jt * q + gt, ix * q + gx);
                    const WeightBundle& wb = qg.bundles[p];
                    const double Ap = A.empty() ? 0.0 : A[p];
                    zeta[p] = -(wb.c_dt * m + wb.w32 * mt) -
                              nu * (wb.c_dxx * m + 2.0 * wb.c_dx * mx +
                                    wb.w32 * mxx) +
                              Ap * wb.w32 * m;
                }
        }
    });
}

void ControlSolver::project_state(std::span<const double> values,
                                  std::vector<double>& samples,
                                  std::vector<double>* nodal_out) const {
    const QuadGrid& qg = *qg_;
    const Grid& g = qg.grid;
    const int q = qg.q;
    std::vector<double> nodal(n_state_nodes(), 0.0);
    for (int jt = 0; jt < g.nt; ++jt)
        for (int ix = 0; ix < g.nx; ++ix)
            for (int gt = 0; gt < q; ++gt)
                for (int gx = 0; gx < q; ++gx) {
                    const std::size_t p = qg.index(jt * q + gt, ix * q + gx);
                    const StateHats& sh = state_[gt * q + gx];
                    const double wv = qg.w[p] * values[p];
                    for (int i = 0; i < 4; ++i)
                        nodal[fine_node(ix, jt, sh.loc[i])] += wv * sh.N[i];
                }
    for (std::size_t i = 0; i < nodal.size(); ++i) nodal[i] /= lumped_[i];

    samples.assign(qg.n_points(), 0.0);
    parallel_for(static_cast<std::size_t>(g.nx) * g.nt, threads_,
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t c = lo; c < hi; ++c) {
                         const int ix = static_cast<int>(c % g.nx);
                         const int jt = static_cast<int>(c / g.nx);
                         for (int gt = 0; gt < q; ++gt)
                             for (int gx = 0; gx < q; ++gx) {
                                 const StateHats& sh = state_[gt * q + gx];
                                 const std::size_t p = qg.index(
                                     jt * q + gt, ix * q + gx);
                                 double acc = 0.0;
                                 for (int i = 0; i < 4; ++i)
                                     acc += nodal[fine_node(ix, jt,
                                                            sh.loc[i])] *
                                            sh.N[i];
                                 samples[p] = acc;
                             }
                     }
                 });
    if (nodal_out) *nodal_out = std::move(nodal);
}

PrimalSystem ControlSolver::assemble(const LinearizedProblem& p) const {
    const QuadGrid& qg = *qg_;
    const Grid& g = qg.grid;
    const int q = qg.q;
    const double nu = p.nu;
    const std::size_t ncells =
        static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.nt);
    const bool projected =
        opt_.constraint == SolverOptions::Constraint::projected;

    struct CellData {
        double Ke[16][16]; // pointwise D-part plus the q_T mass
        double Ce[kLocalNodes][16]; // state-node pairing with D
        double le[16];
    };
    std::vector<CellData> cells(ncells);

    const bool residual_source = !p.residual.empty();

    parallel_for(ncells, threads_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c) {
            const int ix = static_cast<int>(c % g.nx);
            const int jt = static_cast<int>(c / g.nx);
            CellData& cd = cells[c];
            for (int a = 0; a < 16; ++a) {
                cd.le[a] = 0.0;
                for (int b = 0; b < 16; ++b) cd.Ke[a][b] = 0.0;
                for (int i = 0; i < kLocalNodes; ++i) cd.Ce[i][a] = 0.0;
            }
            for (int gt = 0; gt < q; ++gt)
                for (int gx = 0; gx < q; ++gx) {
                    const auto& sv = shape_[gt * q + gx];
                    const StateHats& sh = state_[gt * q + gx];
                    const std::size_t pt = qg.index(jt * q + gt, ix * q + gx);
                    const WeightBundle& wb = qg.bundles[pt];
                    const double Ap =
                        p.A_samples.empty() ? 0.0 : p.A_samples[pt];
                    const double w = qg.w[pt];
                    double Dv[16];
                    for (int a = 0; a < 16; ++a) {
                        const ShapeValue& s = sv[a];
                        Dv[a] = -(wb.c_dt * s.v + wb.w32 * s.dt) -
                                nu * (wb.c_dxx * s.v + 2.0 * wb.c_dx * s.dx +
                                      wb.w32 * s.dxx) +
                                Ap * wb.w32 * s.v;
                    }
                    if (projected) {
                        for (int i = 0; i < 4; ++i) {
                            const double wn = w * sh.N[i];
                            for (int a = 0; a < 16; ++a)
                                cd.Ce[sh.loc[i]][a] += wn * Dv[a];
                        }
                    } else {
                        for (int a = 0; a < 16; ++a) {
                            const double wa = w * Dv[a];
                            for (int b = a; b < 16; ++b)
                                cd.Ke[a][b] += wa * Dv[b];
                        }
                    }
                    if (qg.in_omega[pt] != 0) {
                        for (int a = 0; a < 16; ++a) {
                            const double wa = w * sv[a].v;
                            for (int b = a; b < 16; ++b)
                                cd.Ke[a][b] += wa * sv[b].v;
                        }
                    }
                    if (residual_source) {
                        const double Tt = g.T - qg.ts[pt];
                        const double wr = w * Tt * p.residual[pt];
                        for (int a = 0; a < 16; ++a)
                            cd.le[a] += wr * sv[a].v;
                    }
                }
            for (int a = 0; a < 16; ++a) {
                if (!std::isfinite(cd.le[a]))
                    throw SolverError("assembly: non-finite load in cell (" +
                                      std::to_string(ix) + "," +
                                      std::to_string(jt) + ")");
                for (int b = a; b < 16; ++b)
                    if (!std::isfinite(cd.Ke[a][b]))
                        throw SolverError(
                            "assembly: non-finite entry in cell (" +
                            std::to_string(ix) + "," + std::to_string(jt) +
                            ")");
            }
        }
    });

    const int nfree = dofs_.n_free();
    PrimalSystem sys;
    sys.load = Eigen::VectorXd::Zero(nfree);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(ncells * (projected ? 140 : 273));
    std::vector<Eigen::Triplet<double>> ctrips;
    if (projected) ctrips.reserve(ncells * 64);

    for (std::size_t c = 0; c < ncells; ++c) {
        const int ix = static_cast<int>(c % g.nx);
        const int jt = static_cast<int>(c / g.nx);
        const auto gd = dofs_.cell_dofs(ix, jt);
        int fr[16];
        for (int a = 0; a < 16; ++a) fr[a] = dofs_.full_to_free[gd[a]];
        const CellData& cd = cells[c];
        for (int a = 0; a < 16; ++a) {
            if (fr[a] < 0) continue;
            sys.load[fr[a]] += cd.le[a];
            for (int b = a; b < 16; ++b) {
                if (fr[b] < 0 || cd.Ke[a][b] == 0.0) continue;
                trips.emplace_back(fr[a], fr[b], cd.Ke[a][b]);
                if (a != b) trips.emplace_back(fr[b], fr[a], cd.Ke[a][b]);
            }
        }
        if (projected) {
            for (int i = 0; i < kLocalNodes; ++i) {
                const int node = fine_node(ix, jt, i);
                for (int a = 0; a < 16; ++a) {
                    if (fr[a] < 0 || cd.Ce[i][a] == 0.0) continue;
                    ctrips.emplace_back(node, fr[a], cd.Ce[i][a]);
                }
            }
        }
    }
    sys.K.resize(nfree, nfree);
    sys.K.setFromTriplets(trips.begin(), trips.end());

    if (projected) {
        Eigen::SparseMatrix<double> C(n_state_nodes(), nfree);
        C.setFromTriplets(ctrips.begin(), ctrips.end());
        Eigen::VectorXd dinv(n_state_nodes());
        for (int i = 0; i < n_state_nodes(); ++i) dinv[i] = 1.0 / lumped_[i];
        Eigen::SparseMatrix<double> K =
            Eigen::SparseMatrix<double>(C.transpose()) *
            dinv.asDiagonal() * C;
        sys.K = sys.K + K;
    }
    sys.K.makeCompressed();

    if (!residual_source && p.u0) {
        // 1D load along t = 0: int rho0(x,0) u0(x) m(x,0) dx. Only the
        // value/dx dofs of the bottom nodes see it.
        const int ns = qg.n_spatial();
        const double hx = g.hx();
        for (int s = 0; s < ns; ++s) {
            const double x = qg.spat_x[s];
            const double wx = qg.spat_wx[s];
            const int ix = s / q;
            const double xi = x / hx - ix;
            const double rho0 = bundle(x, 0.0, qg.wp).rho0();
            const double f = wx * rho0 * p.u0(x);
            const double x2 = xi * xi, x3 = x2 * xi;
            const double Hv0 = 1.0 - 3.0 * x2 + 2.0 * x3;
            const double Hd0 = hx * (xi - 2.0 * x2 + x3);
            const double Hv1 = 3.0 * x2 - 2.0 * x3;
            const double Hd1 = hx * (-x2 + x3);
            const int n0v = dofs_.full_to_free[dofs_.gdof(ix, 0, 0)];
            const int n0d = dofs_.full_to_free[dofs_.gdof(ix, 0, 1)];
            const int n1v = dofs_.full_to_free[dofs_.gdof(ix + 1, 0, 0)];
            const int n1d = dofs_.full_to_free[dofs_.gdof(ix + 1, 0, 1)];
            if (n0v >= 0) sys.load[n0v] += f * Hv0;
            if (n0d >= 0) sys.load[n0d] += f * Hd0;
            if (n1v >= 0) sys.load[n1v] += f * Hv1;
            if (n1d >= 0) sys.load[n1d] += f * Hd1;
        }
    }
    return sys;
}

ControlUpdate ControlSolver::solve(const LinearizedProblem& p) {
    PrimalSystem sys = assemble(p);
    const int nfree = dofs_.n_free();
    Eigen::VectorXd m(nfree);

    if (opt_.kind == SolverOptions::Kind::direct) {
        if (!pattern_ready_) {
            ldlt_.analyzePattern(sys.K);
            pattern_ready_ = true;
        }
        ldlt_.factorize(sys.K);
        if (ldlt_.info() != Eigen::Success)
            throw SolverError(
                "control solve: factorization failed (system not positive "
                "definite; check weight/mesh configuration)");
        if (ldlt_.vectorD().minCoeff() <= 0.0)
            throw SolverError(
                "control solve: indefinite system (nonpositive pivot)");
        m = ldlt_.solve(sys.load);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                 Eigen::Lower | Eigen::Upper>
            cg;
        cg.setTolerance(opt_.cg_tol);
        cg.setMaxIterations(opt_.cg_maxit);
        cg.compute(sys.K);
        m = cg.solve(sys.load);
        if (cg.info() != Eigen::Success)
            throw SolverError("control solve: cg did not converge within " +
                              std::to_string(opt_.cg_maxit) + " iterations");
    }

    ControlUpdate upd{C1Field(qg_->grid)};
    for (int fdof = 0; fdof < nfree; ++fdof)
        upd.mu.coef[dofs_.free_to_full[fdof]] = m[fdof];

    sample_field(*qg_, upd.mu, upd.mu_samples, threads_);
    if (opt_.constraint == SolverOptions::Constraint::projected) {
        std::vector<double> draw;
        apply_D(upd.mu, p.A_samples, p.nu, draw);
        project_state(draw, upd.zeta_samples, &upd.zeta_nodal);
    } else {
        apply_D(upd.mu, p.A_samples, p.nu, upd.zeta_samples);
    }

    const QuadGrid& qg = *qg_;
    double nz = 0.0, nm = 0.0;
    for (std::size_t pt = 0; pt < qg.n_points(); ++pt) {
        nz += qg.w[pt] * upd.zeta_samples[pt] * upd.zeta_samples[pt];
        if (qg.in_omega[pt])
            nm += qg.w[pt] * upd.mu_samples[pt] * upd.mu_samples[pt];
    }
    upd.norm_zeta = std::sqrt(nz);
    upd.norm_mu_qT = std::sqrt(nm);
    return upd;
}

double ControlSolver::objective(const PrimalSystem& sys, const C1Field& mu,
                                std::span<const double> A, double nu) const {
    std::vector<double> zeta, ms;
    apply_D(mu, A, nu, zeta);
    const QuadGrid& qg = *qg_;
    double quad = 0.0;
    if (opt_.constraint == SolverOptions::Constraint::projected) {
        // the eliminated state enters through the lumped nodal norm
        std::vector<double> proj, nodal;
        project_state(zeta, proj, &nodal);
        for (std::size_t i = 0; i < nodal.size(); ++i)
            quad += lumped_[i] * nodal[i] * nodal[i];
    } else {
        for (std::size_t pt = 0; pt < qg.n_points(); ++pt)
            quad += qg.w[pt] * zeta[pt] * zeta[pt];
    }
    sample_field(*qg_, mu, ms, threads_);
    for (std::size_t pt = 0; pt < qg.n_points(); ++pt)
        if (qg.in_omega[pt]) quad += qg.w[pt] * ms[pt] * ms[pt];
    double lin = 0.0;
    for (int f = 0; f < dofs_.n_free(); ++f)
        lin += sys.load[f] * mu.coef[dofs_.free_to_full[f]];
    return 0.5 * quad - lin;
}

} // namespace heatctl
