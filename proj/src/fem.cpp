#include "heatctl/fem.hpp"

#include "heatctl/errors.hpp"
#include "heatctl/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace heatctl {

void validate(const Grid& g) {
    if (g.nx < 4 || g.nt < 4)
        throw ConfigError("mesh.nx and mesh.nt must be >= 4");
    if (!(g.T > 0.0)) throw ConfigError("T must be > 0");
}

namespace {

// 1D cubic Hermite basis on [0,1]: value/derivative at the two endpoints.
// h[k] and dh[k], k = 0: value at 0, 1: slope at 0, 2: value at 1,
// 3: slope at 1. Slope entries are unscaled (reference units).
inline void hermite1d(double u, double h[4], double dh[4], double d2h[4]) {
    const double u2 = u * u, u3 = u2 * u;
    h[0] = 1.0 - 3.0 * u2 + 2.0 * u3;
    h[1] = u - 2.0 * u2 + u3;
    h[2] = 3.0 * u2 - 2.0 * u3;
    h[3] = -u2 + u3;
    dh[0] = -6.0 * u + 6.0 * u2;
    dh[1] = 1.0 - 4.0 * u + 3.0 * u2;
    dh[2] = 6.0 * u - 6.0 * u2;
    dh[3] = -2.0 * u + 3.0 * u2;
    d2h[0] = -6.0 + 12.0 * u;
    d2h[1] = -4.0 + 6.0 * u;
    d2h[2] = 6.0 - 12.0 * u;
    d2h[3] = -2.0 + 6.0 * u;
}

} // namespace

std::array<ShapeValue, 16> shape_eval(double xi, double tau, double hx,
                                      double ht) {
    double X[4], dX[4], d2X[4], Tt[4], dT[4], d2T[4];
    hermite1d(xi, X, dX, d2X);
    hermite1d(tau, Tt, dT, d2T);

    std::array<ShapeValue, 16> out;
    // local node (di, dj), types [v, dx, dt, dxt]
    for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di) {
            const int nodeloc = 2 * dj + di;
            for (int k = 0; k < 4; ++k) {
                const bool slope_x = (k == 1 || k == 3);
                const bool slope_t = (k == 2 || k == 3);
                const int ix = 2 * di + (slope_x ? 1 : 0);
                const int it = 2 * dj + (slope_t ? 1 : 0);
                const double sx = slope_x ? hx : 1.0;
                const double st = slope_t ? ht : 1.0;
                ShapeValue s;
                s.v = sx * st * X[ix] * Tt[it];
                s.dx = sx * st * dX[ix] * Tt[it] / hx;
                s.dt = sx * st * X[ix] * dT[it] / ht;
                s.dxx = sx * st * d2X[ix] * Tt[it] / (hx * hx);
                s.dxt = sx * st * dX[ix] * dT[it] / (hx * ht);
                out[4 * nodeloc + k] = s;
            }
        }
    return out;
}

DofMap::DofMap(const Grid& g) : grid(g) {
    full_to_free.assign(g.n_dofs(), -1);
    free_to_full.clear();
    for (int j = 0; j <= g.nt; ++j)
        for (int i = 0; i <= g.nx; ++i)
            for (int k = 0; k < 4; ++k) {
                const bool lateral = (i == 0 || i == g.nx);
                const bool constrained = lateral && (k == 0 || k == 2);
                if (constrained) continue;
                const int full = gdof(i, j, k);
                full_to_free[full] = static_cast<int>(free_to_full.size());
                free_to_full.push_back(full);
            }
}

std::array<int, 16> DofMap::cell_dofs(int ix, int jt) const {
    std::array<int, 16> d;
    for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di)
            for (int k = 0; k < 4; ++k)
                d[4 * (2 * dj + di) + k] = gdof(ix + di, jt + dj, k);
    return d;
}

FieldValue evaluate_field(const Grid& g, const C1Field& f, double x, double t,
                          EvalOrder order) {
    if (x < 0.0 || x > 1.0 || t < 0.0 || t > g.T)
        throw std::domain_error("evaluate_field: point outside domain");
    int ix = std::min(static_cast<int>(x / g.hx()), g.nx - 1);
    int jt = std::min(static_cast<int>(t / g.ht()), g.nt - 1);
    const double xi = x / g.hx() - ix;
    const double tau = t / g.ht() - jt;
    const auto sv = shape_eval(xi, tau, g.hx(), g.ht());

    FieldValue out;
    for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di)
            for (int k = 0; k < 4; ++k) {
                const double c = f.coef[4 * g.node(ix + di, jt + dj) + k];
                const auto& s = sv[4 * (2 * dj + di) + k];
                out.v += c * s.v;
                if (order == EvalOrder::value) continue;
                out.dx += c * s.dx;
                out.dt += c * s.dt;
                if (order == EvalOrder::grad) continue;
                out.dxx += c * s.dxx;
                out.dxt += c * s.dxt;
            }
    return out;
}

void gauss_rule(int n, std::vector<double>& nodes,
                std::vector<double>& weights) {
    // Newton on Legendre polynomials, mapped to [0,1].
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = 0.5 * (1.0 + x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    // ascending order
    for (int i = 0; i < n / 2; ++i) {
        std::swap(nodes[i], nodes[n - 1 - i]);
        std::swap(weights[i], weights[n - 1 - i]);
    }
}

QuadGrid build_quadrature(const Grid& g, int rule_order,
                          const WeightParams& wp, int threads) {
    if (rule_order < 3)
        throw ConfigError("mesh.quad_order must be >= 3");
    validate(g);
    validate(wp);

    QuadGrid qg;
    qg.grid = g;
    qg.wp = wp;
    qg.q = rule_order;
    std::vector<double> gn, gw;
    gauss_rule(rule_order, gn, gw);

    const int nlev = g.nt * rule_order;
    const int nspat = g.nx * rule_order;
    qg.level_t.resize(nlev);
    qg.level_wt.resize(nlev);
    qg.spat_x.resize(nspat);
    qg.spat_wx.resize(nspat);
    qg.ref_xi = gn;
    qg.ref_tau = gn;
    for (int jt = 0; jt < g.nt; ++jt)
        for (int gt = 0; gt < rule_order; ++gt) {
            qg.level_t[jt * rule_order + gt] = (jt + gn[gt]) * g.ht();
            qg.level_wt[jt * rule_order + gt] = gw[gt] * g.ht();
        }
    for (int ix = 0; ix < g.nx; ++ix)
        for (int gx = 0; gx < rule_order; ++gx) {
            qg.spat_x[ix * rule_order + gx] = (ix + gn[gx]) * g.hx();
            qg.spat_wx[ix * rule_order + gx] = gw[gx] * g.hx();
        }

    const std::size_t npts =
        static_cast<std::size_t>(nlev) * static_cast<std::size_t>(nspat);
    qg.xs.resize(npts);
    qg.ts.resize(npts);
    qg.w.resize(npts);
    qg.bundles.resize(npts);
    qg.in_omega.resize(npts);

    parallel_for(npts, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const int L = static_cast<int>(p / nspat);
            const int S = static_cast<int>(p % nspat);
            const double x = qg.spat_x[S];
            const double t = qg.level_t[L];
            qg.xs[p] = x;
            qg.ts[p] = t;
            qg.w[p] = qg.spat_wx[S] * qg.level_wt[L];
            qg.bundles[p] = bundle(x, t, wp);
            qg.in_omega[p] =
                (x > wp.omega_a && x < wp.omega_b) ? 1 : 0;
        }
    });
    return qg;
}

void sample_field(const QuadGrid& qg, const C1Field& f,
                  std::vector<double>& values, int threads) {
    const Grid& g = qg.grid;
    values.assign(qg.n_points(), 0.0);
    const int q = qg.q;
    const int nspat = qg.n_spatial();

    // reference shape table, shared by every cell on the uniform mesh
    std::vector<std::array<ShapeValue, 16>> tab(q * q);
    for (int gt = 0; gt < q; ++gt)
        for (int gx = 0; gx < q; ++gx)
            tab[gt * q + gx] =
                shape_eval(qg.ref_xi[gx], qg.ref_tau[gt], g.hx(), g.ht());

    const std::size_t ncells =
        static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.nt);
    parallel_for(ncells, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c) {
            const int ix = static_cast<int>(c % g.nx);
            const int jt = static_cast<int>(c / g.nx);
            double loc[16];
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di)
                    for (int k = 0; k < 4; ++k)
                        loc[4 * (2 * dj + di) + k] =
                            f.coef[4 * g.node(ix + di, jt + dj) + k];
            for (int gt = 0; gt < q; ++gt)
                for (int gx = 0; gx < q; ++gx) {
                    const auto& sv = tab[gt * q + gx];
                    double acc = 0.0;
                    for (int a = 0; a < 16; ++a) acc += loc[a] * sv[a].v;
                    const std::size_t p =
                        qg.index(jt * q + gt, ix * q + gx);
                    values[p] = acc;
                }
        }
    });
}

} // namespace heatctl
