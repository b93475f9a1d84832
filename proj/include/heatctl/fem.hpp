#pragma once

#include "heatctl/weights.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace heatctl {

// Structured rectangle mesh of Q_T = (0,1) x (0,T).
struct Grid {
    int nx = 64; // cells in x
    int nt = 64; // cells in t
    double T = 0.5;

    double hx() const { return 1.0 / nx; }
    double ht() const { return T / nt; }
    int n_nodes() const { return (nx + 1) * (nt + 1); }
    int n_dofs() const { return 4 * n_nodes(); }
    int node(int i, int j) const { return j * (nx + 1) + i; }
};

void validate(const Grid& g);

// Values of one bicubic Hermite basis function at a point.
struct ShapeValue {
    double v, dx, dt, dxx, dxt;
};

// The 16 local basis functions of the Bogner-Fox-Schmit rectangle at the
// reference coordinates (xi, tau) in [0,1]^2. Local dof order: nodes
// (0,0),(1,0),(0,1),(1,1), per node [value, d/dx, d/dt, d2/dxdt]; slope
// dofs carry the physical scaling by hx/ht so coefficients are nodal
// derivatives. Derivatives are returned in physical units.
std::array<ShapeValue, 16> shape_eval(double xi, double tau, double hx,
                                      double ht);

// Dof layout of a scalar C1 field with the lateral constraint
// m = dm/dt = 0 on x = 0 and x = 1.
struct DofMap {
    Grid grid;
    std::vector<int> full_to_free; // -1 for constrained dofs
    std::vector<int> free_to_full;

    explicit DofMap(const Grid& g);
    int n_free() const { return static_cast<int>(free_to_full.size()); }
    // global dof id for node (i,j), component k in [0,4)
    int gdof(int i, int j, int k) const {
        return 4 * grid.node(i, j) + k;
    }
    // the 16 global dof ids of cell (ix, jt)
    std::array<int, 16> cell_dofs(int ix, int jt) const;
};

// Coefficients of one C1 field. Constrained entries stay exactly zero.
struct C1Field {
    std::vector<double> coef; // size grid.n_dofs()

    C1Field() = default;
    explicit C1Field(const Grid& g) : coef(g.n_dofs(), 0.0) {}
};

enum class EvalOrder { value, grad, second };

struct FieldValue {
    double v = 0, dx = 0, dt = 0, dxx = 0, dxt = 0;
};

// Evaluates a C1 field anywhere in the closed domain. Throws
// std::domain_error outside.
FieldValue evaluate_field(const Grid& g, const C1Field& f, double x, double t,
                          EvalOrder order = EvalOrder::second);

// Interpolates nodal data (value and derivatives supplied analytically).
template <typename V, typename DX, typename DT, typename DXT>
C1Field interpolate(const Grid& g, V&& v, DX&& dx, DT&& dt, DXT&& dxt) {
    C1Field f(g);
    for (int j = 0; j <= g.nt; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double x = i * g.hx(), t = j * g.ht();
            const int n = 4 * g.node(i, j);
            f.coef[n + 0] = v(x, t);
            f.coef[n + 1] = dx(x, t);
            f.coef[n + 2] = dt(x, t);
            f.coef[n + 3] = dxt(x, t);
        }
    return f;
}

// Tensor Gauss-Legendre quadrature over every cell with cached weight
// bundles and indicator flags. Point layout is time-level major: level
// L = jt*q + gt runs over nt*q levels, each holding nx*q spatial points
// S = ix*q + gx; the flat index is p = L*(nx*q) + S.
struct QuadGrid {
    Grid grid;
    WeightParams wp;
    int q = 5; // points per direction and cell
    std::vector<double> xs, ts, w; // per point
    std::vector<double> level_t, level_wt;   // per time level
    std::vector<double> spat_x, spat_wx;     // per spatial station
    std::vector<WeightBundle> bundles;       // per point
    std::vector<std::uint8_t> in_omega;      // per point: x in (a1,a2)
    std::vector<double> ref_xi, ref_tau;     // per-cell reference coords

    int n_levels() const { return grid.nt * q; }
    int n_spatial() const { return grid.nx * q; }
    std::size_t n_points() const { return xs.size(); }
    std::size_t index(int level, int s) const {
        return static_cast<std::size_t>(level) * n_spatial() + s;
    }
};

// rule_order >= 3 per direction required.
QuadGrid build_quadrature(const Grid& g, int rule_order,
                          const WeightParams& wp, int threads);

// Samples a C1 field at every quadrature point (optionally with the x- and
// t-derivative arrays for operator application).
void sample_field(const QuadGrid& qg, const C1Field& f,
                  std::vector<double>& values, int threads);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_rule(int n, std::vector<double>& nodes,
                std::vector<double>& weights);

} // namespace heatctl
