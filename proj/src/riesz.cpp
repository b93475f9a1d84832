#include "heatctl/riesz.hpp"

#include "heatctl/errors.hpp"
#include "heatctl/parallel.hpp"

#include <cmath>

namespace heatctl {

namespace {

// LDL^T of the P1 stiffness (2/h on the diagonal, -1/h off) for n_cells
// cells, n_cells-1 interior unknowns.
void factor_stiffness(int n_cells, double h, std::vector<double>& diag,
                      std::vector<double>& lower) {
    const int n = n_cells - 1;
    diag.assign(n, 0.0);
    lower.assign(n, 0.0);
    const double d = 2.0 / h, e = -1.0 / h;
    double prev = d;
    diag[0] = prev;
    for (int i = 1; i < n; ++i) {
        lower[i] = e / diag[i - 1];
        diag[i] = d - lower[i] * e;
        if (!(diag[i] > 0.0))
            throw SolverError("riesz: stiffness factorization lost positivity");
    }
}

void solve_inplace(const std::vector<double>& diag,
                   const std::vector<double>& lower, std::vector<double>& b,
                   std::vector<double>& c) {
    const int n = static_cast<int>(diag.size());
    c = b;
    for (int i = 1; i < n; ++i) c[i] -= lower[i] * c[i - 1];
    for (int i = 0; i < n; ++i) c[i] /= diag[i];
    for (int i = n - 2; i >= 0; --i) c[i] -= lower[i + 1] * c[i + 1];
}

} // namespace

RieszSlice::RieszSlice(int n_cells) : n_(n_cells), h_(1.0 / n_cells) {
    if (n_cells < 2) throw ConfigError("riesz mesh needs at least 2 cells");
    factor_stiffness(n_, h_, diag_, lower_);
    b_.assign(n_ - 1, 0.0);
    c_.assign(n_ - 1, 0.0);
}

double RieszSlice::hminus_norm_sq(std::span<const double> xq,
                                  std::span<const double> wq,
                                  std::span<const double> rq) const {
    std::fill(b_.begin(), b_.end(), 0.0);
    const int n = n_;
    for (std::size_t k = 0; k < xq.size(); ++k) {
        if (!(std::isfinite(rq[k])))
            throw SolverError("riesz: non-finite load sample");
        const double x = xq[k];
        int cell = std::min(static_cast<int>(x / h_), n - 1);
        const double loc = x / h_ - cell;
        const double wr = wq[k] * rq[k];
        // hats at nodes cell and cell+1; node 0 and node n are constrained
        if (cell >= 1) b_[cell - 1] += wr * (1.0 - loc);
        if (cell + 1 <= n - 1) b_[cell] += wr * loc;
    }
    solve_inplace(diag_, lower_, b_, c_);
    double e = 0.0;
    for (std::size_t i = 0; i < b_.size(); ++i) e += b_[i] * c_[i];
    return e;
}

RieszEvaluator::RieszEvaluator(const QuadGrid& qg, int refine, int threads)
    : qg_(&qg), refine_(refine), threads_(threads) {
    if (refine < 1) throw ConfigError("riesz.refine must be >= 1");
    n_cells_ = refine * qg.grid.nx;
    h_ = 1.0 / n_cells_;
    factor_stiffness(n_cells_, h_, diag_, lower_);
    const int ns = qg.n_spatial();
    station_cell_.resize(ns);
    station_loc_.resize(ns);
    for (int s = 0; s < ns; ++s) {
        const double x = qg.spat_x[s];
        int cell = std::min(static_cast<int>(x / h_), n_cells_ - 1);
        station_cell_[s] = cell;
        station_loc_[s] = x / h_ - cell;
    }
}

double RieszEvaluator::level_energy(std::span<const double> r, int level,
                                    std::vector<double>& b,
                                    std::vector<double>& c) const {
    const QuadGrid& qg = *qg_;
    const int ns = qg.n_spatial();
    std::fill(b.begin(), b.end(), 0.0);
    const std::size_t base = qg.index(level, 0);
    for (int s = 0; s < ns; ++s) {
        const double wr = qg.spat_wx[s] * r[base + s];
        const int cell = station_cell_[s];
        const double loc = station_loc_[s];
        if (cell >= 1) b[cell - 1] += wr * (1.0 - loc);
        if (cell + 1 <= n_cells_ - 1) b[cell] += wr * loc;
    }
    solve_inplace(diag_, lower_, b, c);
    double e = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) e += b[i] * c[i];
    return e;
}

double RieszEvaluator::weighted_E(std::span<const double> r) const {
    const QuadGrid& qg = *qg_;
    const int nlev = qg.n_levels();
    std::vector<double> energies(nlev, 0.0);
    parallel_for(static_cast<std::size_t>(nlev), threads_,
                 [&](std::size_t lo, std::size_t hi) {
                     std::vector<double> b(n_cells_ - 1), c(n_cells_ - 1);
                     for (std::size_t L = lo; L < hi; ++L)
                         energies[L] =
                             level_energy(r, static_cast<int>(L), b, c);
                 });
    double E = 0.0;
    for (int L = 0; L < nlev; ++L) E += qg.level_wt[L] * energies[L];
    return 0.5 * E;
}

} // namespace heatctl
