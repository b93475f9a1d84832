#include "heatctl/nonlinearity.hpp"

#include "heatctl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace heatctl {

namespace {

// Outer branch for s > 0: theta(s) = -s^alpha log^{3/2}(1+s).
double theta(double s, double alpha) {
    const double L = std::log1p(s);
    return -std::pow(s, alpha) * L * std::sqrt(L);
}

double theta_prime(double s, double alpha) {
    const double L = std::log1p(s);
    return -(alpha * std::pow(s, alpha - 1.0) * L * std::sqrt(L) +
             std::pow(s, alpha) * 1.5 * std::sqrt(L) / (1.0 + s));
}

double lipschitz_scan(const std::function<double(double)>& gtilde) {
    // max |g(s)/s| over a log grid up to |s| = 1e6
    double K = std::abs(gtilde(0.0));
    for (int i = 0; i <= 400; ++i) {
        const double s = std::pow(10.0, -6.0 + 12.0 * i / 400.0);
        K = std::max(K, std::abs(gtilde(s)));
        K = std::max(K, std::abs(gtilde(-s)));
    }
    return K;
}

} // namespace

PaperG solve_paper_g_coefficients(double a, double alpha, bool smooth_inner) {
    PaperG pg;
    pg.a = a;
    pg.alpha = alpha;
    pg.smooth_inner = smooth_inner;
    const double va = theta(a, alpha);
    const double da = theta_prime(a, alpha);
    // kinked inner: c1|s| + c2 s^2 with value and slope matched at a
    pg.c1_coef = 2.0 * va / a - da;
    pg.c2_coef = (da * a - va) / (a * a);
    // smooth inner: b2 s^2 + b4 s^4
    pg.b4_coef = (da - 2.0 * va / a) / (2.0 * a * a * a);
    pg.b2_coef = va / (a * a) - pg.b4_coef * a * a;
    return pg;
}

Nonlinearity paper_g(double a, double alpha, bool smooth_inner) {
    if (!(a > 0.0 && a < 1.0))
        throw ConfigError("g.a must lie in (0,1), got " + std::to_string(a));
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("g.alpha must lie in (0,1), got " +
                          std::to_string(alpha));
    const PaperG pg = solve_paper_g_coefficients(a, alpha, smooth_inner);

    Nonlinearity n;
    n.kind = smooth_inner ? "paper-smooth" : "paper";
    n.holder_s = 1.0;
    if (!smooth_inner) {
        const double c1 = pg.c1_coef, c2 = pg.c2_coef, aa = a, al = alpha;
        n.g = [c1, c2, aa, al](double s) {
            const double m = std::abs(s);
            if (m < aa) return c1 * m + c2 * m * m;
            return theta(m, al);
        };
        // one-sided convention at |s| = a: outer branch wins the tie
        n.gprime = [c1, c2, aa, al](double s) {
            const double m = std::abs(s);
            const double sg = (s >= 0.0) ? 1.0 : -1.0;
            if (m < aa) return sg * (c1 + 2.0 * c2 * m);
            return sg * theta_prime(m, al);
        };
        // g even => gtilde(s) = g(s)/s is odd: sign(s)(c1 + c2|s|) inside.
        // gtilde(0) takes the right limit c1.
        n.gtilde = [c1, c2, aa, al](double s) {
            const double m = std::abs(s);
            const double sg = (s >= 0.0) ? 1.0 : -1.0;
            if (m < aa) return sg * (c1 + c2 * m);
            return sg * theta(m, al) / m;
        };
    } else {
        const double b2 = pg.b2_coef, b4 = pg.b4_coef, aa = a, al = alpha;
        n.g = [b2, b4, aa, al](double s) {
            const double m = std::abs(s);
            if (m < aa) return (b2 + b4 * m * m) * m * m;
            return theta(m, al);
        };
        n.gprime = [b2, b4, aa, al](double s) {
            const double m = std::abs(s);
            const double sg = (s >= 0.0) ? 1.0 : -1.0;
            if (m < aa) return sg * (2.0 * b2 * m + 4.0 * b4 * m * m * m);
            return sg * theta_prime(m, al);
        };
        // inner gtilde simplifies to (b2 + b4 s^2) * s, odd and 0 at 0
        n.gtilde = [b2, b4, aa, al](double s) {
            const double m = std::abs(s);
            if (m < aa) return (b2 + b4 * s * s) * s;
            const double sg = (s >= 0.0) ? 1.0 : -1.0;
            return sg * theta(m, al) / m;
        };
    }
    n.lipschitz_K = lipschitz_scan(n.gtilde);
    return n;
}

Nonlinearity linear_g(double slope) {
    Nonlinearity n;
    n.kind = "linear";
    n.holder_s = 1.0;
    n.g = [slope](double s) { return slope * s; };
    n.gprime = [slope](double) { return slope; };
    n.gtilde = [slope](double) { return slope; };
    n.lipschitz_K = std::abs(slope);
    return n;
}

Nonlinearity zero_g() {
    Nonlinearity n;
    n.kind = "zero";
    n.holder_s = 1.0;
    n.g = [](double) { return 0.0; };
    n.gprime = [](double) { return 0.0; };
    n.gtilde = [](double) { return 0.0; };
    n.lipschitz_K = 0.0;
    return n;
}

Nonlinearity table_g(const std::vector<double>& s,
                     const std::vector<double>& gs) {
    if (s.size() != gs.size() || s.size() < 2)
        throw ConfigError("g table needs at least two (s, g) rows");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1]))
            throw ConfigError("g table abscissae must be strictly increasing");
    bool has_origin = false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == 0.0 && gs[i] == 0.0) has_origin = true;
    if (!has_origin)
        throw ConfigError("g table must contain the row '0 0'");

    auto xs = s;
    auto ys = gs;
    auto eval = [xs, ys](double v) {
        auto it = std::upper_bound(xs.begin(), xs.end(), v);
        std::size_t hi = std::clamp<std::size_t>(
            static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1);
        const std::size_t lo = hi - 1;
        const double t = (v - xs[lo]) / (xs[hi] - xs[lo]);
        return ys[lo] + t * (ys[hi] - ys[lo]);
    };
    auto slope = [xs, ys](double v) {
        auto it = std::upper_bound(xs.begin(), xs.end(), v);
        std::size_t hi = std::clamp<std::size_t>(
            static_cast<std::size_t>(it - xs.begin()), 1, xs.size() - 1);
        return (ys[hi] - ys[hi - 1]) / (xs[hi] - xs[hi - 1]);
    };

    Nonlinearity n;
    n.kind = "custom-table";
    n.holder_s = 1.0;
    n.g = eval;
    n.gprime = slope;
    n.gtilde = [eval, slope](double v) {
        if (std::abs(v) < 1e-12) return slope(std::abs(v) * 0.5 + 1e-13);
        return eval(v) / v;
    };
    n.lipschitz_K = lipschitz_scan(n.gtilde);
    return n;
}

double estimate_holder(const Nonlinearity& n, double s,
                       const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("estimate_holder: empty grid");
    if (!(s > 0.0 && s <= 1.0))
        throw ConfigError("estimate_holder: exponent must be in (0,1]");
    std::vector<double> gp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) gp[i] = n.gprime(grid[i]);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double d = std::abs(grid[i] - grid[j]);
            if (d == 0.0) continue;
            sup = std::max(sup, std::abs(gp[i] - gp[j]) / std::pow(d, s));
        }
    return sup;
}

} // namespace heatctl
