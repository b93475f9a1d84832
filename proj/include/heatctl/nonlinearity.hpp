#pragma once

#include <functional>
#include <string>
#include <vector>

namespace heatctl {

// Reaction term g with its derived quantities. g(0) = 0 and g' bounded are
// assumed throughout; gtilde is the quotient g(s)/s extended continuously
// by its one-sided limit at 0, which keeps every weighted residual
// evaluation free of 0/0.
struct Nonlinearity {
    std::function<double(double)> g;
    std::function<double(double)> gprime;
    std::function<double(double)> gtilde;
    double lipschitz_K = 0.0; // |g(s)| <= K |s| on the probed range
    double holder_s = 1.0;    // Hoelder exponent of g' (class W_s)
    std::string kind = "zero";
};

// Benchmark nonlinearity: even, equal to -|s|^alpha log^{3/2}(1+|s|) for
// |s| >= a and to the matched polynomial c1|s| + c2 s^2 inside. The C1
// match at |s| = a fixes (c1, c2). g' keeps a sign jump 2*c1 at s = 0;
// smooth_inner replaces the inner branch by the even quartic
// b2 s^2 + b4 s^4 (same C1 match), removing the jump.
struct PaperG {
    double a = 0.1;
    double alpha = 0.95;
    bool smooth_inner = false;
    double c1_coef = 0.0, c2_coef = 0.0; // kinked branch
    double b2_coef = 0.0, b4_coef = 0.0; // smooth branch
};

PaperG solve_paper_g_coefficients(double a, double alpha, bool smooth_inner);

// Throws ConfigError unless 0 < a < 1 and 0 < alpha < 1.
Nonlinearity paper_g(double a = 0.1, double alpha = 0.95,
                     bool smooth_inner = false);

Nonlinearity linear_g(double slope);
Nonlinearity zero_g();

// Piecewise-linear interpolant of (s, g) samples; the table must contain
// s = 0 with g = 0 and strictly increasing abscissae. Constant-slope
// extension outside the table range.
Nonlinearity table_g(const std::vector<double>& s,
                     const std::vector<double>& gs);

// sup over all sampled pairs of |g'(a)-g'(b)| / |a-b|^s.
double estimate_holder(const Nonlinearity& n, double s,
                       const std::vector<double>& grid);

} // namespace heatctl
