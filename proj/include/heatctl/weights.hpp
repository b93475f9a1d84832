#pragma once

#include <cmath>
#include <utility>

namespace heatctl {

// Parameters of the parabolic weight family
//   rho(x,t)   = exp(s * beta(x) / ell(t)),
//   rho0       = (T-t)^{3/2} rho,
//   rho1       = (T-t)     rho,
//   rho2       = (T-t)^{1/2} rho,
// with beta(x) = exp(2*lam*m) - exp(lam*(m + eta0(x))) built from a C1 bump
// eta0 over (0,1) that peaks inside the control interval omega.
struct WeightParams {
    double s_w = 6e-4;   // exponent scale s
    double lam_w = 1.0;  // exponent lambda inside beta
    double m_w = 1.1;    // amplification m, must be > 1
    double T = 0.5;      // time horizon
    double omega_a = 0.1;
    double omega_b = 0.3;
};

// Throws ConfigError when the parameters violate m>1, s>0, T>0 or
// 0 < a1 < a2 < 1.
void validate(const WeightParams& p);

// All weight values and operator-coefficient ratios at one point, in
// overflow-safe form: only decaying exponentials are stored. The raw rho0
// (needed for the t=0 load only) is recovered on demand from log_rho.
struct WeightBundle {
    double rho_inv = 0;   // rho^{-1}
    double rho0_inv = 0;  // rho0^{-1}
    double w32 = 0;       // (T-t)^{3/2} = rho0/rho
    double w12 = 0;       // (T-t)^{1/2} = rho2/rho
    double c_dt = 0;      // rho^{-1} d/dt rho0
    double c_dx = 0;      // rho^{-1} d/dx rho0
    double c_dxx = 0;     // rho^{-1} d2/dx2 rho0
    double log_rho = 0;   // s*beta/ell, finite for t < T

    // May overflow close to t = T; callers use it only at t = 0.
    double rho0() const { return std::exp(log_rho) * w32; }
};

// C1 bump: two parabolas matched at x* = (a+b)/2, max value 1, zero on the
// boundary, derivative nonzero away from x*. Returns {value, derivative}.
std::pair<double, double> eta0(double x, double omega_a, double omega_b);

// Second derivative of eta0 (piecewise constant, right-continuous at x*).
double eta0_second(double x, double omega_a, double omega_b);

// ell(t) = t(T-t) for t >= T/4, 3T^2/16 below. Returns {value, derivative};
// the kink at T/4 uses the right branch.
std::pair<double, double> ell(double t, double T);

// beta and derivatives at x. Returns {beta, beta', beta''}.
struct BetaValues {
    double b, db, d2b;
};
BetaValues beta(double x, const WeightParams& p);

// Evaluates the bundle at (x,t) in [0,1]x[0,T]. At t = T all decaying
// fields are the zero limit. Throws std::domain_error outside the domain.
WeightBundle bundle(double x, double t, const WeightParams& p);

// rho0^{-1}(x,t), safe for all t in [0,T] (0 at t = T).
double rho0_inv_at(double x, double t, const WeightParams& p);

} // namespace heatctl
