#include "heatctl/weights.hpp"

#include "heatctl/errors.hpp"

#include <limits>

namespace heatctl {

void validate(const WeightParams& p) {
    if (!(p.m_w > 1.0))
        throw ConfigError("weights.m must be > 1 (beta positivity), got " +
                          std::to_string(p.m_w));
    if (!(p.s_w > 0.0)) throw ConfigError("weights.s must be > 0");
    if (!(p.lam_w > 0.0)) throw ConfigError("weights.lam must be > 0");
    if (!(p.T > 0.0)) throw ConfigError("T must be > 0");
    if (!(0.0 < p.omega_a && p.omega_a < p.omega_b && p.omega_b < 1.0))
        throw ConfigError("omega must satisfy 0 < a1 < a2 < 1");
}

std::pair<double, double> eta0(double x, double omega_a, double omega_b) {
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("eta0: x outside [0,1]");
    const double xs = 0.5 * (omega_a + omega_b);
    if (x <= xs) {
        const double c = 1.0 / (xs * xs);
        return {x * (2.0 * xs - x) * c, 2.0 * (xs - x) * c};
    }
    const double c = 1.0 / ((1.0 - xs) * (1.0 - xs));
    return {(1.0 - x) * (x - 2.0 * xs + 1.0) * c, 2.0 * (xs - x) * c};
}

double eta0_second(double x, double omega_a, double omega_b) {
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("eta0_second: x outside [0,1]");
    const double xs = 0.5 * (omega_a + omega_b);
    const double den = (x < xs) ? xs * xs : (1.0 - xs) * (1.0 - xs);
    return -2.0 / den;
}

std::pair<double, double> ell(double t, double T) {
    if (t < 0.0 || t > T)
        throw std::domain_error("ell: t outside [0,T]");
    if (t < 0.25 * T) return {3.0 * T * T / 16.0, 0.0};
    return {t * (T - t), T - 2.0 * t};
}

BetaValues beta(double x, const WeightParams& p) {
    const auto [e, de] = eta0(x, p.omega_a, p.omega_b);
    const double d2e = eta0_second(x, p.omega_a, p.omega_b);
    const double lam = p.lam_w;
    // ||eta0||_inf = 1 by construction.
    const double inner = std::exp(lam * (p.m_w + e));
    BetaValues v;
    v.b = std::exp(2.0 * lam * p.m_w) - inner;
    v.db = -lam * de * inner;
    v.d2b = -lam * (d2e + lam * de * de) * inner;
    return v;
}

WeightBundle bundle(double x, double t, const WeightParams& p) {
    if (t < 0.0 || t > p.T)
        throw std::domain_error("bundle: t outside [0,T]");
    WeightBundle w;
    if (t == p.T) {
        w.log_rho = std::numeric_limits<double>::infinity();
        return w; // all decaying fields at their zero limit
    }
    const BetaValues bv = beta(x, p);
    const auto [lv, ldv] = ell(t, p.T);
    const double Tt = p.T - t;
    const double s = p.s_w;
    w.log_rho = s * bv.b / lv;
    w.w12 = std::sqrt(Tt);
    w.w32 = w.w12 * Tt;
    w.rho_inv = std::exp(-w.log_rho); // underflow to 0 near T is fine
    w.rho0_inv = std::exp(-w.log_rho - 1.5 * std::log(Tt));
    w.c_dt = -1.5 * w.w12 - w.w32 * s * bv.b * ldv / (lv * lv);
    w.c_dx = w.w32 * s * bv.db / lv;
    const double q = s * bv.db / lv;
    w.c_dxx = w.w32 * (s * bv.d2b / lv + q * q);
    return w;
}

double rho0_inv_at(double x, double t, const WeightParams& p) {
    if (t == p.T) return 0.0;
    const BetaValues bv = beta(x, p);
    const double lv = ell(t, p.T).first;
    return std::exp(-p.s_w * bv.b / lv - 1.5 * std::log(p.T - t));
}

} // namespace heatctl
