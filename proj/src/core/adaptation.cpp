#include "core/adaptation.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace incadapt {

double gain_from_tau(double gamma_prime, double tau) {
    if (!(gamma_prime > 0.0) || !(tau > 0.0))
        throw ConfigError("gain_from_tau requires gamma' > 0 and tau > 0");
    return gamma_prime / tau;
}

double resolve_gain(const AdaptationConfig& cfg) {
    if (cfg.gamma.has_value() == cfg.gamma_prime.has_value())
        throw ConfigError("exactly one of gamma and gamma_prime must be set");
    if (cfg.gamma) {
        if (!(*cfg.gamma > 0.0)) throw ConfigError("gamma must be positive");
        return *cfg.gamma;
    }
    if (!(*cfg.gamma_prime > 0.0)) throw ConfigError("gamma_prime must be positive");
    return cfg.law == Law::integral ? gain_from_tau(*cfg.gamma_prime, cfg.tau) : *cfg.gamma_prime;
}

Vec adaptation_increment(int b_sign, double gamma, const Vec& phi, double err) {
    return scaled(phi, static_cast<double>(b_sign) * gamma * err);
}

Vec integral_law_derivative(int b_sign, double gamma, const Vec& phi, double err) {
    return adaptation_increment(b_sign, gamma, phi, err);
}

Vec incremental_update(const EstimateHistory& h, double t, int b_sign, double gamma,
                       const Vec& phi, double err, EstimateHistory::Side side) {
    return axpy(h.query(t - h.tau(), side), static_cast<double>(b_sign) * gamma * err, phi);
}

Vec forward_incremental_update(const EstimateHistory& h, double t, int b_sign, double gamma,
                               const Vec& phi, double err) {
    return axpy(h.query(t), static_cast<double>(b_sign) * gamma * err, phi);
}

Vec saturate(const Vec& v, const Vec& lo, const Vec& hi) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::clamp(v[i], lo[i], hi[i]);
    return out;
}

SaturatedUpdate saturated_incremental_update(const EstimateHistory& h, double t, int b_sign,
                                             double gamma, const Vec& phi, double err,
                                             const Vec& lo, const Vec& hi,
                                             EstimateHistory::Side side) {
    const Vec clamped_prev = saturate(h.query(t - h.tau(), side), lo, hi);
    SaturatedUpdate out;
    out.theta_star = axpy(clamped_prev, static_cast<double>(b_sign) * gamma * err, phi);
    out.theta_hat = saturate(out.theta_star, lo, hi);
    return out;
}

Vec robust_incremental_update(const EstimateHistory& h, double t, int b_sign, double gamma,
                              const Vec& phi, double e_eps, int sigma_eps,
                              EstimateHistory::Side side) {
    if (e_eps < 0.0) throw ConfigError("robust update requires e_eps >= 0");
    if (sigma_eps == 0 && e_eps != 0.0)
        throw ConfigError("robust update requires e_eps = 0 inside the dead zone");
    return axpy(h.query(t - h.tau(), side),
                static_cast<double>(b_sign) * gamma * e_eps * static_cast<double>(sigma_eps), phi);
}

}  // namespace incadapt
