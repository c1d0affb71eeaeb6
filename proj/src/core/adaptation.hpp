#pragma once

#include <optional>

#include "core/history.hpp"
#include "core/vec.hpp"

namespace incadapt {

enum class Law {
    integral,               ///< estimate evolves as an ODE state
    incremental,            ///< tau-shifted algebraic recursion
    forward_incremental,    ///< recursion writes the estimate one tau ahead
    saturated_incremental,  ///< recursion clamped to a box at read and output
    robust_incremental,     ///< dead-zone gated recursion
};

struct AdaptationConfig {
    Law law = Law::incremental;
    std::optional<double> gamma;        ///< adaptation gain, exclusive with gamma_prime
    std::optional<double> gamma_prime;  ///< tau-invariant gain knob
    double kappa = 1.0;                 ///< feedback gain (kept with the law's design parameters)
    double tau = 0.1;
    double epsilon = 0.0;               ///< dead-zone width, robust law only
    Vec theta_hat0;                     ///< initial estimate (defaults to zeros)
    Vec sat_lo, sat_hi;                 ///< saturation box, saturated law only
};

/// Known-true parameters in controller coordinates (theta0/b, or [a/b, 1/b]);
/// diagnostic only, the laws never see it.
struct TrueParameters {
    Vec theta;
    double b = 1.0;
};

/// gamma'/tau: the integral-law gain whose accumulated update over one tau
/// matches an incremental update of size gamma'.
double gain_from_tau(double gamma_prime, double tau);

/// The gain a law actually runs with, resolved from gamma or gamma_prime.
/// The integral law scales gamma'/tau; incremental-family laws use gamma'
/// directly (their gain is already the per-tau increment).
double resolve_gain(const AdaptationConfig& cfg);

/// Direction of adaptation: the update term is +sgn(b)*gamma*phi*err, which
/// makes the estimate-error cross terms in the functional derivative cancel.
Vec adaptation_increment(int b_sign, double gamma, const Vec& phi, double err);

/// Right-hand side of the integral law: d/dt theta_hat.
Vec integral_law_derivative(int b_sign, double gamma, const Vec& phi, double err);

/// theta_hat(t) = theta_hat(t - tau) + sgn(b) gamma phi err.
/// The caller appends the result to the history at grid points only.
Vec incremental_update(const EstimateHistory& h, double t, int b_sign, double gamma,
                       const Vec& phi, double err,
                       EstimateHistory::Side side = EstimateHistory::Side::right);

/// Computes theta_hat(t + tau) = theta_hat(t) + sgn(b) gamma phi err; the
/// control-visible estimate at time t is h.query(t) (the initial setting on
/// [0, tau)). The caller stores the result at time t + tau.
Vec forward_incremental_update(const EstimateHistory& h, double t, int b_sign, double gamma,
                               const Vec& phi, double err);

/// Componentwise clamp of v into [lo, hi].
Vec saturate(const Vec& v, const Vec& lo, const Vec& hi);

struct SaturatedUpdate {
    Vec theta_star;  ///< unsaturated recursion variable (what the history stores)
    Vec theta_hat;   ///< sat(theta_star), always inside the box
};

/// theta_star(t) = sat(theta_star(t - tau)) + sgn(b) gamma phi err;
/// theta_hat(t) = sat(theta_star(t)). The history holds theta_star.
SaturatedUpdate saturated_incremental_update(const EstimateHistory& h, double t, int b_sign,
                                             double gamma, const Vec& phi, double err,
                                             const Vec& lo, const Vec& hi,
                                             EstimateHistory::Side side = EstimateHistory::Side::right);

/// Dead-zone gated recursion: theta_hat(t) = theta_hat(t - tau) +
/// sgn(b) gamma phi e_eps sigma_eps; frozen whenever sigma_eps = 0.
Vec robust_incremental_update(const EstimateHistory& h, double t, int b_sign, double gamma,
                              const Vec& phi, double e_eps, int sigma_eps,
                              EstimateHistory::Side side = EstimateHistory::Side::right);

}  // namespace incadapt
