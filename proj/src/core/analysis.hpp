#pragma once

#include <string>
#include <vector>

#include "core/scenario.hpp"
#include "core/simulate.hpp"

namespace incadapt {

/// V = (1/2) x^2 of the error signal the active law drives to zero.
inline double lyapunov_V(double e) { return 0.5 * e * e; }

/// Trapezoid integral of uniformly sampled values.
double trapezoid(std::span<const double> v, double h);

/// L = V + |b|/(2 gamma) * integral of the squared estimate error over one
/// tau window; the window must span exactly tau on the grid (m+1 samples).
double krasovskii_L(double V, std::span<const double> theta_err_norm_sq, double h, double b,
                    double gamma);

/// Trapezoid integral over [t - tau, t] of a series sampled from t0 = 0.
/// Both endpoints must lie on the grid and inside the series.
double window_integral(std::span<const double> v, double h, double tau, double t);

/// W(t_i) = integral over [max(0, t_i - tau), t_i]; the first m entries carry
/// truncated windows. `pre` extends the integrand as a constant before t = 0.
std::vector<double> windowed_series(std::span<const double> v, double h, double tau);
std::vector<double> windowed_series_padded(std::span<const double> v, double h, double tau,
                                           double pre);

struct BarbalatOptions {
    double tau = 1.0;
    double tol_window = 1e-4;  ///< bound on the final g window
    double tol_g = 1e-2;       ///< bound on the tail sup of g
    double growth_factor = 2.0;
    std::optional<double> bound_M;  ///< fixed energy bound; growth test otherwise
};

/// Windowed-integral convergence monitor for a nonnegative sampled function.
/// (a) derivative-energy windows bounded, (b) g windows decay, (c) tail of g
/// small; the verdict is consistent unless (a) and (b) hold while (c) fails.
struct BarbalatVerdict {
    bool energy_bounded = false;   // (a)
    bool window_decays = false;    // (b)
    bool tail_small = false;       // (c)
    bool consistent = true;        // (a) and (b) imply (c) on this sample
    double sup_window_gdot_sq = 0.0;
    double early_energy = 0.0;  // growth test: sup over the first span
    double late_energy = 0.0;   // growth test: sup over the last span
    double final_window_g = 0.0;
    double tail_sup_g = 0.0;
    std::string label;  // "LEMMA_CONSISTENT" or "LEMMA_INCONSISTENT"
};

BarbalatVerdict barbalat_monitor(std::span<const double> g, double h, const BarbalatOptions& opt);

/// One named pass/fail line of a report.
struct MonitorCheck {
    std::string name;
    bool pass = true;
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

/// Everything the convergence proofs track, evaluated on one trajectory.
struct MonitorReport {
    std::vector<double> window_V;
    std::vector<double> window_theta_energy;
    std::vector<double> window_u_energy;
    std::vector<double> window_vdot_energy;  // complete windows only, offset tau
    std::vector<double> L;                   // law-appropriate functional

    double sup_abs_err = 0.0;
    double sup_x_norm = 0.0;
    double final_abs_err = 0.0;
    double settling_time = -1.0;  // -1: never settles
    double final_window_V = 0.0;
    double sup_window_theta = 0.0;
    double sup_window_u = 0.0;
    double sup_abs_vdot = 0.0;
    double L_margin_whole = 0.0;  // max forward difference on the tau grid, offset 0
    double L_margin_half = 0.0;   // offset tau/2
    double final_e1 = 0.0;
    double final_abs_ef = 0.0;

    BarbalatVerdict barbalat;
    std::vector<MonitorCheck> checks;
    bool passed = true;  // all enabled checks
};

/// Runs every enabled monitor over a completed trajectory.
MonitorReport analyze(const ScenarioConfig& cfg, const Trace& tr);

/// Sup of the normalized residual of the auxiliary-input cancellation
/// identity b*u1*e + |b|/(2 gamma) * |theta_hat(t+tau) - theta_hat(t)|^2,
/// scaled by (1 + |phi|^2 e^2); forward-law trajectories only.
double cancellation_residual_sup(const ScenarioConfig& cfg, const Trace& tr);

struct Divergence {
    double state_sup = 0.0, state_l2 = 0.0;
    double err_sup = 0.0, err_l2 = 0.0;
    double estimate_sup = 0.0, estimate_l2 = 0.0;
};

/// Sup-norm and L2 distances between two runs on identical grids.
Divergence compare_runs(const Trace& a, const Trace& b);

/// Sampled verification families for the windowed-convergence monitor.
std::vector<double> family_exponential(double h, double t_final);        // e^-t
std::vector<double> family_rational_decay(double h, double t_final);     // (1+t)^-2
std::vector<double> family_bump_train(double h, double t_final);         // width 2^-k at t=k

}  // namespace incadapt
