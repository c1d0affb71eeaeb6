#pragma once

#include <span>

#include "core/scenario.hpp"

namespace incadapt {

/// Full-resolution closed-loop trajectory, one entry per integrator grid
/// point. Vector-valued columns are stored flat (row-major).
struct Trace {
    int n = 1;  ///< plant order
    int p = 1;  ///< estimate dimension
    double h = 0.0;
    double tau = 0.0;

    std::vector<double> t;
    std::vector<double> x;   // size() * n
    std::vector<double> yd;  // desired output
    std::vector<double> e;   // size() * n
    std::vector<double> ef;
    std::vector<double> eps, iota, sigma, e_eps;
    std::vector<double> u;
    std::vector<double> w;
    std::vector<double> th;  // size() * p, control-visible estimate
    std::vector<double> err;         // the error signal the law acts on
    std::vector<double> V;           // 1/2 err^2
    std::vector<double> phi_norm_sq; // squared norm of the adaptation regressor

    std::size_t size() const { return t.size(); }
    std::span<const double> x_row(std::size_t i) const {
        return {x.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
    std::span<const double> e_row(std::size_t i) const {
        return {e.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
    std::span<const double> th_row(std::size_t i) const {
        return {th.data() + i * static_cast<std::size_t>(p), static_cast<std::size_t>(p)};
    }
};

/// Runs the closed loop described by a validated scenario. Deterministic for
/// a fixed config; throws NumericFault naming the first non-finite quantity.
Trace simulate(const ScenarioConfig& cfg);

/// Advances one step from (t, state); exposed for step-level tests.
/// `state` is the plant state, extended by the estimate for the integral law.
class ClosedLoop {
public:
    explicit ClosedLoop(const ScenarioConfig& cfg);

    /// Signals evaluated at one time/state pair.
    struct Signals {
        Vec e;
        double ef = 0.0;
        double err = 0.0;
        DeadZoneState dz;
        Vec phi;
        Vec theta_hat;
        double u = 0.0;
        double w = 0.0;
        Vec yd;  // n + 1 reference derivatives
    };

    /// State layout: plant state (n entries), plus p estimate entries for the
    /// integral law.
    std::size_t state_dim() const;
    Vec initial_ode_state() const;

    /// `side` selects the one-sided value of the delayed estimate at
    /// recursion breakpoints; the right endpoint stage of a step reads the
    /// left limit so each step integrates a smooth piece.
    Signals eval(double t, std::span<const double> state,
                 EstimateHistory::Side side = EstimateHistory::Side::right) const;
    Vec derivative(double t, std::span<const double> state,
                   EstimateHistory::Side side = EstimateHistory::Side::right) const;
    Vec step(double t, const Vec& state) const;

    /// Grid-point bookkeeping: computes the control-visible estimate at t from
    /// the accepted state, appends to the history, and returns the signals.
    Signals accept(double t, std::span<const double> state);

    const ScenarioConfig& config() const { return cfg_; }
    double gamma() const { return gamma_; }

private:
    Vec eval_phi(double t, std::span<const double> x, std::span<const double> yd,
                 std::span<const double> e) const;
    Vec stage_estimate(double t, const Vec& phi, double err, const DeadZoneState& dz,
                       std::span<const double> state, EstimateHistory::Side side) const;

    ScenarioConfig cfg_;
    Regressor regressor_;  // bound copy, scalar plants
    std::vector<Nonlinearity> nonlins_;
    double gamma_;
    double wbar_b_;
    int b_sign_;
    int n_;
    std::size_t p_;
    EstimateHistory history_;
};

}  // namespace incadapt
