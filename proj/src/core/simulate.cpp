#include "core/simulate.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace incadapt {

ClosedLoop::ClosedLoop(const ScenarioConfig& cfg)
    : cfg_(cfg),
      gamma_(cfg.resolved_gamma()),
      wbar_b_(cfg.resolved_wbar_b()),
      b_sign_(cfg.b_sign()),
      n_(cfg.n()),
      p_(cfg.estimate_dim()),
      history_(cfg.adaptation.theta_hat0, cfg.adaptation.tau, cfg.integrator.h) {
    if (cfg_.plant_kind == PlantKind::scalar) {
        regressor_ = find_regressor(cfg_.scalar.regressor);
    } else {
        for (const std::string& name : cfg_.siso.nonlinearities)
            nonlins_.push_back(find_nonlinearity(name));
    }
    if (cfg_.disturbance.hold == 0.0) cfg_.disturbance.hold = cfg_.integrator.h;
}

std::size_t ClosedLoop::state_dim() const {
    return static_cast<std::size_t>(n_) + (cfg_.adaptation.law == Law::integral ? p_ : 0);
}

Vec ClosedLoop::initial_ode_state() const {
    Vec y = cfg_.initial_state();
    if (cfg_.adaptation.law == Law::integral)
        y.insert(y.end(), cfg_.adaptation.theta_hat0.begin(), cfg_.adaptation.theta_hat0.end());
    return y;
}

Vec ClosedLoop::eval_phi(double t, std::span<const double> x, std::span<const double> yd,
                         std::span<const double> e) const {
    Vec phi(p_);
    if (cfg_.plant_kind == PlantKind::scalar) {
        regressor_.eval(t, x, std::span<double>(phi.data(), regressor_.dim));
        if (cfg_.augmented()) phi[p_ - 1] = -yd[1];  // reference-rate entry
    } else {
        for (std::size_t i = 0; i < nonlins_.size(); ++i) phi[i] = -nonlins_[i].eval(t, x);
        phi[p_ - 1] = nu_term(e, cfg_.siso.lambda, yd[static_cast<std::size_t>(n_)]);
    }
    return phi;
}

Vec ClosedLoop::stage_estimate(double t, const Vec& phi, double err, const DeadZoneState& dz,
                               std::span<const double> state,
                               EstimateHistory::Side side) const {
    switch (cfg_.adaptation.law) {
        case Law::integral:
            return Vec(state.begin() + n_, state.end());
        case Law::incremental:
            return incremental_update(history_, t, b_sign_, gamma_, phi, err, side);
        case Law::forward_incremental:
            return history_.query(t, side);
        case Law::saturated_incremental:
            return saturated_incremental_update(history_, t, b_sign_, gamma_, phi, err,
                                                cfg_.adaptation.sat_lo, cfg_.adaptation.sat_hi, side)
                .theta_hat;
        case Law::robust_incremental:
            return robust_incremental_update(history_, t, b_sign_, gamma_, phi, dz.e_eps, dz.sigma,
                                             side);
    }
    throw ConfigError("unhandled adaptation law");
}

ClosedLoop::Signals ClosedLoop::eval(double t, std::span<const double> state,
                                     EstimateHistory::Side side) const {
    Signals s;
    const std::span<const double> x = state.first(static_cast<std::size_t>(n_));
    s.yd.resize(static_cast<std::size_t>(n_) + 1);
    cfg_.reference.eval(t, s.yd);

    s.e.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) s.e[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - s.yd[static_cast<std::size_t>(i)];
    s.ef = filtered_error(s.e, cfg_.plant_kind == PlantKind::siso ? cfg_.siso.lambda : 1.0);

    const bool robust = cfg_.adaptation.law == Law::robust_incremental;
    s.dz = dead_zone(s.ef, robust ? cfg_.adaptation.epsilon : 0.0);
    s.err = robust ? s.dz.e_eps * static_cast<double>(s.dz.sigma) : s.ef;

    s.phi = eval_phi(t, x, s.yd, s.e);
    s.theta_hat = stage_estimate(t, s.phi, s.err, s.dz, state, side);

    switch (cfg_.controller) {
        case Controller::integral_ce:
        case Controller::incremental_ce:
            s.u = certainty_equiv_control(b_sign_, cfg_.kappa, s.err, s.theta_hat, s.phi);
            break;
        case Controller::open_loop_aug:
            s.u = open_loop_aug_control(b_sign_, cfg_.kappa, gamma_, s.err, s.theta_hat, s.phi);
            break;
        case Controller::robust_dead_zone:
            s.u = robust_control(b_sign_, cfg_.kappa, wbar_b_, s.dz, s.theta_hat, s.phi,
                                 cfg_.strict_printed_form);
            break;
    }
    s.w = disturbance_sample(cfg_.disturbance, t);
    return s;
}

Vec ClosedLoop::derivative(double t, std::span<const double> state,
                           EstimateHistory::Side side) const {
    const Signals s = eval(t, state, side);
    Vec dy(state.size());
    if (cfg_.plant_kind == PlantKind::scalar) {
        dy[0] = scalar_dynamics(cfg_.scalar, t, state[0], s.u) + s.w;
    } else {
        const Vec dx = siso_dynamics(cfg_.siso, t, state.first(static_cast<std::size_t>(n_)), s.u, s.w);
        std::copy(dx.begin(), dx.end(), dy.begin());
    }
    if (cfg_.adaptation.law == Law::integral) {
        const Vec dtheta = integral_law_derivative(b_sign_, gamma_, s.phi, s.err);
        std::copy(dtheta.begin(), dtheta.end(), dy.begin() + n_);
    }
    return dy;
}

Vec ClosedLoop::step(double t, const Vec& y) const {
    const double h = cfg_.integrator.h;
    if (cfg_.integrator.method == Method::euler) {
        return axpy(y, h, derivative(t, y));
    }
    const Vec k1 = derivative(t, y);
    const Vec k2 = derivative(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const Vec k3 = derivative(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    // right-endpoint stage: read the left limit of the delayed estimate
    const Vec k4 = derivative(t + h, axpy(y, h, k3), EstimateHistory::Side::left);
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

ClosedLoop::Signals ClosedLoop::accept(double t, std::span<const double> state) {
    Signals s = eval(t, state);
    switch (cfg_.adaptation.law) {
        case Law::integral:
            break;  // estimate lives in the ODE state
        case Law::incremental:
        case Law::robust_incremental:
            history_.append(t, s.theta_hat);
            break;
        case Law::saturated_incremental:
            history_.append(t, saturated_incremental_update(history_, t, b_sign_, gamma_, s.phi,
                                                            s.err, cfg_.adaptation.sat_lo,
                                                            cfg_.adaptation.sat_hi)
                                   .theta_star);
            break;
        case Law::forward_incremental:
            history_.append(t + history_.tau(),
                            forward_incremental_update(history_, t, b_sign_, gamma_, s.phi, s.err));
            break;
    }
    return s;
}

namespace {

const char* first_bad(const ClosedLoop::Signals& s, std::span<const double> state) {
    if (!all_finite(state)) return "state";
    if (!all_finite(s.e)) return "e";
    if (!std::isfinite(s.ef)) return "ef";
    if (!all_finite(s.phi)) return "phi";
    if (!all_finite(s.theta_hat)) return "theta_hat";
    if (!std::isfinite(s.u)) return "u";
    if (!std::isfinite(s.w)) return "w";
    return nullptr;
}

void record(Trace& tr, double t, const ClosedLoop::Signals& s, std::span<const double> state,
            int n, std::size_t p, bool robust) {
    if (const char* bad = first_bad(s, state))
        throw NumericFault("non-finite " + std::string(bad) + " at t=" + std::to_string(t));
    tr.t.push_back(t);
    for (int i = 0; i < n; ++i) tr.x.push_back(state[static_cast<std::size_t>(i)]);
    tr.yd.push_back(s.yd[0]);
    for (int i = 0; i < n; ++i) tr.e.push_back(s.e[static_cast<std::size_t>(i)]);
    tr.ef.push_back(s.ef);
    tr.eps.push_back(s.dz.epsilon);
    tr.iota.push_back(static_cast<double>(s.dz.iota));
    tr.sigma.push_back(static_cast<double>(s.dz.sigma));
    tr.e_eps.push_back(s.dz.e_eps);
    tr.u.push_back(s.u);
    tr.w.push_back(s.w);
    for (std::size_t i = 0; i < p; ++i) tr.th.push_back(s.theta_hat[i]);
    // s.err is e_eps * sigma for the robust law, so V = err^2/2 covers both
    tr.err.push_back(robust ? s.dz.e_eps : s.err);
    tr.V.push_back(0.5 * s.err * s.err);
    tr.phi_norm_sq.push_back(norm2_sq(s.phi));
}

}  // namespace

Trace simulate(const ScenarioConfig& cfg) {
    validate_config(cfg);
    ClosedLoop loop(cfg);

    Trace tr;
    tr.n = cfg.n();
    tr.p = static_cast<int>(cfg.estimate_dim());
    tr.h = cfg.integrator.h;
    tr.tau = cfg.adaptation.tau;

    const double h = cfg.integrator.h;
    const auto steps = static_cast<long long>(std::llround(cfg.integrator.t_final / h));
    const bool robust = cfg.adaptation.law == Law::robust_incremental;
    tr.t.reserve(static_cast<std::size_t>(steps) + 1);

    Vec y = loop.initial_ode_state();
    double t = 0.0;
    ClosedLoop::Signals s = loop.accept(t, y);
    record(tr, t, s, std::span<const double>(y.data(), y.size()), tr.n,
           static_cast<std::size_t>(tr.p), robust);

    for (long long k = 0; k < steps; ++k) {
        y = loop.step(t, y);
        t = static_cast<double>(k + 1) * h;
        s = loop.accept(t, y);
        record(tr, t, s, std::span<const double>(y.data(), y.size()), tr.n,
               static_cast<std::size_t>(tr.p), robust);
    }
    return tr;
}

}  // namespace incadapt
