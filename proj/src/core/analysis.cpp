#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace incadapt {

double trapezoid(std::span<const double> v, double h) {
    if (v.size() < 2) return 0.0;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    return s * h;
}

double krasovskii_L(double V, std::span<const double> theta_err_norm_sq, double h, double b,
                    double gamma) {
    if (theta_err_norm_sq.size() < 2)
        throw ConfigError("krasovskii_L needs a full tau window of samples");
    return V + std::abs(b) / (2.0 * gamma) * trapezoid(theta_err_norm_sq, h);
}

namespace {

long long grid_index(double t, double h, const char* what) {
    const double r = t / h;
    const double rounded = std::round(r);
    if (std::abs(r - rounded) > 1e-6 * std::max(1.0, std::abs(r)))
        throw ConfigError(std::string(what) + " does not lie on the sampling grid");
    return static_cast<long long>(rounded);
}

// prefix trapezoid sums: P[i] = integral of v over [0, t_i]
std::vector<double> prefix_trapezoid(std::span<const double> v, double h) {
    std::vector<double> P(v.size(), 0.0);
    for (std::size_t i = 1; i < v.size(); ++i) P[i] = P[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    return P;
}

}  // namespace

double window_integral(std::span<const double> v, double h, double tau, double t) {
    const long long i1 = grid_index(t, h, "window end");
    const long long m = grid_index(tau, h, "tau");
    const long long i0 = i1 - m;
    if (i0 < 0 || i1 >= static_cast<long long>(v.size()))
        throw ConfigError("window [t-tau, t] is not covered by the series");
    return trapezoid(v.subspan(static_cast<std::size_t>(i0), static_cast<std::size_t>(m) + 1), h);
}

std::vector<double> windowed_series(std::span<const double> v, double h, double tau) {
    const auto m = static_cast<std::size_t>(grid_index(tau, h, "tau"));
    const std::vector<double> P = prefix_trapezoid(v, h);
    std::vector<double> W(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) W[i] = i >= m ? P[i] - P[i - m] : P[i];
    return W;
}

std::vector<double> windowed_series_padded(std::span<const double> v, double h, double tau,
                                           double pre) {
    const auto m = static_cast<std::size_t>(grid_index(tau, h, "tau"));
    const std::vector<double> P = prefix_trapezoid(v, h);
    std::vector<double> W(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        // [t_i - tau, 0) carries the constant pre-history integrand
        W[i] = i >= m ? P[i] - P[i - m] : P[i] + pre * static_cast<double>(m - i) * h;
    }
    return W;
}

BarbalatVerdict barbalat_monitor(std::span<const double> g, double h, const BarbalatOptions& opt) {
    for (double v : g)
        if (v < 0.0) throw ConfigError("the monitored function must be nonnegative");
    const auto m = static_cast<std::size_t>(grid_index(opt.tau, h, "tau"));
    if (g.size() < 2 * m + 2) throw ConfigError("series too short for the window monitor");

    BarbalatVerdict out;

    // (a) windowed energy of the finite-difference derivative
    std::vector<double> gd(g.size(), 0.0);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) gd[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    gd[0] = (g[1] - g[0]) / h;
    gd.back() = (g[g.size() - 1] - g[g.size() - 2]) / h;
    for (double& v : gd) v *= v;
    const std::vector<double> We = windowed_series(gd, h, opt.tau);
    double sup_energy = 0.0, early = 0.0, late = 0.0;
    const std::size_t span = std::min(g.size() - 1 - m, 2 * m);  // 2 tau of windows each side
    for (std::size_t i = m; i < g.size(); ++i) {
        sup_energy = std::max(sup_energy, We[i]);
        if (i <= m + span) early = std::max(early, We[i]);
        if (i + span >= g.size() - 1) late = std::max(late, We[i]);
    }
    out.sup_window_gdot_sq = sup_energy;
    out.early_energy = early;
    out.late_energy = late;
    out.energy_bounded = opt.bound_M ? sup_energy <= *opt.bound_M
                                     : late <= opt.growth_factor * early + 1e-12;

    // (b) the g windows decay
    const std::vector<double> Wg = windowed_series(g, h, opt.tau);
    out.final_window_g = Wg.back();
    out.window_decays = out.final_window_g <= opt.tol_window;

    // (c) the tail of g is small
    double tail = 0.0;
    for (std::size_t i = g.size() - 1 - m; i < g.size(); ++i) tail = std::max(tail, g[i]);
    out.tail_sup_g = tail;
    out.tail_small = tail <= opt.tol_g;

    out.consistent = !(out.energy_bounded && out.window_decays) || out.tail_small;
    out.label = out.consistent ? "LEMMA_CONSISTENT" : "LEMMA_INCONSISTENT";
    return out;
}

namespace {

std::vector<double> theta_err_norm_sq_series(const ScenarioConfig& cfg, const Trace& tr) {
    const Vec truth = cfg.true_parameters().theta;
    std::vector<double> out(tr.size(), 0.0);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto th = tr.th_row(i);
        double s = 0.0;
        for (std::size_t c = 0; c < th.size(); ++c) {
            const double d = th[c] - truth[c];
            s += d * d;
        }
        out[i] = s;
    }
    return out;
}

double tau_grid_margin(const std::vector<double>& L, std::size_t m, std::size_t offset,
                       std::size_t limit) {
    double margin = -1e300;
    double prev = 0.0;
    bool first = true;
    for (std::size_t i = offset; i < limit; i += m) {
        if (!first) margin = std::max(margin, L[i] - prev);
        prev = L[i];
        first = false;
    }
    return first ? 0.0 : margin;
}

}  // namespace

MonitorReport analyze(const ScenarioConfig& cfg, const Trace& tr) {
    MonitorReport rep;
    const double h = tr.h;
    const double tau = tr.tau;
    const auto m = static_cast<std::size_t>(grid_index(tau, h, "tau"));
    const std::size_t N = tr.size();
    const bool robust = cfg.adaptation.law == Law::robust_incremental;
    const bool forward = cfg.adaptation.law == Law::forward_incremental;
    const double gamma = cfg.resolved_gamma();
    const double absb = std::abs(cfg.b());

    // windowed series (truncated windows before t = tau)
    std::vector<double> th_nsq(N, 0.0), u_sq(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        th_nsq[i] = norm2_sq(tr.th_row(i));
        u_sq[i] = tr.u[i] * tr.u[i];
    }
    rep.window_V = windowed_series(tr.V, h, tau);
    rep.window_theta_energy = windowed_series(th_nsq, h, tau);
    rep.window_u_energy = windowed_series(u_sq, h, tau);

    // Lyapunov(-Krasovskii) series: pointwise squared estimate error for the
    // integral law, a tau window of it for the delayed recursions (ahead of t
    // for the forward law)
    {
        const std::vector<double> te = theta_err_norm_sq_series(cfg, tr);
        const double scale = absb / (2.0 * gamma);
        if (cfg.adaptation.law == Law::integral) {
            rep.L.assign(N, 0.0);
            for (std::size_t i = 0; i < N; ++i) rep.L[i] = tr.V[i] + scale * te[i];
        } else if (forward) {
            const std::vector<double> P = prefix_trapezoid(te, h);
            rep.L.assign(N, 0.0);
            for (std::size_t i = 0; i < N; ++i) {
                const std::size_t j = std::min(i + m, N - 1);
                rep.L[i] = tr.V[i] + scale * (P[j] - P[i]);
            }
        } else {
            double pre = 0.0;
            {
                const Vec truth = cfg.true_parameters().theta;
                for (std::size_t c = 0; c < truth.size(); ++c) {
                    const double d = cfg.adaptation.theta_hat0[c] - truth[c];
                    pre += d * d;
                }
            }
            const std::vector<double> W = windowed_series_padded(te, h, tau, pre);
            rep.L.assign(N, 0.0);
            for (std::size_t i = 0; i < N; ++i) rep.L[i] = tr.V[i] + scale * W[i];
        }
    }

    // metrics
    for (std::size_t i = 0; i < N; ++i) {
        rep.sup_abs_err = std::max(rep.sup_abs_err, std::abs(tr.err[i]));
        rep.sup_x_norm = std::max(rep.sup_x_norm, norm2(tr.x_row(i)));
    }
    rep.final_abs_err = std::abs(tr.err.back());
    rep.final_e1 = tr.e_row(N - 1)[0];
    rep.final_abs_ef = std::abs(tr.ef.back());
    {
        const double tol = cfg.tolerances.tol_settle;
        std::size_t last_bad = N;  // N: never exceeds
        for (std::size_t i = N; i-- > 0;)
            if (std::abs(tr.err[i]) > tol) {
                last_bad = i;
                break;
            }
        if (last_bad == N)
            rep.settling_time = tr.t.front();
        else if (last_bad + 1 < N)
            rep.settling_time = tr.t[last_bad + 1];
        else
            rep.settling_time = -1.0;
    }
    for (std::size_t i = m; i < N; ++i) {
        rep.sup_window_theta = std::max(rep.sup_window_theta, rep.window_theta_energy[i]);
        rep.sup_window_u = std::max(rep.sup_window_u, rep.window_u_energy[i]);
    }
    rep.final_window_V = N > m ? rep.window_V.back() : 0.0;

    // finite-difference dV/dt and its windowed energy
    std::vector<double> vd(N, 0.0);
    for (std::size_t i = 1; i + 1 < N; ++i) vd[i] = (tr.V[i + 1] - tr.V[i - 1]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < N; ++i)
        rep.sup_abs_vdot = std::max(rep.sup_abs_vdot, std::abs(vd[i]));
    {
        std::vector<double> vd2(N, 0.0);
        for (std::size_t i = 0; i < N; ++i) vd2[i] = vd[i] * vd[i];
        rep.window_vdot_energy = windowed_series(vd2, h, tau);
    }

    // tau-grid monotonicity of L (complete windows only for the forward law)
    const std::size_t limit = forward ? (N > m ? N - m : 0) : N;
    rep.L_margin_whole = tau_grid_margin(rep.L, m, 0, limit);
    rep.L_margin_half = tau_grid_margin(rep.L, m, m / 2, limit);

    auto add_check = [&rep](bool enabled, const std::string& name, bool pass, double value,
                            double bound, const std::string& detail = "") {
        if (!enabled) return;
        rep.checks.push_back({name, pass, value, bound, detail});
        rep.passed = rep.passed && pass;
    };

    const MonitorConfig& mon = cfg.monitors;
    // absolute floor covers runs that start exactly on the tracking manifold
    const double tolL =
        cfg.tolerances.tol_L_rel * (rep.L.empty() ? 0.0 : rep.L[0]) + 1e-13;
    add_check(mon.functional_monotone && N > 2 * m, "functional_monotone",
              rep.L_margin_whole <= tolL && rep.L_margin_half <= tolL,
              std::max(rep.L_margin_whole, rep.L_margin_half), tolL,
              "max increase of L on the tau grid, offsets 0 and tau/2");

    add_check(mon.window_decay && N > m, "window_decay", rep.final_window_V <= cfg.tolerances.tol_window,
              rep.final_window_V, cfg.tolerances.tol_window, "windowed integral of V at t_final");

    if (mon.differential_bound && N > 2 * m + 2) {
        // dL/dt <= -2 kappa |b| V + tol (1 + V), away from the start-up kink
        double worst = -1e300;
        const std::size_t lo = forward ? 1 : m + 1;
        const std::size_t hi = forward ? N - m - 1 : N - 1;
        for (std::size_t i = lo; i + 1 <= hi; ++i) {
            const double dL = (rep.L[i + 1] - rep.L[i - 1]) / (2.0 * h);
            const double slack = dL + 2.0 * cfg.kappa * absb * tr.V[i] -
                                 cfg.tolerances.tol_dL * (1.0 + tr.V[i]);
            worst = std::max(worst, slack);
        }
        add_check(true, "differential_bound", worst <= 0.0, worst, 0.0,
                  "sup of dL/dt + 2 kappa |b| V - tol (1 + V)");
    }

    if (mon.barbalat && N > 4 * m + 2) {
        BarbalatOptions opt;
        opt.tau = tau;
        opt.tol_window = cfg.tolerances.tol_window;
        opt.tol_g = cfg.tolerances.tol_g;
        opt.growth_factor = cfg.tolerances.growth_factor;
        opt.bound_M = cfg.tolerances.bound_M;
        rep.barbalat = barbalat_monitor(tr.V, h, opt);
        add_check(true, "barbalat", rep.barbalat.consistent,
                  rep.barbalat.final_window_g, cfg.tolerances.tol_window, rep.barbalat.label);
    }

    if (mon.boundedness_growth && N > 2 * m) {
        double sup_half_th = 0.0, sup_half_u = 0.0;
        for (std::size_t i = m; i <= (N - 1) / 2; ++i) {
            sup_half_th = std::max(sup_half_th, rep.window_theta_energy[i]);
            sup_half_u = std::max(sup_half_u, rep.window_u_energy[i]);
        }
        const bool ok_th = rep.sup_window_theta <= 1.05 * sup_half_th + 1e-12;
        const bool ok_u = rep.sup_window_u <= 1.05 * sup_half_u + 1e-12;
        add_check(true, "boundedness_growth", ok_th && ok_u,
                  std::max(rep.sup_window_theta, rep.sup_window_u), 0.0,
                  "windowed estimate/control energies stop growing after t_final/2");
    }
    if (cfg.tolerances.theta_energy_bound && N > m)
        add_check(true, "theta_energy_bound",
                  rep.sup_window_theta <= *cfg.tolerances.theta_energy_bound,
                  rep.sup_window_theta, *cfg.tolerances.theta_energy_bound);

    add_check(mon.settling, "settling", rep.settling_time >= 0.0, rep.settling_time,
              cfg.integrator.t_final, "error signal enters and stays in the settling band");

    if (mon.vdot_structural && N > m + 2) {
        // |Vdot| <= kappa |b| e^2 + |b| |e| |phi| |theta_err| + tol (1 + e^2)
        const Vec truth = cfg.true_parameters().theta;
        double worst = -1e300;
        for (std::size_t i = m + 1; i + 1 < N; ++i) {
            const auto th = tr.th_row(i);
            double te = 0.0;
            for (std::size_t c = 0; c < th.size(); ++c) {
                const double d = th[c] - truth[c];
                te += d * d;
            }
            const double e2 = tr.err[i] * tr.err[i];
            const double bound = cfg.kappa * absb * e2 +
                                 absb * std::abs(tr.err[i]) * std::sqrt(tr.phi_norm_sq[i] * te) +
                                 cfg.tolerances.tol_dL * (1.0 + e2);
            worst = std::max(worst, std::abs(vd[i]) - bound);
        }
        add_check(true, "vdot_structural", worst <= 0.0, worst, 0.0,
                  "pointwise bounded-derivative certificate");
    }

    if (robust) {
        const double tol = cfg.tolerances.tol_settle;
        const bool band = tr.e_eps.back() <= tol &&
                          rep.final_abs_ef <= cfg.adaptation.epsilon + tol;
        add_check(true, "dead_zone_band", band, rep.final_abs_ef,
                  cfg.adaptation.epsilon + tol, "final filtered error inside the widened dead zone");
    }

    return rep;
}

double cancellation_residual_sup(const ScenarioConfig& cfg, const Trace& tr) {
    if (cfg.adaptation.law != Law::forward_incremental)
        throw ConfigError("the cancellation identity applies to forward-law runs");
    const double gamma = cfg.resolved_gamma();
    const double b = cfg.b();
    const double s = cfg.b_sign() >= 0 ? 1.0 : -1.0;
    const auto m = static_cast<std::size_t>(std::llround(tr.tau / tr.h));
    double sup = 0.0;
    for (std::size_t i = 0; i + m < tr.size(); ++i) {
        const double e = tr.err[i];
        const double u1 = -0.5 * s * gamma * tr.phi_norm_sq[i] * e;
        const auto a = tr.th_row(i);
        const auto bb = tr.th_row(i + m);
        double dn = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) {
            const double d = bb[c] - a[c];
            dn += d * d;
        }
        const double resid = b * u1 * e + std::abs(b) / (2.0 * gamma) * dn;
        sup = std::max(sup, std::abs(resid) / (1.0 + tr.phi_norm_sq[i] * e * e));
    }
    return sup;
}

Divergence compare_runs(const Trace& a, const Trace& b) {
    if (a.size() != b.size() || a.n != b.n || std::abs(a.h - b.h) > 1e-12 * std::max(a.h, b.h))
        throw ConfigError("compare_runs requires identical integration grids");
    Divergence d;
    double s2 = 0.0, e2 = 0.0, t2 = 0.0;
    const bool same_p = a.p == b.p;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (int c = 0; c < a.n; ++c) {
            const double diff = a.x_row(i)[static_cast<std::size_t>(c)] -
                                b.x_row(i)[static_cast<std::size_t>(c)];
            d.state_sup = std::max(d.state_sup, std::abs(diff));
            row += diff * diff;
        }
        s2 += row;
        const double de = a.err[i] - b.err[i];
        d.err_sup = std::max(d.err_sup, std::abs(de));
        e2 += de * de;
        if (same_p) {
            double rowt = 0.0;
            for (int c = 0; c < a.p; ++c) {
                const double dt = a.th_row(i)[static_cast<std::size_t>(c)] -
                                  b.th_row(i)[static_cast<std::size_t>(c)];
                d.estimate_sup = std::max(d.estimate_sup, std::abs(dt));
                rowt += dt * dt;
            }
            t2 += rowt;
        }
    }
    d.state_l2 = std::sqrt(s2 * a.h);
    d.err_l2 = std::sqrt(e2 * a.h);
    d.estimate_l2 = std::sqrt(t2 * a.h);
    return d;
}

std::vector<double> family_exponential(double h, double t_final) {
    const auto n = static_cast<std::size_t>(std::llround(t_final / h)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(-static_cast<double>(i) * h);
    return g;
}

std::vector<double> family_rational_decay(double h, double t_final) {
    const auto n = static_cast<std::size_t>(std::llround(t_final / h)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        g[i] = 1.0 / ((1.0 + t) * (1.0 + t));
    }
    return g;
}

std::vector<double> family_bump_train(double h, double t_final) {
    const auto n = static_cast<std::size_t>(std::llround(t_final / h)) + 1;
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        const double k = std::round(t);
        if (k < 1.0) continue;
        const double width = std::pow(2.0, -k);
        const double dist = std::abs(t - k);
        if (dist < 0.5 * width) g[i] = 1.0 - 2.0 * dist / width;
    }
    return g;
}

}  // namespace incadapt
