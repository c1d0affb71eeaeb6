#include "incadapt/incadapt.h"

#include <cctype>
#include <cstring>
#include <fstream>
#include <string>

#include "core/driver.hpp"

using namespace incadapt;

struct incadapt_scenario {
    ScenarioConfig cfg;
};

struct incadapt_run {
    ScenarioConfig cfg;
    Trace trace;
    MonitorReport report;
};

namespace {

thread_local std::string g_last_error;

incadapt_status fail(const std::exception& e) {
    g_last_error = e.what();
    return static_cast<incadapt_status>(static_cast<int>(status_of(e)));
}

incadapt_status invalid(const char* msg) {
    g_last_error = msg;
    return INCADAPT_ERR_INVALID_HANDLE;
}

template <typename F>
incadapt_status guarded(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return fail(e);
    } catch (...) {
        g_last_error = "unknown error";
        return INCADAPT_ERR_NUMERIC;
    }
}

}  // namespace

extern "C" {

const char* incadapt_version(void) { return "incadapt 1.0.0"; }

const char* incadapt_last_error(void) { return g_last_error.c_str(); }

incadapt_status incadapt_scenario_parse_file(const char* path, incadapt_scenario** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] {
        auto* s = new incadapt_scenario{parse_config_file(path)};
        *out = s;
        return INCADAPT_OK;
    });
}

incadapt_status incadapt_scenario_parse_text(const char* text, incadapt_scenario** out) {
    if (!text || !out) return invalid("null argument");
    return guarded([&] {
        auto* s = new incadapt_scenario{parse_config_text(text)};
        *out = s;
        return INCADAPT_OK;
    });
}

incadapt_status incadapt_scenario_override(incadapt_scenario* s, const char* assignment) {
    if (!s || !assignment) return invalid("null argument");
    return guarded([&] {
        s->cfg = apply_override(s->cfg, assignment);
        return INCADAPT_OK;
    });
}

incadapt_status incadapt_scenario_serialize(const incadapt_scenario* s, char* buf, size_t cap,
                                            size_t* needed) {
    if (!s) return invalid("null scenario");
    return guarded([&] {
        const std::string text = serialize_config(s->cfg);
        if (needed) *needed = text.size();
        if (buf && cap > 0) {
            const size_t n = std::min(cap - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
        return INCADAPT_OK;
    });
}

void incadapt_scenario_free(incadapt_scenario* s) { delete s; }

incadapt_status incadapt_simulate(const incadapt_scenario* s, incadapt_run** out) {
    if (!s || !out) return invalid("null argument");
    return guarded([&] {
        RunResult r = run_scenario(s->cfg);
        *out = new incadapt_run{std::move(r.cfg), std::move(r.trace), std::move(r.report)};
        return INCADAPT_OK;
    });
}

size_t incadapt_run_record_count(const incadapt_run* r) { return r ? r->trace.size() : 0; }

incadapt_status incadapt_run_column(const incadapt_run* r, const char* column, double* out,
                                    size_t cap, size_t* written) {
    if (!r || !column || !out) return invalid("null argument");
    return guarded([&]() -> incadapt_status {
        const Trace& tr = r->trace;
        const std::string name = column;
        const std::size_t n = std::min(cap, tr.size());
        auto copy_plain = [&](const std::vector<double>& v) {
            for (std::size_t i = 0; i < n; ++i) out[i] = v[i];
        };
        if (name == "t") copy_plain(tr.t);
        else if (name == "yd") copy_plain(tr.yd);
        else if (name == "ef") copy_plain(tr.ef);
        else if (name == "eps") copy_plain(tr.eps);
        else if (name == "iota") copy_plain(tr.iota);
        else if (name == "sigma") copy_plain(tr.sigma);
        else if (name == "e_eps") copy_plain(tr.e_eps);
        else if (name == "u") copy_plain(tr.u);
        else if (name == "w") copy_plain(tr.w);
        else if (name == "V") copy_plain(tr.V);
        else if (name == "L") copy_plain(r->report.L);
        else if (name == "winV") copy_plain(r->report.window_V);
        else if (name == "winTh") copy_plain(r->report.window_theta_energy);
        else if (name == "winU") copy_plain(r->report.window_u_energy);
        else if (name.size() > 1 && name[0] == 'x') {
            const int c = std::stoi(name.substr(1)) - 1;
            if (c < 0 || c >= tr.n) throw ConfigError("unknown column '" + name + "'");
            for (std::size_t i = 0; i < n; ++i) out[i] = tr.x_row(i)[static_cast<std::size_t>(c)];
        } else if (name.size() > 1 && name[0] == 'e' &&
                   std::isdigit(static_cast<unsigned char>(name[1]))) {
            const int c = std::stoi(name.substr(1)) - 1;
            if (c < 0 || c >= tr.n) throw ConfigError("unknown column '" + name + "'");
            for (std::size_t i = 0; i < n; ++i) out[i] = tr.e_row(i)[static_cast<std::size_t>(c)];
        } else if (name.size() > 2 && name.rfind("th", 0) == 0) {
            const int c = std::stoi(name.substr(2)) - 1;
            if (c < 0 || c >= tr.p) throw ConfigError("unknown column '" + name + "'");
            for (std::size_t i = 0; i < n; ++i) out[i] = tr.th_row(i)[static_cast<std::size_t>(c)];
        } else {
            throw ConfigError("unknown column '" + name + "'");
        }
        if (written) *written = n;
        return INCADAPT_OK;
    });
}

incadapt_status incadapt_run_metric(const incadapt_run* r, const char* name, double* out) {
    if (!r || !name || !out) return invalid("null argument");
    const MonitorReport& m = r->report;
    const std::string k = name;
    if (k == "sup_abs_err") *out = m.sup_abs_err;
    else if (k == "final_abs_err") *out = m.final_abs_err;
    else if (k == "settling_time") *out = m.settling_time;
    else if (k == "sup_x_norm") *out = m.sup_x_norm;
    else if (k == "final_window_V") *out = m.final_window_V;
    else if (k == "sup_window_theta_energy") *out = m.sup_window_theta;
    else if (k == "sup_window_u_energy") *out = m.sup_window_u;
    else if (k == "L_margin_offset0") *out = m.L_margin_whole;
    else if (k == "L_margin_half") *out = m.L_margin_half;
    else if (k == "sup_abs_vdot") *out = m.sup_abs_vdot;
    else if (k == "final_e1") *out = m.final_e1;
    else if (k == "final_abs_ef") *out = m.final_abs_ef;
    else {
        g_last_error = "unknown metric '" + k + "'";
        return INCADAPT_ERR_VALIDATION;
    }
    return INCADAPT_OK;
}

int incadapt_run_passed(const incadapt_run* r) { return r && r->report.passed ? 1 : 0; }

incadapt_status incadapt_run_write_csv(const incadapt_run* r, const char* path) {
    if (!r || !path) return invalid("null argument");
    return guarded([&] {
        write_trajectory_csv(path, r->cfg, r->trace, r->report);
        return INCADAPT_OK;
    });
}

incadapt_status incadapt_run_write_report(const incadapt_run* r, const char* path) {
    if (!r || !path) return invalid("null argument");
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
        out << report_text(r->cfg, r->report);
        return INCADAPT_OK;
    });
}

void incadapt_run_free(incadapt_run* r) { delete r; }

incadapt_status incadapt_cmd_run(const incadapt_scenario* s, const char* out_dir) {
    if (!s || !out_dir) return invalid("null argument");
    return guarded([&] {
        return static_cast<incadapt_status>(static_cast<int>(cmd_run(s->cfg, out_dir)));
    });
}

incadapt_status incadapt_cmd_sweep(const incadapt_scenario* base, const char* grid_spec,
                                   const char* out_dir, int jobs) {
    if (!base || !grid_spec || !out_dir) return invalid("null argument");
    return guarded([&] {
        return static_cast<incadapt_status>(
            static_cast<int>(cmd_sweep(base->cfg, grid_spec, out_dir, jobs)));
    });
}

incadapt_status incadapt_cmd_compare(const incadapt_scenario* a, const incadapt_scenario* b,
                                     const char* out_dir) {
    if (!a || !b || !out_dir) return invalid("null argument");
    return guarded([&] {
        return static_cast<incadapt_status>(
            static_cast<int>(cmd_compare(a->cfg, b->cfg, out_dir)));
    });
}

incadapt_status incadapt_cmd_verify_lemma(const char* family, const char* out_dir) {
    if (!family || !out_dir) return invalid("null argument");
    return guarded([&] {
        return static_cast<incadapt_status>(
            static_cast<int>(cmd_verify_lemma(family, out_dir)));
    });
}

incadapt_status incadapt_register_regressor(const char* name, size_t dim, double bound,
                                            incadapt_regressor_fn fn, void* user) {
    if (!name || !fn || dim == 0) return invalid("null argument");
    return guarded([&] {
        Regressor r;
        r.name = name;
        r.dim = dim;
        if (bound >= 0.0) r.bound = bound;
        r.eval = [fn, user, dim](double t, std::span<const double> x, std::span<double> out) {
            fn(t, x.data(), x.size(), out.data(), user);
            (void)dim;
        };
        register_regressor(std::move(r));
        return INCADAPT_OK;
    });
}

incadapt_status incadapt_register_nonlinearity(const char* name, double bound,
                                               incadapt_nonlinearity_fn fn, void* user) {
    if (!name || !fn) return invalid("null argument");
    return guarded([&] {
        Nonlinearity nl;
        nl.name = name;
        if (bound >= 0.0) nl.bound = bound;
        nl.eval = [fn, user](double t, std::span<const double> x) {
            return fn(t, x.data(), x.size(), user);
        };
        register_nonlinearity(std::move(nl));
        return INCADAPT_OK;
    });
}

}  // extern "C"
