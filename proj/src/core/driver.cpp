#include "core/driver.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace incadapt {

namespace {

// locale-independent %.17g
std::string num17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    RunResult r;
    r.cfg = cfg;
    r.trace = simulate(cfg);
    r.report = analyze(cfg, r.trace);
    return r;
}

void write_trajectory_csv(const std::string& path, const ScenarioConfig& cfg, const Trace& tr,
                          const MonitorReport& rep) {
    std::ofstream out = open_out(path);
    std::string line = "t";
    for (int i = 1; i <= tr.n; ++i) line += ",x" + std::to_string(i);
    line += ",yd";
    for (int i = 1; i <= tr.n; ++i) line += ",e" + std::to_string(i);
    line += ",ef,eps,iota,sigma,e_eps,u,w";
    for (int i = 1; i <= tr.p; ++i) line += ",th" + std::to_string(i);
    line += ",V,L,winV,winTh,winU\n";
    out << line;

    auto emit = [&](std::size_t i) {
        std::string row = num17(tr.t[i]);
        for (int c = 0; c < tr.n; ++c) row += "," + num17(tr.x_row(i)[static_cast<std::size_t>(c)]);
        row += "," + num17(tr.yd[i]);
        for (int c = 0; c < tr.n; ++c) row += "," + num17(tr.e_row(i)[static_cast<std::size_t>(c)]);
        row += "," + num17(tr.ef[i]) + "," + num17(tr.eps[i]) + "," + num17(tr.iota[i]) + "," +
               num17(tr.sigma[i]) + "," + num17(tr.e_eps[i]) + "," + num17(tr.u[i]) + "," +
               num17(tr.w[i]);
        for (int c = 0; c < tr.p; ++c) row += "," + num17(tr.th_row(i)[static_cast<std::size_t>(c)]);
        row += "," + num17(tr.V[i]) + "," + num17(rep.L[i]) + "," + num17(rep.window_V[i]) + "," +
               num17(rep.window_theta_energy[i]) + "," + num17(rep.window_u_energy[i]) + "\n";
        out << row;
    };
    const auto stride = static_cast<std::size_t>(cfg.integrator.record_stride);
    std::size_t last = 0;
    for (std::size_t i = 0; i < tr.size(); i += stride) {
        emit(i);
        last = i;
    }
    if (last + 1 != tr.size()) emit(tr.size() - 1);
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string report_text(const ScenarioConfig& cfg, const MonitorReport& rep) {
    std::ostringstream os;
    os << "run_report\n";
    os << "name: " << cfg.name << "\n";
    os << "plant: " << (cfg.plant_kind == PlantKind::scalar ? "scalar" : "siso") << "\n";
    os << "n: " << cfg.n() << "\n";
    os << "p: " << cfg.estimate_dim() << "\n";
    os << "b: " << num17(cfg.b()) << "\n";
    os << "kappa: " << num17(cfg.kappa) << "\n";
    os << "gamma: " << num17(cfg.resolved_gamma()) << "\n";
    os << "tau: " << num17(cfg.adaptation.tau) << "\n";
    os << "epsilon: " << num17(cfg.adaptation.epsilon) << "\n";
    os << "h: " << num17(cfg.integrator.h) << "\n";
    os << "t_final: " << num17(cfg.integrator.t_final) << "\n";
    os << "record_stride: " << cfg.integrator.record_stride << "\n";
    os << "sup_abs_err: " << num17(rep.sup_abs_err) << "\n";
    os << "final_abs_err: " << num17(rep.final_abs_err) << "\n";
    os << "final_e1: " << num17(rep.final_e1) << "\n";
    os << "final_abs_ef: " << num17(rep.final_abs_ef) << "\n";
    os << "settling_time: " << num17(rep.settling_time) << "\n";
    os << "sup_x_norm: " << num17(rep.sup_x_norm) << "\n";
    os << "final_window_V: " << num17(rep.final_window_V) << "\n";
    os << "sup_window_theta_energy: " << num17(rep.sup_window_theta) << "\n";
    os << "sup_window_u_energy: " << num17(rep.sup_window_u) << "\n";
    os << "L_margin_offset0: " << num17(rep.L_margin_whole) << "\n";
    os << "L_margin_half: " << num17(rep.L_margin_half) << "\n";
    os << "sup_abs_vdot: " << num17(rep.sup_abs_vdot) << "\n";
    os << "barbalat: " << (rep.barbalat.label.empty() ? "SKIPPED" : rep.barbalat.label)
       << " energy_bounded=" << rep.barbalat.energy_bounded
       << " window_decays=" << rep.barbalat.window_decays
       << " tail_small=" << rep.barbalat.tail_small
       << " sup_gdot2_window=" << num17(rep.barbalat.sup_window_gdot_sq)
       << " final_window=" << num17(rep.barbalat.final_window_g)
       << " tail_sup=" << num17(rep.barbalat.tail_sup_g) << "\n";
    for (const MonitorCheck& c : rep.checks) {
        os << "check " << c.name << ": " << (c.pass ? "PASS" : "FAIL")
           << " value=" << num17(c.value) << " bound=" << num17(c.bound);
        if (!c.detail.empty()) os << " (" << c.detail << ")";
        os << "\n";
    }
    os << "verdict: " << (rep.passed ? "PASS" : "FAIL") << "\n";
    return os.str();
}

Status cmd_run(const ScenarioConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    ensure_dir(out_dir);
    RunResult r = run_scenario(cfg);
    write_trajectory_csv(out_dir + "/trajectory.csv", cfg, r.trace, r.report);
    std::ofstream rep = open_out(out_dir + "/report.txt");
    rep << report_text(cfg, r.report);
    if (!rep) throw IoError("failed writing '" + out_dir + "/report.txt'");
    return r.report.passed ? Status::ok : Status::monitor_failure;
}

namespace {

struct GridAxis {
    std::string param;  // gamma_prime | tau | kappa | epsilon
    std::vector<std::string> values;
};

std::vector<GridAxis> parse_grid_spec(const std::string& spec) {
    std::vector<GridAxis> axes;
    std::stringstream ss(spec);
    std::string dim;
    while (std::getline(ss, dim, ';')) {
        if (dim.empty()) continue;
        const auto eq = dim.find('=');
        if (eq == std::string::npos)
            throw ConfigError("grid axis must look like param=v1,v2,... got '" + dim + "'");
        GridAxis axis;
        axis.param = dim.substr(0, eq);
        if (axis.param != "gamma_prime" && axis.param != "tau" && axis.param != "kappa" &&
            axis.param != "epsilon")
            throw ConfigError("sweep parameter must be one of gamma_prime, tau, kappa, epsilon");
        std::stringstream vs(dim.substr(eq + 1));
        std::string v;
        while (std::getline(vs, v, ',')) {
            if (!v.empty()) axis.values.push_back(v);
        }
        if (axis.values.empty()) throw ConfigError("grid axis '" + axis.param + "' has no values");
        axes.push_back(std::move(axis));
    }
    if (axes.empty()) throw ConfigError("empty sweep grid");
    return axes;
}

std::string section_of(const std::string& param) {
    if (param == "kappa" || param == "epsilon") return "controller";
    return "adaptation";
}

struct GridPoint {
    std::vector<std::pair<std::string, std::string>> assignment;
    ScenarioConfig cfg;
};

std::vector<GridPoint> expand_grid(const ScenarioConfig& base, const std::vector<GridAxis>& axes) {
    std::vector<GridPoint> points;
    std::vector<std::size_t> idx(axes.size(), 0);
    std::vector<std::string> errors;
    while (true) {
        GridPoint pt;
        ScenarioConfig cfg = base;
        std::string label;
        try {
            for (std::size_t a = 0; a < axes.size(); ++a) {
                const std::string& v = axes[a].values[idx[a]];
                pt.assignment.emplace_back(axes[a].param, v);
                label += (label.empty() ? "" : " ") + axes[a].param + "=" + v;
                cfg = apply_override(cfg, section_of(axes[a].param) + "." + axes[a].param + "=" + v);
            }
            validate_config(cfg);
            pt.cfg = std::move(cfg);
            points.push_back(std::move(pt));
        } catch (const Error& e) {
            errors.push_back("grid point (" + label + "): " + e.what());
        }
        std::size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < axes[a].values.size()) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }
    if (!errors.empty()) {
        std::string all = "sweep grid validation failed:";
        for (const std::string& e : errors) all += "\n  - " + e;
        throw ConfigError(all);
    }
    return points;
}

}  // namespace

Status cmd_sweep(const ScenarioConfig& base, const std::string& grid_spec,
                 const std::string& out_dir, int jobs) {
    validate_config(base);
    const std::vector<GridAxis> axes = parse_grid_spec(grid_spec);
    std::vector<GridPoint> points = expand_grid(base, axes);  // validates every point up front
    ensure_dir(out_dir);

    struct PointResult {
        bool passed = false;
        double settling = -1.0, sup_err = 0.0, final_winV = 0.0;
        double dist_to_integral = -1.0;  // <0: not applicable
        std::string error;
    };
    std::vector<PointResult> results(points.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            PointResult& pr = results[i];
            try {
                const ScenarioConfig& cfg = points[i].cfg;
                RunResult r = run_scenario(cfg);
                char dirbuf[32];
                std::snprintf(dirbuf, sizeof dirbuf, "point_%03zu", i);
                const std::string pdir = out_dir + "/" + dirbuf;
                ensure_dir(pdir);
                write_trajectory_csv(pdir + "/trajectory.csv", cfg, r.trace, r.report);
                open_out(pdir + "/report.txt") << report_text(cfg, r.report);
                pr.passed = r.report.passed;
                pr.settling = r.report.settling_time;
                pr.sup_err = r.report.sup_abs_err;
                pr.final_winV = r.report.final_window_V;
                // tau refinement column: the incremental run against the
                // integral law resolved from the same gamma'
                if (cfg.adaptation.law == Law::incremental && cfg.adaptation.gamma_prime) {
                    ScenarioConfig twin = cfg;
                    twin.adaptation.law = Law::integral;
                    twin.controller = Controller::integral_ce;
                    Trace twin_tr = simulate(twin);
                    pr.dist_to_integral = compare_runs(r.trace, twin_tr).state_sup;
                }
            } catch (const std::exception& e) {
                pr.error = e.what();
            }
        }
    };
    const int nthreads = std::max(1, jobs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads) - 1);
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ofstream out = open_out(out_dir + "/summary.csv");
    std::string header = "point";
    for (const GridAxis& a : axes) header += "," + a.param;
    out << header << ",verdict,settling_time,sup_abs_e,final_window_V,dist_to_integral\n";
    bool all_passed = true;
    bool any_error = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointResult& pr = results[i];
        std::string row = std::to_string(i);
        for (const auto& [param, value] : points[i].assignment) row += "," + value;
        if (!pr.error.empty()) {
            row += ",ERROR,na,na,na,na";
            any_error = true;
        } else {
            row += pr.passed ? ",PASS" : ",FAIL";
            row += "," + num17(pr.settling) + "," + num17(pr.sup_err) + "," + num17(pr.final_winV);
            row += pr.dist_to_integral >= 0.0 ? "," + num17(pr.dist_to_integral) : ",na";
            all_passed = all_passed && pr.passed;
        }
        out << row << "\n";
    }
    if (any_error) return Status::numeric_fault;
    return all_passed ? Status::ok : Status::monitor_failure;
}

Status cmd_compare(const ScenarioConfig& a, const ScenarioConfig& b, const std::string& out_dir) {
    validate_config(a);
    validate_config(b);
    if (std::abs(a.integrator.h - b.integrator.h) > 1e-12 ||
        std::abs(a.integrator.t_final - b.integrator.t_final) > 1e-12)
        throw ConfigError("compare requires identical integrator grids");
    ensure_dir(out_dir);
    RunResult ra = run_scenario(a);
    RunResult rb = run_scenario(b);
    const Divergence d = compare_runs(ra.trace, rb.trace);
    write_trajectory_csv(out_dir + "/trajectory_a.csv", a, ra.trace, ra.report);
    write_trajectory_csv(out_dir + "/trajectory_b.csv", b, rb.trace, rb.report);
    std::ofstream out = open_out(out_dir + "/compare.txt");
    out << "compare_report\n";
    out << "name_a: " << a.name << "\nname_b: " << b.name << "\n";
    out << "state_sup: " << num17(d.state_sup) << "\nstate_l2: " << num17(d.state_l2) << "\n";
    out << "err_sup: " << num17(d.err_sup) << "\nerr_l2: " << num17(d.err_l2) << "\n";
    out << "estimate_sup: " << num17(d.estimate_sup) << "\nestimate_l2: " << num17(d.estimate_l2)
        << "\n";
    out << "verdict_a: " << (ra.report.passed ? "PASS" : "FAIL") << "\n";
    out << "verdict_b: " << (rb.report.passed ? "PASS" : "FAIL") << "\n";
    return Status::ok;
}

namespace {

struct LemmaCase {
    std::vector<double> g;
    double h = 0.0;
    double tau = 1.0;
    // expected profile
    bool expect_energy_bounded = true;
    bool expect_window_decays = true;
    bool expect_tail_small = true;
};

LemmaCase load_from_run(const std::string& dir) {
    std::ifstream rep(dir + "/report.txt");
    if (!rep) throw IoError("cannot open '" + dir + "/report.txt'");
    double tau = -1.0;
    std::string line;
    while (std::getline(rep, line)) {
        if (line.rfind("tau: ", 0) == 0) {
            const std::string v = line.substr(5);
            std::from_chars(v.data(), v.data() + v.size(), tau);
        }
    }
    if (tau <= 0.0) throw ConfigError("no tau entry in '" + dir + "/report.txt'");

    std::ifstream csv(dir + "/trajectory.csv");
    if (!csv) throw IoError("cannot open '" + dir + "/trajectory.csv'");
    if (!std::getline(csv, line)) throw ConfigError("empty trajectory file");
    // locate the t and V columns
    int t_col = -1, v_col = -1, col = 0;
    {
        std::stringstream hs(line);
        std::string name;
        while (std::getline(hs, name, ',')) {
            if (name == "t") t_col = col;
            if (name == "V") v_col = col;
            ++col;
        }
    }
    if (t_col < 0 || v_col < 0) throw ConfigError("trajectory file lacks t/V columns");
    LemmaCase lc;
    lc.tau = tau;
    std::vector<double> ts;
    while (std::getline(csv, line)) {
        std::stringstream ls(line);
        std::string cell;
        int c = 0;
        double tv = 0.0, vv = 0.0;
        while (std::getline(ls, cell, ',')) {
            if (c == t_col) std::from_chars(cell.data(), cell.data() + cell.size(), tv);
            if (c == v_col) std::from_chars(cell.data(), cell.data() + cell.size(), vv);
            ++c;
        }
        ts.push_back(tv);
        lc.g.push_back(vv);
    }
    if (ts.size() < 3) throw ConfigError("trajectory too short");
    lc.h = ts[1] - ts[0];
    return lc;
}

}  // namespace

Status cmd_verify_lemma(const std::string& family, const std::string& out_dir) {
    LemmaCase lc;
    if (family == "exponential") {
        lc.h = 1e-3;
        lc.g = family_exponential(lc.h, 30.0);
    } else if (family == "rational_decay") {
        lc.h = 1e-3;
        lc.g = family_rational_decay(lc.h, 100.0);
    } else if (family == "bump_train") {
        lc.h = 2e-5;
        lc.g = family_bump_train(lc.h, 14.0);
        lc.expect_energy_bounded = false;  // derivative energy grows with the bumps
        lc.expect_tail_small = false;      // the function itself never settles
    } else if (family.rfind("from_run:", 0) == 0) {
        lc = load_from_run(family.substr(9));
    } else {
        throw ConfigError("unknown verification family '" + family +
                          "' (expected exponential, rational_decay, bump_train or from_run:<dir>)");
    }

    BarbalatOptions opt;
    opt.tau = lc.tau;
    const BarbalatVerdict v = barbalat_monitor(lc.g, lc.h, opt);
    const bool profile_ok = v.consistent && v.energy_bounded == lc.expect_energy_bounded &&
                            v.window_decays == lc.expect_window_decays &&
                            v.tail_small == lc.expect_tail_small;

    ensure_dir(out_dir);
    std::ofstream out = open_out(out_dir + "/lemma_report.txt");
    out << "lemma_report\n";
    out << "family: " << family << "\n";
    out << "samples: " << lc.g.size() << "\n";
    out << "tau: " << num17(lc.tau) << "\nh: " << num17(lc.h) << "\n";
    out << "energy_bounded: " << v.energy_bounded << " (expected " << lc.expect_energy_bounded
        << ")\n";
    out << "window_decays: " << v.window_decays << " (expected " << lc.expect_window_decays
        << ")\n";
    out << "tail_small: " << v.tail_small << " (expected " << lc.expect_tail_small << ")\n";
    out << "sup_gdot2_window: " << num17(v.sup_window_gdot_sq) << "\n";
    out << "early_energy: " << num17(v.early_energy) << "\nlate_energy: " << num17(v.late_energy)
        << "\n";
    out << "final_window_g: " << num17(v.final_window_g) << "\n";
    out << "tail_sup_g: " << num17(v.tail_sup_g) << "\n";
    out << "verdict: " << v.label << "\n";
    out << "profile: " << (profile_ok ? "MATCHES" : "MISMATCH") << "\n";
    return profile_ok ? Status::ok : Status::monitor_failure;
}

Status status_of(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) return err->status();
    return Status::numeric_fault;
}

}  // namespace incadapt
