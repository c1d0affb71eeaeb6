#include "core/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "core/errors.hpp"

namespace incadapt {

namespace {

// locale-independent %.17g
std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double_strict(const std::string& text) {
    const char* begin = text.c_str();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;  // from_chars rejects a leading plus
    double v = 0.0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end || begin == end) return std::nullopt;
    return v;
}

std::optional<long long> parse_int_strict(const std::string& text) {
    const char* begin = text.c_str();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    long long v = 0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end || begin == end) return std::nullopt;
    return v;
}

std::string fmt_vec(const Vec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(v[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

/// One parsed config source: sections of key/value entries plus an error list
/// that accumulates across parsing and validation.
struct Source {
    std::map<std::string, std::map<std::string, RawEntry>> sections;
    std::vector<std::string> errors;

    void fail(const std::string& msg) { errors.push_back(msg); }

    RawEntry* find(const std::string& sec, const std::string& key) {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    bool parse_text(const std::string& text) {
        std::stringstream ss(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    fail("line " + std::to_string(lineno) + ": malformed section header");
                    continue;
                }
                section = trim(line.substr(1, line.size() - 2));
                sections[section];
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                fail("line " + std::to_string(lineno) + ": expected key = value");
                continue;
            }
            if (section.empty()) {
                fail("line " + std::to_string(lineno) + ": key outside any [section]");
                continue;
            }
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                fail("line " + std::to_string(lineno) + ": empty key");
                continue;
            }
            if (sections[section].count(key))
                fail("line " + std::to_string(lineno) + ": duplicate key '" + key + "' in [" +
                     section + "]");
            sections[section][key] = RawEntry{value, lineno, false};
        }
        return errors.empty();
    }

    std::optional<double> get_double(const std::string& sec, const std::string& key) {
        RawEntry* e = find(sec, key);
        if (!e) return std::nullopt;
        const std::optional<double> v = parse_double_strict(e->value);
        if (!v) fail("line " + std::to_string(e->line) + ": '" + key + "' is not a number");
        return v;
    }

    std::optional<long long> get_int(const std::string& sec, const std::string& key) {
        RawEntry* e = find(sec, key);
        if (!e) return std::nullopt;
        const std::optional<long long> v = parse_int_strict(e->value);
        if (!v) fail("line " + std::to_string(e->line) + ": '" + key + "' is not an integer");
        return v;
    }

    std::optional<bool> get_bool(const std::string& sec, const std::string& key) {
        RawEntry* e = find(sec, key);
        if (!e) return std::nullopt;
        if (e->value == "true") return true;
        if (e->value == "false") return false;
        fail("line " + std::to_string(e->line) + ": '" + key + "' must be true or false");
        return std::nullopt;
    }

    std::optional<std::string> get_string(const std::string& sec, const std::string& key) {
        RawEntry* e = find(sec, key);
        if (!e) return std::nullopt;
        return e->value;
    }

    std::optional<Vec> get_vec(const std::string& sec, const std::string& key) {
        RawEntry* e = find(sec, key);
        if (!e) return std::nullopt;
        Vec out;
        for (const std::string& item : split_list(e->value)) {
            const std::optional<double> v = parse_double_strict(item);
            if (!v) {
                fail("line " + std::to_string(e->line) + ": '" + key + "' has a non-numeric entry '" +
                     item + "'");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        return out;
    }

    std::optional<std::vector<std::string>> get_names(const std::string& sec,
                                                      const std::string& key) {
        RawEntry* e = find(sec, key);
        if (!e) return std::nullopt;
        return split_list(e->value);
    }

    void flag_unknown_keys() {
        static const std::map<std::string, bool> known_sections = {
            {"scenario", true},   {"plant", true},      {"reference", true},
            {"controller", true}, {"adaptation", true}, {"integrator", true},
            {"disturbance", true}, {"tolerances", true}, {"monitors", true}};
        for (auto& [sec, keys] : sections) {
            if (!known_sections.count(sec)) {
                fail("unknown section [" + sec + "]");
                continue;
            }
            for (auto& [key, entry] : keys)
                if (!entry.used)
                    fail("line " + std::to_string(entry.line) + ": unknown key '" + key +
                         "' in [" + sec + "]");
        }
    }
};

template <typename Enum>
std::optional<Enum> match_enum(Source& src, const std::string& sec, const std::string& key,
                               const std::vector<std::pair<std::string, Enum>>& table) {
    RawEntry* e = src.find(sec, key);
    if (!e) return std::nullopt;
    for (auto& [name, v] : table)
        if (e->value == name) return v;
    std::string allowed;
    for (auto& [name, v] : table) {
        if (!allowed.empty()) allowed += ", ";
        allowed += name;
    }
    src.fail("line " + std::to_string(e->line) + ": '" + key + "' must be one of {" + allowed + "}");
    return std::nullopt;
}

const std::vector<std::pair<std::string, PlantKind>> kPlantKinds = {
    {"scalar", PlantKind::scalar}, {"siso", PlantKind::siso}};
const std::vector<std::pair<std::string, ReferenceTrajectory::Kind>> kReferenceKinds = {
    {"constant", ReferenceTrajectory::Kind::constant},
    {"sinusoid", ReferenceTrajectory::Kind::sinusoid}};
const std::vector<std::pair<std::string, Controller>> kControllers = {
    {"integral_ce", Controller::integral_ce},
    {"incremental_ce", Controller::incremental_ce},
    {"open_loop_aug", Controller::open_loop_aug},
    {"robust_dead_zone", Controller::robust_dead_zone}};
const std::vector<std::pair<std::string, Law>> kLaws = {
    {"integral", Law::integral},
    {"incremental", Law::incremental},
    {"forward_incremental", Law::forward_incremental},
    {"saturated_incremental", Law::saturated_incremental},
    {"robust_incremental", Law::robust_incremental}};
const std::vector<std::pair<std::string, Method>> kMethods = {{"rk4", Method::rk4},
                                                              {"euler", Method::euler}};
const std::vector<std::pair<std::string, DisturbanceSpec::Kind>> kDisturbanceKinds = {
    {"none", DisturbanceSpec::Kind::none},
    {"sinusoid", DisturbanceSpec::Kind::sinusoid},
    {"seeded_bounded_noise", DisturbanceSpec::Kind::seeded_bounded_noise}};

template <typename Enum>
std::string enum_name(Enum v, const std::vector<std::pair<std::string, Enum>>& table) {
    for (auto& [name, e] : table)
        if (e == v) return name;
    return "?";
}

}  // namespace

std::size_t ScenarioConfig::estimate_dim() const {
    if (plant_kind == PlantKind::siso) return siso.nonlinearities.size() + 1;
    std::size_t dim = has_regressor(scalar.regressor) ? find_regressor(scalar.regressor).dim
                                                      : scalar.theta0.size();
    return dim + (augmented() ? 1 : 0);
}

bool ScenarioConfig::augmented() const {
    return plant_kind == PlantKind::scalar && !constant_reference;
}

TrueParameters ScenarioConfig::true_parameters() const {
    TrueParameters tp;
    tp.b = b();
    if (plant_kind == PlantKind::scalar) {
        for (double v : scalar.theta0) tp.theta.push_back(v / scalar.b);
        if (augmented()) tp.theta.push_back(1.0 / scalar.b);
    } else {
        for (double v : siso.a) tp.theta.push_back(v / siso.b);
        tp.theta.push_back(1.0 / siso.b);
    }
    return tp;
}

double ScenarioConfig::resolved_wbar_b() const {
    if (wbar_b) return *wbar_b;
    const double wb = plant_kind == PlantKind::siso ? siso.wbar : disturbance.amplitude;
    return wb / std::abs(b());
}

Vec ScenarioConfig::initial_state() const {
    if (x0) return *x0;
    Vec state(static_cast<std::size_t>(n()));
    reference.eval(0.0, state);
    return state;
}

ScenarioConfig parse_config_text(const std::string& text, bool validate) {
    if (trim(text).empty()) throw ConfigError("empty scenario text");
    Source src;
    src.parse_text(text);

    ScenarioConfig cfg;
    if (auto v = src.get_string("scenario", "name")) cfg.name = *v;

    if (auto v = match_enum(src, "plant", "kind", kPlantKinds)) cfg.plant_kind = *v;
    if (auto v = src.get_double("plant", "b")) {
        cfg.scalar.b = *v;
        cfg.siso.b = *v;
    }
    if (auto v = src.get_vec("plant", "theta0")) cfg.scalar.theta0 = *v;
    if (auto v = src.get_string("plant", "regressor")) cfg.scalar.regressor = *v;
    if (auto v = src.get_vec("plant", "x0")) cfg.x0 = *v;
    std::optional<bool> const_ref = src.get_bool("plant", "constant_reference");
    if (auto v = src.get_int("plant", "n")) cfg.siso.n = static_cast<int>(*v);
    if (auto v = src.get_vec("plant", "a")) cfg.siso.a = *v;
    if (auto v = src.get_names("plant", "nonlinearities")) cfg.siso.nonlinearities = *v;
    if (auto v = src.get_double("plant", "wbar")) cfg.siso.wbar = *v;
    if (auto v = src.get_double("plant", "lambda")) cfg.siso.lambda = *v;

    ReferenceTrajectory::Kind rkind = ReferenceTrajectory::Kind::constant;
    if (auto v = match_enum(src, "reference", "kind", kReferenceKinds)) rkind = *v;
    if (rkind == ReferenceTrajectory::Kind::constant) {
        double value = 0.0;
        if (auto v = src.get_double("reference", "value")) value = *v;
        cfg.reference = ReferenceTrajectory::constant(value);
    } else {
        double amplitude = 1.0, omega = 1.0;
        if (auto v = src.get_double("reference", "amplitude")) amplitude = *v;
        if (auto v = src.get_double("reference", "omega")) omega = *v;
        cfg.reference = ReferenceTrajectory::sinusoid(amplitude, omega);
    }
    cfg.constant_reference = const_ref.value_or(cfg.reference.is_constant());

    if (auto v = match_enum(src, "controller", "kind", kControllers)) cfg.controller = *v;
    if (auto v = src.get_double("controller", "kappa")) cfg.kappa = *v;
    if (auto v = src.get_double("controller", "epsilon")) cfg.adaptation.epsilon = *v;
    if (auto v = src.get_bool("controller", "strict_form")) cfg.strict_printed_form = *v;
    if (auto v = src.get_double("controller", "wbar_b")) cfg.wbar_b = *v;

    if (auto v = match_enum(src, "adaptation", "law", kLaws)) cfg.adaptation.law = *v;
    if (auto v = src.get_double("adaptation", "gamma")) cfg.adaptation.gamma = *v;
    if (auto v = src.get_double("adaptation", "gamma_prime")) cfg.adaptation.gamma_prime = *v;
    if (auto v = src.get_double("adaptation", "tau")) cfg.adaptation.tau = *v;
    if (auto v = src.get_vec("adaptation", "theta_hat0")) cfg.adaptation.theta_hat0 = *v;
    if (auto v = src.get_vec("adaptation", "sat_lo")) cfg.adaptation.sat_lo = *v;
    if (auto v = src.get_vec("adaptation", "sat_hi")) cfg.adaptation.sat_hi = *v;
    cfg.adaptation.kappa = cfg.kappa;

    if (auto v = match_enum(src, "integrator", "method", kMethods)) cfg.integrator.method = *v;
    if (auto v = src.get_double("integrator", "h")) cfg.integrator.h = *v;
    if (auto v = src.get_double("integrator", "t_final")) cfg.integrator.t_final = *v;
    if (auto v = src.get_int("integrator", "record_stride"))
        cfg.integrator.record_stride = static_cast<int>(*v);

    if (auto v = match_enum(src, "disturbance", "kind", kDisturbanceKinds)) cfg.disturbance.kind = *v;
    if (auto v = src.get_double("disturbance", "amplitude")) cfg.disturbance.amplitude = *v;
    if (auto v = src.get_double("disturbance", "omega")) cfg.disturbance.omega = *v;
    if (auto v = src.get_int("disturbance", "seed"))
        cfg.disturbance.seed = static_cast<std::uint64_t>(*v);
    if (auto v = src.get_double("disturbance", "hold")) cfg.disturbance.hold = *v;

    if (auto v = src.get_double("tolerances", "tol_window")) cfg.tolerances.tol_window = *v;
    if (auto v = src.get_double("tolerances", "tol_g")) cfg.tolerances.tol_g = *v;
    if (auto v = src.get_double("tolerances", "tol_L_rel")) cfg.tolerances.tol_L_rel = *v;
    if (auto v = src.get_double("tolerances", "tol_dL")) cfg.tolerances.tol_dL = *v;
    if (auto v = src.get_double("tolerances", "tol_settle")) cfg.tolerances.tol_settle = *v;
    if (auto v = src.get_double("tolerances", "growth_factor")) cfg.tolerances.growth_factor = *v;
    if (auto v = src.get_double("tolerances", "bound_M")) cfg.tolerances.bound_M = *v;
    if (auto v = src.get_double("tolerances", "theta_energy_bound"))
        cfg.tolerances.theta_energy_bound = *v;

    if (auto v = src.get_bool("monitors", "functional_monotone")) cfg.monitors.functional_monotone = *v;
    if (auto v = src.get_bool("monitors", "window_decay")) cfg.monitors.window_decay = *v;
    if (auto v = src.get_bool("monitors", "differential_bound")) cfg.monitors.differential_bound = *v;
    if (auto v = src.get_bool("monitors", "barbalat")) cfg.monitors.barbalat = *v;
    if (auto v = src.get_bool("monitors", "boundedness_growth")) cfg.monitors.boundedness_growth = *v;
    if (auto v = src.get_bool("monitors", "settling")) cfg.monitors.settling = *v;
    if (auto v = src.get_bool("monitors", "vdot_structural")) cfg.monitors.vdot_structural = *v;

    src.flag_unknown_keys();
    if (!src.errors.empty()) {
        std::string all = "scenario parse failed:";
        for (const std::string& e : src.errors) all += "\n  - " + e;
        throw ConfigError(all);
    }

    // broadcast scalar box/initial-estimate entries to the estimate dimension
    const std::size_t p = cfg.estimate_dim();
    auto broadcast = [p](Vec& v) {
        if (v.size() == 1 && p > 1) v.assign(p, v[0]);
    };
    broadcast(cfg.adaptation.theta_hat0);
    broadcast(cfg.adaptation.sat_lo);
    broadcast(cfg.adaptation.sat_hi);
    if (cfg.adaptation.theta_hat0.empty()) cfg.adaptation.theta_hat0.assign(p, 0.0);

    if (validate) validate_config(cfg);
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> errs;
    auto check = [&errs](bool ok, const std::string& msg) {
        if (!ok) errs.push_back(msg);
    };

    check(cfg.b() != 0.0, "plant.b must be nonzero");
    if (cfg.plant_kind == PlantKind::scalar) {
        if (!has_regressor(cfg.scalar.regressor)) {
            errs.push_back("plant.regressor '" + cfg.scalar.regressor + "' is not registered");
        } else {
            check(cfg.scalar.theta0.size() == find_regressor(cfg.scalar.regressor).dim,
                  "plant.theta0 dimension must match the regressor output dimension");
        }
        check(!(cfg.constant_reference && !cfg.reference.is_constant()),
              "plant.constant_reference requires a constant reference");
    } else {
        check(cfg.siso.n >= 1, "plant.n must be at least 1");
        check(cfg.siso.a.size() == cfg.siso.nonlinearities.size(),
              "plant.a and plant.nonlinearities must have equal length");
        for (const std::string& name : cfg.siso.nonlinearities)
            if (!has_nonlinearity(name))
                errs.push_back("plant nonlinearity '" + name + "' is not registered");
        check(cfg.siso.wbar >= 0.0, "plant.wbar must be nonnegative");
        check(cfg.siso.lambda > 0.0, "plant.lambda must be positive");
    }
    if (cfg.x0)
        check(cfg.x0->size() == static_cast<std::size_t>(cfg.n()),
              "plant.x0 must have one entry per state");

    check(cfg.kappa > 0.0, "controller.kappa must be positive");
    check(cfg.adaptation.epsilon >= 0.0, "controller.epsilon must be nonnegative");
    check(cfg.adaptation.tau > 0.0, "adaptation.tau must be positive");

    const bool has_g = cfg.adaptation.gamma.has_value();
    const bool has_gp = cfg.adaptation.gamma_prime.has_value();
    check(has_g != has_gp, "exactly one of adaptation.gamma and adaptation.gamma_prime is required");
    if (has_g) check(*cfg.adaptation.gamma > 0.0, "adaptation.gamma must be positive");
    if (has_gp) check(*cfg.adaptation.gamma_prime > 0.0, "adaptation.gamma_prime must be positive");

    // law/controller pairing
    const Law law = cfg.adaptation.law;
    switch (law) {
        case Law::integral:
            check(cfg.controller == Controller::integral_ce,
                  "the integral law pairs with the integral_ce controller");
            break;
        case Law::incremental:
        case Law::saturated_incremental:
            check(cfg.controller == Controller::incremental_ce,
                  "incremental and saturated laws pair with the incremental_ce controller");
            break;
        case Law::forward_incremental:
            check(cfg.controller == Controller::open_loop_aug,
                  "the forward law pairs with the open_loop_aug controller");
            break;
        case Law::robust_incremental:
            check(cfg.controller == Controller::robust_dead_zone,
                  "the robust law pairs with the robust_dead_zone controller");
            break;
    }
    if (cfg.controller == Controller::robust_dead_zone)
        check(cfg.plant_kind == PlantKind::siso ||
                  cfg.disturbance.kind != DisturbanceSpec::Kind::none,
              "the robust controller requires a siso plant or a scalar plant with a disturbance");
    if (cfg.adaptation.epsilon > 0.0)
        check(law == Law::robust_incremental, "controller.epsilon requires the robust law");

    const std::size_t p = cfg.estimate_dim();
    check(cfg.adaptation.theta_hat0.size() == p,
          "adaptation.theta_hat0 must have one entry per estimated parameter (" +
              std::to_string(p) + ")");
    if (law == Law::saturated_incremental) {
        check(cfg.adaptation.sat_lo.size() == p && cfg.adaptation.sat_hi.size() == p,
              "the saturated law requires sat_lo and sat_hi with one entry per parameter");
        if (cfg.adaptation.sat_lo.size() == p && cfg.adaptation.sat_hi.size() == p)
            for (std::size_t i = 0; i < p; ++i)
                check(cfg.adaptation.sat_lo[i] < cfg.adaptation.sat_hi[i],
                      "sat_lo must be strictly below sat_hi componentwise");
    } else {
        check(cfg.adaptation.sat_lo.empty() && cfg.adaptation.sat_hi.empty(),
              "saturation box is only valid for the saturated_incremental law");
    }

    check(cfg.integrator.h > 0.0, "integrator.h must be positive");
    check(cfg.integrator.t_final >= 0.0, "integrator.t_final must be nonnegative");
    if (cfg.integrator.t_final > 0.0)
        check(cfg.integrator.t_final >= 10.0 * cfg.adaptation.tau - 1e-12,
              "integrator.t_final must be at least 10*tau (or 0 for a single-record run)");
    if (cfg.integrator.h > 0.0 && cfg.integrator.t_final > 0.0) {
        const double ratio = cfg.integrator.t_final / cfg.integrator.h;
        check(std::abs(ratio - std::round(ratio)) <= 1e-6 * std::max(1.0, ratio),
              "integrator.t_final must be a whole number of steps");
    }
    check(cfg.integrator.record_stride >= 1, "integrator.record_stride must be at least 1");
    if (cfg.adaptation.tau > 0.0 && cfg.integrator.h > 0.0) {
        const double ratio = cfg.adaptation.tau / cfg.integrator.h;
        check(std::abs(ratio - std::round(ratio)) <= 1e-6 * std::max(1.0, ratio) && ratio >= 0.5,
              "adaptation.tau must be an integer multiple of integrator.h");
    }

    check(cfg.disturbance.amplitude >= 0.0, "disturbance.amplitude must be nonnegative");
    if (cfg.plant_kind == PlantKind::siso &&
        cfg.disturbance.kind != DisturbanceSpec::Kind::none)
        check(cfg.disturbance.amplitude <= cfg.siso.wbar + 1e-12,
              "disturbance.amplitude must not exceed plant.wbar");
    if (cfg.disturbance.hold != 0.0)
        check(cfg.disturbance.hold > 0.0, "disturbance.hold must be positive when set");

    check(cfg.tolerances.tol_window > 0.0, "tolerances.tol_window must be positive");
    check(cfg.tolerances.tol_g > 0.0, "tolerances.tol_g must be positive");
    check(cfg.tolerances.tol_L_rel > 0.0, "tolerances.tol_L_rel must be positive");
    check(cfg.tolerances.tol_dL > 0.0, "tolerances.tol_dL must be positive");
    check(cfg.tolerances.tol_settle > 0.0, "tolerances.tol_settle must be positive");
    check(cfg.tolerances.growth_factor > 1.0, "tolerances.growth_factor must exceed 1");

    if (!errs.empty()) {
        std::string all = "scenario validation failed:";
        for (const std::string& e : errs) all += "\n  - " + e;
        throw ConfigError(all);
    }
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::string out;
    auto line = [&out](const std::string& k, const std::string& v) {
        out += k + " = " + v + "\n";
    };

    out += "[scenario]\n";
    line("name", cfg.name);

    out += "\n[plant]\n";
    line("kind", enum_name(cfg.plant_kind, kPlantKinds));
    line("b", fmt_double(cfg.b()));
    if (cfg.plant_kind == PlantKind::scalar) {
        line("theta0", fmt_vec(cfg.scalar.theta0));
        line("regressor", cfg.scalar.regressor);
        line("constant_reference", cfg.constant_reference ? "true" : "false");
    } else {
        line("n", std::to_string(cfg.siso.n));
        line("a", fmt_vec(cfg.siso.a));
        {
            std::string names;
            for (std::size_t i = 0; i < cfg.siso.nonlinearities.size(); ++i) {
                if (i) names += ", ";
                names += cfg.siso.nonlinearities[i];
            }
            line("nonlinearities", names);
        }
        line("wbar", fmt_double(cfg.siso.wbar));
        line("lambda", fmt_double(cfg.siso.lambda));
    }
    if (cfg.x0) line("x0", fmt_vec(*cfg.x0));

    out += "\n[reference]\n";
    line("kind", enum_name(cfg.reference.kind(), kReferenceKinds));
    if (cfg.reference.is_constant()) {
        line("value", fmt_double(cfg.reference.amplitude()));
    } else {
        line("amplitude", fmt_double(cfg.reference.amplitude()));
        line("omega", fmt_double(cfg.reference.omega()));
    }

    out += "\n[controller]\n";
    line("kind", enum_name(cfg.controller, kControllers));
    line("kappa", fmt_double(cfg.kappa));
    if (cfg.adaptation.epsilon != 0.0) line("epsilon", fmt_double(cfg.adaptation.epsilon));
    if (cfg.strict_printed_form) line("strict_form", "true");
    if (cfg.wbar_b) line("wbar_b", fmt_double(*cfg.wbar_b));

    out += "\n[adaptation]\n";
    line("law", enum_name(cfg.adaptation.law, kLaws));
    if (cfg.adaptation.gamma) line("gamma", fmt_double(*cfg.adaptation.gamma));
    if (cfg.adaptation.gamma_prime) line("gamma_prime", fmt_double(*cfg.adaptation.gamma_prime));
    line("tau", fmt_double(cfg.adaptation.tau));
    line("theta_hat0", fmt_vec(cfg.adaptation.theta_hat0));
    if (!cfg.adaptation.sat_lo.empty()) line("sat_lo", fmt_vec(cfg.adaptation.sat_lo));
    if (!cfg.adaptation.sat_hi.empty()) line("sat_hi", fmt_vec(cfg.adaptation.sat_hi));

    out += "\n[integrator]\n";
    line("method", enum_name(cfg.integrator.method, kMethods));
    line("h", fmt_double(cfg.integrator.h));
    line("t_final", fmt_double(cfg.integrator.t_final));
    line("record_stride", std::to_string(cfg.integrator.record_stride));

    out += "\n[disturbance]\n";
    line("kind", enum_name(cfg.disturbance.kind, kDisturbanceKinds));
    line("amplitude", fmt_double(cfg.disturbance.amplitude));
    if (cfg.disturbance.kind == DisturbanceSpec::Kind::sinusoid)
        line("omega", fmt_double(cfg.disturbance.omega));
    if (cfg.disturbance.kind == DisturbanceSpec::Kind::seeded_bounded_noise)
        line("seed", std::to_string(cfg.disturbance.seed));
    if (cfg.disturbance.hold != 0.0) line("hold", fmt_double(cfg.disturbance.hold));

    out += "\n[tolerances]\n";
    line("tol_window", fmt_double(cfg.tolerances.tol_window));
    line("tol_g", fmt_double(cfg.tolerances.tol_g));
    line("tol_L_rel", fmt_double(cfg.tolerances.tol_L_rel));
    line("tol_dL", fmt_double(cfg.tolerances.tol_dL));
    line("tol_settle", fmt_double(cfg.tolerances.tol_settle));
    line("growth_factor", fmt_double(cfg.tolerances.growth_factor));
    if (cfg.tolerances.bound_M) line("bound_M", fmt_double(*cfg.tolerances.bound_M));
    if (cfg.tolerances.theta_energy_bound)
        line("theta_energy_bound", fmt_double(*cfg.tolerances.theta_energy_bound));

    out += "\n[monitors]\n";
    line("functional_monotone", cfg.monitors.functional_monotone ? "true" : "false");
    line("window_decay", cfg.monitors.window_decay ? "true" : "false");
    line("differential_bound", cfg.monitors.differential_bound ? "true" : "false");
    line("barbalat", cfg.monitors.barbalat ? "true" : "false");
    line("boundedness_growth", cfg.monitors.boundedness_growth ? "true" : "false");
    line("settling", cfg.monitors.settling ? "true" : "false");
    line("vdot_structural", cfg.monitors.vdot_structural ? "true" : "false");
    return out;
}

ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dotpos = assignment.find('.');
    if (eq == std::string::npos || dotpos == std::string::npos || dotpos > eq)
        throw ConfigError("override must look like section.key=value, got '" + assignment + "'");
    const std::string section = trim(assignment.substr(0, dotpos));
    const std::string key = trim(assignment.substr(dotpos + 1, eq - dotpos - 1));
    const std::string value = trim(assignment.substr(eq + 1));
    if (section.empty() || key.empty())
        throw ConfigError("override must look like section.key=value, got '" + assignment + "'");

    std::string text = serialize_config(cfg);
    std::stringstream in(text);
    std::string out, line, cur_section;
    bool replaced = false;
    bool section_seen = false;
    while (std::getline(in, line)) {
        std::string stripped = trim(line);
        if (!stripped.empty() && stripped.front() == '[' && stripped.back() == ']') {
            // insert a brand-new key at the end of its section
            if (cur_section == section && !replaced) {
                out += key + " = " + value + "\n";
                replaced = true;
            }
            cur_section = trim(stripped.substr(1, stripped.size() - 2));
            if (cur_section == section) section_seen = true;
        } else if (cur_section == section) {
            const auto line_eq = stripped.find('=');
            if (line_eq != std::string::npos && trim(stripped.substr(0, line_eq)) == key) {
                out += key + " = " + value + "\n";
                replaced = true;
                continue;
            }
            // switching between the two gain spellings replaces the other one
            if (section == "adaptation" && (key == "gamma" || key == "gamma_prime")) {
                const std::string other = key == "gamma" ? "gamma_prime" : "gamma";
                if (line_eq != std::string::npos && trim(stripped.substr(0, line_eq)) == other)
                    continue;
            }
        }
        out += line + "\n";
    }
    if (!replaced) {
        if (!section_seen) out += "\n[" + section + "]\n";
        out += key + " = " + value + "\n";
    }
    return parse_config_text(out, /*validate=*/false);
}

ScenarioConfig default_scalar_scenario() {
    ScenarioConfig cfg;
    cfg.name = "default_scalar";
    cfg.plant_kind = PlantKind::scalar;
    cfg.scalar.theta0 = {2.0, -1.0};
    cfg.scalar.b = 1.0;
    cfg.scalar.regressor = "sincos";
    cfg.reference = ReferenceTrajectory::sinusoid(1.0, 1.0);
    cfg.constant_reference = false;
    cfg.controller = Controller::incremental_ce;
    cfg.kappa = 2.0;
    cfg.adaptation.law = Law::incremental;
    cfg.adaptation.gamma_prime = 1.0;
    cfg.adaptation.tau = 0.1;
    cfg.adaptation.kappa = cfg.kappa;
    cfg.adaptation.theta_hat0.assign(3, 0.0);
    cfg.integrator.method = Method::rk4;
    cfg.integrator.h = 1e-3;
    cfg.integrator.t_final = 100.0;
    cfg.integrator.record_stride = 10;
    return cfg;
}

ScenarioConfig default_robust_scenario() {
    ScenarioConfig cfg;
    cfg.name = "default_robust";
    cfg.plant_kind = PlantKind::siso;
    cfg.siso.n = 2;
    cfg.siso.a = {1.0};
    cfg.siso.b = 1.0;
    cfg.siso.nonlinearities = {"sin_y_bounded_dy"};
    cfg.siso.wbar = 0.3;
    cfg.siso.lambda = 2.0;
    cfg.reference = ReferenceTrajectory::sinusoid(1.0, 1.0);
    cfg.controller = Controller::robust_dead_zone;
    cfg.kappa = 2.0;
    cfg.adaptation.law = Law::robust_incremental;
    cfg.adaptation.gamma_prime = 1.0;
    cfg.adaptation.tau = 0.1;
    cfg.adaptation.kappa = cfg.kappa;
    cfg.adaptation.epsilon = 0.1;
    cfg.adaptation.theta_hat0.assign(2, 0.0);
    cfg.integrator.method = Method::rk4;
    cfg.integrator.h = 1e-3;
    cfg.integrator.t_final = 100.0;
    cfg.integrator.record_stride = 10;
    cfg.disturbance.kind = DisturbanceSpec::Kind::sinusoid;
    cfg.disturbance.amplitude = 0.3;
    cfg.disturbance.omega = 5.0;
    // the dead-zone switching kinks put an h^2-scale noise floor under the
    // functional-monotonicity margin; the scalar default keeps the tight bound
    cfg.tolerances.tol_L_rel = 1e-3;
    // inside the dead zone the control is off, so the disturbance keeps
    // producing grazing exits whose updates let the estimate wander (bounded,
    // per the windowed certificates, but not settled by t_final)
    cfg.monitors.boundedness_growth = false;
    return cfg;
}

}  // namespace incadapt
