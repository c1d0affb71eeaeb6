#include "core/registry.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "core/errors.hpp"

namespace incadapt {

namespace {

struct Tables {
    std::map<std::string, Regressor> regressors;
    std::map<std::string, Nonlinearity> nonlinearities;
    std::mutex mutex;

    Tables() {
        add_builtin_regressors();
        add_builtin_nonlinearities();
    }

    void add_builtin_regressors() {
        regressors["sincos"] = Regressor{
            "sincos", 2, std::sqrt(2.0),
            [](double, std::span<const double> x, std::span<double> out) {
                out[0] = std::sin(x[0]);
                out[1] = std::cos(x[0]);
            }};
        // x/(1+x^2) peaks at 1/2, so the norm never exceeds sqrt(1.25).
        regressors["bounded_rational"] = Regressor{
            "bounded_rational", 2, std::sqrt(1.25),
            [](double, std::span<const double> x, std::span<double> out) {
                out[0] = x[0] / (1.0 + x[0] * x[0]);
                out[1] = 1.0;
            }};
        regressors["tanh"] = Regressor{
            "tanh", 1, 1.0,
            [](double, std::span<const double> x, std::span<double> out) { out[0] = std::tanh(x[0]); }};
        regressors["one"] = Regressor{
            "one", 1, 1.0,
            [](double, std::span<const double>, std::span<double> out) { out[0] = 1.0; }};
        // Unbounded family; scenarios using it are outside the bounded-regressor
        // assumptions and are accepted as-is.
        regressors["linear"] = Regressor{
            "linear", 1, std::nullopt,
            [](double, std::span<const double> x, std::span<double> out) { out[0] = x[0]; }};
    }

    void add_builtin_nonlinearities() {
        nonlinearities["sin_y"] = Nonlinearity{
            "sin_y", 1.0, [](double, std::span<const double> x) { return std::sin(x[0]); }};
        nonlinearities["cos_y"] = Nonlinearity{
            "cos_y", 1.0, [](double, std::span<const double> x) { return std::cos(x[0]); }};
        // sin(y) * y'/(1+y'^2): globally bounded by 1/2.
        nonlinearities["sin_y_bounded_dy"] = Nonlinearity{
            "sin_y_bounded_dy", 0.5, [](double, std::span<const double> x) {
                const double dy = x.size() > 1 ? x[1] : 0.0;
                return std::sin(x[0]) * dy / (1.0 + dy * dy);
            }};
        nonlinearities["tanh_dy"] = Nonlinearity{
            "tanh_dy", 1.0, [](double, std::span<const double> x) {
                return std::tanh(x.size() > 1 ? x[1] : 0.0);
            }};
    }
};

Tables& tables() {
    static Tables t;
    return t;
}

}  // namespace

const Regressor& find_regressor(const std::string& name) {
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    auto it = t.regressors.find(name);
    if (it == t.regressors.end()) throw ConfigError("unknown regressor '" + name + "'");
    return it->second;
}

const Nonlinearity& find_nonlinearity(const std::string& name) {
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    auto it = t.nonlinearities.find(name);
    if (it == t.nonlinearities.end()) throw ConfigError("unknown nonlinearity '" + name + "'");
    return it->second;
}

bool has_regressor(const std::string& name) {
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    return t.regressors.count(name) > 0;
}

bool has_nonlinearity(const std::string& name) {
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    return t.nonlinearities.count(name) > 0;
}

void register_regressor(Regressor r) {
    if (r.name.empty() || r.dim == 0 || !r.eval)
        throw ConfigError("regressor registration requires a name, dim > 0 and an evaluator");
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    t.regressors[r.name] = std::move(r);
}

void register_nonlinearity(Nonlinearity n) {
    if (n.name.empty() || !n.eval)
        throw ConfigError("nonlinearity registration requires a name and an evaluator");
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    t.nonlinearities[n.name] = std::move(n);
}

std::vector<std::string> regressor_names() {
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    std::vector<std::string> out;
    for (auto& [k, v] : t.regressors) out.push_back(k);
    return out;
}

std::vector<std::string> nonlinearity_names() {
    auto& t = tables();
    std::lock_guard lock(t.mutex);
    std::vector<std::string> out;
    for (auto& [k, v] : t.nonlinearities) out.push_back(k);
    return out;
}

Vec eval_regressor(const std::string& name, double t, std::span<const double> x) {
    const Regressor& reg = find_regressor(name);
    Vec out(reg.dim);
    reg.eval(t, x, out);
    return out;
}

}  // namespace incadapt
