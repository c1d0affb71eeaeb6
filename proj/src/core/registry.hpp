#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/vec.hpp"

namespace incadapt {

/// Vector of known nonlinearities multiplying the unknown parameters.
/// Evaluators are pure functions of (t, x); `bound`, when set, is a global
/// bound on the Euclidean norm of the output.
struct Regressor {
    std::string name;
    std::size_t dim = 0;
    std::optional<double> bound;
    std::function<void(double t, std::span<const double> x, std::span<double> out)> eval;
};

/// Scalar nonlinearity Y(t, x) for the order-n plant family.
struct Nonlinearity {
    std::string name;
    std::optional<double> bound;
    std::function<double(double t, std::span<const double> x)> eval;
};

/// Looks up a registered regressor; throws ConfigError for unknown names.
const Regressor& find_regressor(const std::string& name);
const Nonlinearity& find_nonlinearity(const std::string& name);

bool has_regressor(const std::string& name);
bool has_nonlinearity(const std::string& name);

/// Registers a custom evaluator (replaces an existing entry with the same
/// name). Registration is serialized; evaluators themselves must be pure.
void register_regressor(Regressor r);
void register_nonlinearity(Nonlinearity n);

std::vector<std::string> regressor_names();
std::vector<std::string> nonlinearity_names();

/// Convenience: evaluate a registered regressor by name.
Vec eval_regressor(const std::string& name, double t, std::span<const double> x);

}  // namespace incadapt
