#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/registry.hpp"
#include "core/vec.hpp"

namespace incadapt {

/// Scalar uncertain plant: xdot = theta0^T phi(t,x) + b u (+ w).
struct ScalarPlantParams {
    Vec theta0;             ///< true parameters, dimension = regressor dim
    double b = 1.0;         ///< control gain, nonzero; only its sign is used by the controller
    std::string regressor;  ///< registered regressor name
};

/// Order-n SISO plant in companion form:
///   x_i' = x_{i+1},  x_n' = -sum_i a_i Y_i(t,x) + b u + w,  y = x_1.
struct SisoPlantParams {
    int n = 1;
    Vec a;                                    ///< unknown coefficients, one per nonlinearity
    double b = 1.0;                           ///< control gain, nonzero
    std::vector<std::string> nonlinearities;  ///< registered Y_i names
    double wbar = 0.0;                        ///< bound on the lumped disturbance w
    double lambda = 1.0;                      ///< filter pole, > 0
};

/// Desired output together with its first n derivatives at any t >= 0.
class ReferenceTrajectory {
public:
    enum class Kind { constant, sinusoid };

    static ReferenceTrajectory constant(double value);
    static ReferenceTrajectory sinusoid(double amplitude, double omega);

    /// Fills out[k] = y_d^(k)(t) for k = 0..out.size()-1.
    void eval(double t, std::span<double> out) const;
    double value(double t) const;
    double derivative(double t) const;  ///< y_d'(t)

    Kind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    double omega() const { return omega_; }
    bool is_constant() const { return kind_ == Kind::constant; }

private:
    Kind kind_ = Kind::constant;
    double amplitude_ = 0.0;  // constant value when kind == constant
    double omega_ = 0.0;
};

/// Bounded disturbance generator. Samples are a pure function of (spec, t);
/// the seeded kind is piecewise constant over [k*hold, (k+1)*hold).
struct DisturbanceSpec {
    enum class Kind { none, sinusoid, seeded_bounded_noise };
    Kind kind = Kind::none;
    double amplitude = 0.0;  ///< hard clamp: |w(t)| <= amplitude
    double omega = 1.0;      ///< sinusoid frequency
    std::uint64_t seed = 0;
    double hold = 0.0;       ///< hold interval for the seeded kind (the integrator step)
};

double disturbance_sample(const DisturbanceSpec& d, double t);

/// theta0^T phi(t,x) + b u; throws NumericFault on non-finite intermediates.
double scalar_dynamics(const ScalarPlantParams& p, double t, double x, double u);

/// Companion-form derivative; |w| must not exceed p.wbar.
Vec siso_dynamics(const SisoPlantParams& p, double t, std::span<const double> x, double u, double w);

/// Collapses the order-n error state to the scalar (d/dt + lambda)^(n-1) e_1,
/// i.e. sum_k C(n-1,k) lambda^(n-1-k) e_{k+1}.
double filtered_error(std::span<const double> e, double lambda);

/// nu = [0 Lambda^T] e - y_d^(n) with Lambda_j = C(n-1,j-1) lambda^(n-j).
/// For n = 1 this reduces to -y_d'.
double nu_term(std::span<const double> e, double lambda, double ydn);

double binomial(int n, int k);

}  // namespace incadapt
