#include "core/plant.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace incadapt {

ReferenceTrajectory ReferenceTrajectory::constant(double value) {
    ReferenceTrajectory r;
    r.kind_ = Kind::constant;
    r.amplitude_ = value;
    return r;
}

ReferenceTrajectory ReferenceTrajectory::sinusoid(double amplitude, double omega) {
    ReferenceTrajectory r;
    r.kind_ = Kind::sinusoid;
    r.amplitude_ = amplitude;
    r.omega_ = omega;
    return r;
}

void ReferenceTrajectory::eval(double t, std::span<double> out) const {
    if (kind_ == Kind::constant) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = k == 0 ? amplitude_ : 0.0;
        return;
    }
    // d^k/dt^k [A sin(w t)] = A w^k sin(w t + k pi/2)
    double wk = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = amplitude_ * wk * std::sin(omega_ * t + 0.5 * M_PI * static_cast<double>(k));
        wk *= omega_;
    }
}

double ReferenceTrajectory::value(double t) const {
    double v;
    eval(t, std::span<double>(&v, 1));
    return v;
}

double ReferenceTrajectory::derivative(double t) const {
    double v[2];
    eval(t, v);
    return v[1];
}

namespace {

// splitmix64; stateless hash of (seed, counter) -> uniform double in [0, 1).
double hash_unit(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace

double disturbance_sample(const DisturbanceSpec& d, double t) {
    double w = 0.0;
    switch (d.kind) {
        case DisturbanceSpec::Kind::none:
            return 0.0;
        case DisturbanceSpec::Kind::sinusoid:
            w = d.amplitude * std::sin(d.omega * t);
            break;
        case DisturbanceSpec::Kind::seeded_bounded_noise: {
            const double hold = d.hold > 0.0 ? d.hold : 1.0;
            const auto k = static_cast<std::uint64_t>(std::floor(t / hold + 1e-12));
            w = d.amplitude * (2.0 * hash_unit(d.seed, k) - 1.0);
            break;
        }
    }
    if (w > d.amplitude) w = d.amplitude;
    if (w < -d.amplitude) w = -d.amplitude;
    return w;
}

double scalar_dynamics(const ScalarPlantParams& p, double t, double x, double u) {
    const Vec phi = eval_regressor(p.regressor, t, std::span<const double>(&x, 1));
    const double drift = dot(p.theta0, phi);
    const double dx = drift + p.b * u;
    if (!std::isfinite(dx))
        throw NumericFault("scalar_dynamics produced a non-finite derivative at t=" + std::to_string(t));
    return dx;
}

Vec siso_dynamics(const SisoPlantParams& p, double t, std::span<const double> x, double u, double w) {
    if (static_cast<int>(x.size()) != p.n)
        throw ConfigError("siso_dynamics: state dimension does not match plant order");
    if (std::abs(w) > p.wbar + 1e-15)
        throw ConfigError("siso_dynamics: |w| exceeds the declared disturbance bound");
    Vec dx(p.n);
    for (int i = 0; i + 1 < p.n; ++i) dx[i] = x[i + 1];
    double top = p.b * u + w;
    for (std::size_t i = 0; i < p.nonlinearities.size(); ++i)
        top -= p.a[i] * find_nonlinearity(p.nonlinearities[i]).eval(t, x);
    dx[p.n - 1] = top;
    if (!all_finite(dx))
        throw NumericFault("siso_dynamics produced a non-finite derivative at t=" + std::to_string(t));
    return dx;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

double filtered_error(std::span<const double> e, double lambda) {
    const int n = static_cast<int>(e.size());
    double ef = 0.0;
    for (int k = 0; k < n; ++k)
        ef += binomial(n - 1, k) * std::pow(lambda, static_cast<double>(n - 1 - k)) * e[k];
    return ef;
}

double nu_term(std::span<const double> e, double lambda, double ydn) {
    const int n = static_cast<int>(e.size());
    double acc = 0.0;
    for (int j = 1; j < n; ++j)
        acc += binomial(n - 1, j - 1) * std::pow(lambda, static_cast<double>(n - j)) * e[j];
    return acc - ydn;
}

}  // namespace incadapt
