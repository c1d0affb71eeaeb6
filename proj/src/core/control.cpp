#include "core/control.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace incadapt {

DeadZoneState dead_zone(double e_f, double epsilon) {
    if (epsilon < 0.0) throw ConfigError("dead zone width must be nonnegative");
    DeadZoneState dz;
    dz.epsilon = epsilon;
    if (std::abs(e_f) > epsilon) {
        dz.iota = 1;
        dz.sigma = e_f > 0.0 ? 1 : -1;
        dz.e_eps = std::abs(e_f) - epsilon;
    }
    return dz;
}

double certainty_equiv_control(int b_sign, double kappa, double e, const Vec& theta_hat,
                               const Vec& phi) {
    return -static_cast<double>(b_sign) * kappa * e - dot(theta_hat, phi);
}

double open_loop_aug_control(int b_sign, double kappa, double gamma, double e,
                             const Vec& theta_hat, const Vec& phi) {
    const double u1 = -0.5 * static_cast<double>(b_sign) * gamma * norm2_sq(phi) * e;
    return certainty_equiv_control(b_sign, kappa, e, theta_hat, phi) + u1;
}

double robust_control(int b_sign, double kappa, double wbar_b, const DeadZoneState& dz,
                      const Vec& theta_hat, const Vec& phi, bool strict_printed_form) {
    const double s = static_cast<double>(b_sign);
    const double gate = strict_printed_form ? static_cast<double>(dz.iota)
                                            : static_cast<double>(dz.sigma);
    return -s * kappa * dz.e_eps * static_cast<double>(dz.sigma) - s * wbar_b * gate -
           dot(theta_hat, phi) * static_cast<double>(dz.iota);
}

}  // namespace incadapt
