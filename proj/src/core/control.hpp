#pragma once

#include "core/vec.hpp"

namespace incadapt {

enum class Controller {
    integral_ce,      ///< certainty-equivalence pair of the integral law
    incremental_ce,   ///< same form, paired with the (saturated) incremental law
    open_loop_aug,    ///< adds the auxiliary input that pairs with the forward law
    robust_dead_zone, ///< dead-zone gated robust form
};

/// Dead-zone gate state for a filtered error at width epsilon.
/// iota = 1 iff |e_f| > epsilon; sigma = sgn(e_f) * iota;
/// e_eps = (|e_f| - epsilon) * iota >= 0. The boundary |e_f| = epsilon
/// belongs to the dead zone.
struct DeadZoneState {
    double epsilon = 0.0;
    int iota = 0;
    int sigma = 0;
    double e_eps = 0.0;
};

DeadZoneState dead_zone(double e_f, double epsilon);

/// u = -sgn(b) kappa e - theta_hat^T phi.
double certainty_equiv_control(int b_sign, double kappa, double e, const Vec& theta_hat,
                               const Vec& phi);

/// Certainty-equivalence control plus u1 = -1/2 sgn(b) gamma (phi^T phi) e.
/// u1 exactly cancels the squared-increment term the forward recursion
/// injects into the functional derivative.
double open_loop_aug_control(int b_sign, double kappa, double gamma, double e,
                             const Vec& theta_hat, const Vec& phi);

/// u = -sgn(b) kappa e_eps sigma - sgn(b) wbar_b sigma - theta_hat^T phi iota.
/// The disturbance-rejection term is gated by sigma rather than the printed
/// iota; with iota the damping inequality fails for e_f < -epsilon.
/// strict_printed_form restores the iota gating for side-by-side runs.
double robust_control(int b_sign, double kappa, double wbar_b, const DeadZoneState& dz,
                      const Vec& theta_hat, const Vec& phi, bool strict_printed_form = false);

}  // namespace incadapt
