#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/adaptation.hpp"
#include "core/control.hpp"
#include "core/plant.hpp"
#include "core/vec.hpp"

namespace incadapt {

enum class PlantKind { scalar, siso };
enum class Method { rk4, euler };

struct IntegratorConfig {
    Method method = Method::rk4;
    double h = 1e-3;
    double t_final = 10.0;
    int record_stride = 1;
};

struct ToleranceConfig {
    double tol_window = 1e-4;   ///< windowed integral of V at t_final
    double tol_g = 1e-2;        ///< tail bound on the monitored function
    double tol_L_rel = 1e-6;    ///< functional monotonicity slack, relative to L(t0)
    double tol_dL = 1e-3;       ///< slack of the differential damping bound
    double tol_settle = 1e-2;   ///< settling band on the error signal
    double growth_factor = 2.0; ///< derivative-energy growth flag threshold
    std::optional<double> bound_M;             ///< fixed bound on window'd gdot^2, if prescribed
    std::optional<double> theta_energy_bound;  ///< cap on the windowed estimate energy
};

struct MonitorConfig {
    bool functional_monotone = true;
    bool window_decay = true;
    bool differential_bound = true;
    bool barbalat = true;
    bool boundedness_growth = true;
    bool settling = false;
    bool vdot_structural = false;  ///< bounded-derivative route, used by saturated-law runs
};

/// Complete description of one closed-loop experiment.
struct ScenarioConfig {
    std::string name = "scenario";

    PlantKind plant_kind = PlantKind::scalar;
    ScalarPlantParams scalar;
    SisoPlantParams siso;
    std::optional<Vec> x0;            ///< defaults to the reference state at t = 0
    bool constant_reference = false;  ///< skip the reference-rate regressor augmentation

    ReferenceTrajectory reference = ReferenceTrajectory::constant(0.0);

    Controller controller = Controller::incremental_ce;
    double kappa = 1.0;
    bool strict_printed_form = false;
    std::optional<double> wbar_b;  ///< override of wbar/|b| for the robust controller

    AdaptationConfig adaptation;

    IntegratorConfig integrator;
    DisturbanceSpec disturbance;
    ToleranceConfig tolerances;
    MonitorConfig monitors;

    int n() const { return plant_kind == PlantKind::scalar ? 1 : siso.n; }
    double b() const { return plant_kind == PlantKind::scalar ? scalar.b : siso.b; }
    int b_sign() const { return b() >= 0.0 ? 1 : -1; }

    /// Dimension of the estimate vector (regressor dim plus the reference-rate
    /// entry when augmented; nonlinearity count plus one for the siso family).
    std::size_t estimate_dim() const;
    bool augmented() const;

    /// True parameters in controller coordinates, for diagnostics.
    TrueParameters true_parameters() const;

    double resolved_gamma() const { return resolve_gain(adaptation); }
    double resolved_wbar_b() const;
    Vec initial_state() const;
};

/// Parses the sectioned key = value scenario format. Unknown keys and
/// malformed values are errors; all validation failures are reported at once.
/// `validate` runs the full cross-field validation after parsing.
ScenarioConfig parse_config_text(const std::string& text, bool validate = true);
ScenarioConfig parse_config_file(const std::string& path);

/// Applies "section.key=value" onto serialized form and re-parses. Cross-field
/// validation is deferred so related keys can be overridden one at a time.
ScenarioConfig apply_override(const ScenarioConfig& cfg, const std::string& assignment);

/// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

/// Full cross-field validation; throws ConfigError listing every violation.
void validate_config(const ScenarioConfig& cfg);

/// Desk-scale scalar scenario used throughout the test suites.
ScenarioConfig default_scalar_scenario();

/// Desk-scale robust scenario: order-2 siso plant with a sinusoidal
/// disturbance under the dead-zone law.
ScenarioConfig default_robust_scenario();

}  // namespace incadapt
