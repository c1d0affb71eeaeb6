#pragma once

#include <string>

#include "core/analysis.hpp"
#include "core/errors.hpp"
#include "core/scenario.hpp"
#include "core/simulate.hpp"

namespace incadapt {

struct RunResult {
    ScenarioConfig cfg;
    Trace trace;
    MonitorReport report;
};

/// simulate + analyze.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Writes the trajectory CSV: header
///   t,x1..xn,yd,e1..en,ef,eps,iota,sigma,e_eps,u,w,th1..thp,V,L,winV,winTh,winU
/// with 17 significant digits, '.' decimal separator and LF line endings;
/// every record_stride-th grid point plus the final one.
void write_trajectory_csv(const std::string& path, const ScenarioConfig& cfg, const Trace& tr,
                          const MonitorReport& rep);

std::string report_text(const ScenarioConfig& cfg, const MonitorReport& rep);

/// Runs one scenario and writes trajectory.csv + report.txt under out_dir.
/// Returns ok, or monitor_failure when an enabled monitor fails.
Status cmd_run(const ScenarioConfig& cfg, const std::string& out_dir);

/// Grid spec: "param=v1,v2,...[;param=...]" over gamma_prime, tau, kappa,
/// epsilon. Every grid point is validated before any run starts; points run
/// concurrently on `jobs` threads and summary.csv is written in grid order.
Status cmd_sweep(const ScenarioConfig& base, const std::string& grid_spec,
                 const std::string& out_dir, int jobs);

/// Runs two scenarios on identical grids and writes compare.txt.
Status cmd_compare(const ScenarioConfig& a, const ScenarioConfig& b, const std::string& out_dir);

/// family: exponential | rational_decay | bump_train | from_run:<run dir>.
/// Exit ok iff the monitor verdicts match the family's expected profile.
Status cmd_verify_lemma(const std::string& family, const std::string& out_dir);

/// Maps any thrown library error onto its exit status.
Status status_of(const std::exception& e);

}  // namespace incadapt
