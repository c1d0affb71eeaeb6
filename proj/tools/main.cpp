// incadapt command-line driver. Talks to the library through the C API only.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "incadapt/incadapt.h"

namespace {

int report_failure(incadapt_status st) {
    const char* msg = incadapt_last_error();
    if (st != INCADAPT_OK && msg && msg[0] != '\0')
        std::fprintf(stderr, "incadapt: %s\n", msg);
    else if (st == INCADAPT_ERR_MONITOR)
        std::fprintf(stderr, "incadapt: a configured monitor failed (see report.txt)\n");
    return static_cast<int>(st);
}

struct ScenarioHandle {
    incadapt_scenario* ptr = nullptr;
    ~ScenarioHandle() { incadapt_scenario_free(ptr); }
};

incadapt_status load_scenario(const std::string& path, const std::vector<std::string>& overrides,
                              long long seed, bool seed_set, ScenarioHandle& out) {
    incadapt_status st = incadapt_scenario_parse_file(path.c_str(), &out.ptr);
    if (st != INCADAPT_OK) return st;
    for (const std::string& ov : overrides) {
        st = incadapt_scenario_override(out.ptr, ov.c_str());
        if (st != INCADAPT_OK) return st;
    }
    if (seed_set) {
        const std::string ov = "disturbance.seed=" + std::to_string(seed);
        st = incadapt_scenario_override(out.ptr, ov.c_str());
    }
    return st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incremental adaptive control simulation lab"};
    app.require_subcommand(1);

    std::vector<std::string> configs;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::string grid;
    std::string family;
    int jobs = 1;
    long long seed = 0;

    auto add_common = [&](CLI::App* cmd, int config_count) {
        if (config_count > 0)
            cmd->add_option("--config", configs, "scenario file(s)")
                ->required()
                ->expected(config_count);
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--override", overrides, "section.key=value (repeatable)");
        cmd->add_option("--seed", seed, "override disturbance.seed");
    };

    CLI::App* run = app.add_subcommand("run", "simulate one scenario and write trajectory/report");
    add_common(run, 1);

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid of scenarios");
    add_common(sweep, 1);
    sweep->add_option("--grid", grid, "param=v1,v2,...[;param=...] over gamma_prime, tau, kappa, epsilon")
        ->required();
    sweep->add_option("--jobs", jobs, "concurrent runs");

    CLI::App* compare = app.add_subcommand("compare", "run two scenarios on one grid and diff them");
    add_common(compare, 2);

    CLI::App* verify = app.add_subcommand("verify-lemma", "windowed-convergence monitor families");
    verify->add_option("--family", family,
                       "exponential | rational_decay | bump_train | from_run:<run dir>")
        ->required();
    verify->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);
    const bool seed_set =
        run->count("--seed") + sweep->count("--seed") + compare->count("--seed") > 0;

    if (run->parsed()) {
        ScenarioHandle s;
        incadapt_status st = load_scenario(configs[0], overrides, seed, seed_set, s);
        if (st != INCADAPT_OK) return report_failure(st);
        return report_failure(incadapt_cmd_run(s.ptr, out_dir.c_str()));
    }
    if (sweep->parsed()) {
        ScenarioHandle s;
        incadapt_status st = load_scenario(configs[0], overrides, seed, seed_set, s);
        if (st != INCADAPT_OK) return report_failure(st);
        return report_failure(incadapt_cmd_sweep(s.ptr, grid.c_str(), out_dir.c_str(), jobs));
    }
    if (compare->parsed()) {
        ScenarioHandle a, b;
        incadapt_status st = load_scenario(configs[0], overrides, seed, seed_set, a);
        if (st != INCADAPT_OK) return report_failure(st);
        st = load_scenario(configs[1], overrides, seed, seed_set, b);
        if (st != INCADAPT_OK) return report_failure(st);
        return report_failure(incadapt_cmd_compare(a.ptr, b.ptr, out_dir.c_str()));
    }
    if (verify->parsed())
        return report_failure(incadapt_cmd_verify_lemma(family.c_str(), out_dir.c_str()));
    return 0;
}
