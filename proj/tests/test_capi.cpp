#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "incadapt/incadapt.h"

namespace {

const char* kScenario = R"(
[plant]
kind = scalar
b = 1
theta0 = 2, -1
regressor = sincos

[reference]
kind = sinusoid
amplitude = 1
omega = 1

[controller]
kind = incremental_ce
kappa = 2

[adaptation]
law = incremental
gamma_prime = 1
tau = 0.1

[integrator]
h = 0.001
t_final = 5
record_stride = 10

[monitors]
functional_monotone = false
window_decay = false
differential_bound = false
barbalat = false
boundedness_growth = false
settling = false
vdot_structural = false
)";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const char* tag) {
        path = std::filesystem::temp_directory_path() / (std::string("incadapt_capi_") + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("version and null-argument handling") {
    CHECK(incadapt_version() != nullptr);
    CHECK(incadapt_scenario_parse_text(nullptr, nullptr) == INCADAPT_ERR_INVALID_HANDLE);
    CHECK(incadapt_simulate(nullptr, nullptr) == INCADAPT_ERR_INVALID_HANDLE);
    CHECK(incadapt_run_record_count(nullptr) == 0);
}

TEST_CASE("parse, override, serialize, simulate, inspect") {
    incadapt_scenario* s = nullptr;
    REQUIRE(incadapt_scenario_parse_text(kScenario, &s) == INCADAPT_OK);

    CHECK(incadapt_scenario_override(s, "integrator.t_final=4") == INCADAPT_OK);
    CHECK(incadapt_scenario_override(s, "bogus") == INCADAPT_ERR_VALIDATION);
    CHECK(std::strlen(incadapt_last_error()) > 0);

    size_t needed = 0;
    REQUIRE(incadapt_scenario_serialize(s, nullptr, 0, &needed) == INCADAPT_OK);
    std::vector<char> buf(needed + 1);
    REQUIRE(incadapt_scenario_serialize(s, buf.data(), buf.size(), &needed) == INCADAPT_OK);
    CHECK(std::string(buf.data()).find("t_final = 4") != std::string::npos);

    // a serialized scenario parses back to the same canonical form
    incadapt_scenario* s2 = nullptr;
    REQUIRE(incadapt_scenario_parse_text(buf.data(), &s2) == INCADAPT_OK);
    std::vector<char> buf2(needed + 1);
    REQUIRE(incadapt_scenario_serialize(s2, buf2.data(), buf2.size(), nullptr) == INCADAPT_OK);
    CHECK(std::string(buf.data()) == std::string(buf2.data()));
    incadapt_scenario_free(s2);

    incadapt_run* run = nullptr;
    REQUIRE(incadapt_simulate(s, &run) == INCADAPT_OK);
    const size_t count = incadapt_run_record_count(run);
    CHECK(count == 4001);

    std::vector<double> t(count), x1(count), th3(count);
    size_t written = 0;
    CHECK(incadapt_run_column(run, "t", t.data(), count, &written) == INCADAPT_OK);
    CHECK(written == count);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == doctest::Approx(4.0));
    CHECK(incadapt_run_column(run, "x1", x1.data(), count, &written) == INCADAPT_OK);
    CHECK(incadapt_run_column(run, "th3", th3.data(), count, &written) == INCADAPT_OK);
    CHECK(incadapt_run_column(run, "th9", th3.data(), count, &written) ==
          INCADAPT_ERR_VALIDATION);
    CHECK(incadapt_run_column(run, "zzz", th3.data(), count, &written) ==
          INCADAPT_ERR_VALIDATION);

    double sup_err = -1.0;
    CHECK(incadapt_run_metric(run, "sup_abs_err", &sup_err) == INCADAPT_OK);
    CHECK(sup_err > 0.0);
    CHECK(incadapt_run_metric(run, "nope", &sup_err) == INCADAPT_ERR_VALIDATION);
    CHECK(incadapt_run_passed(run) == 1);

    incadapt_run_free(run);
    incadapt_scenario_free(s);
}

TEST_CASE("file i/o and error taxonomy") {
    TempDir dir("io");
    const std::string cfg_path = dir.str() + "/scenario.cfg";
    std::ofstream(cfg_path) << kScenario;

    incadapt_scenario* s = nullptr;
    REQUIRE(incadapt_scenario_parse_file(cfg_path.c_str(), &s) == INCADAPT_OK);

    CHECK(incadapt_cmd_run(s, (dir.str() + "/out").c_str()) == INCADAPT_OK);
    CHECK(std::filesystem::exists(dir.path / "out" / "trajectory.csv"));
    CHECK(std::filesystem::exists(dir.path / "out" / "report.txt"));

    // unwritable output is an i/o failure, distinct from monitor failures
    CHECK(incadapt_cmd_run(s, "/proc/no_such_dir/x") == INCADAPT_ERR_IO);

    incadapt_scenario* bad = nullptr;
    CHECK(incadapt_scenario_parse_file("/no/such/file.cfg", &bad) == INCADAPT_ERR_IO);
    CHECK(incadapt_scenario_parse_text("[plant]\nkind = scalar\n", &bad) ==
          INCADAPT_ERR_VALIDATION);

    CHECK(incadapt_cmd_verify_lemma("no_such_family", dir.str().c_str()) ==
          INCADAPT_ERR_VALIDATION);
    incadapt_scenario_free(s);
}

TEST_CASE("sweep results are independent of the concurrency level") {
    TempDir dir("sweep");
    incadapt_scenario* s = nullptr;
    REQUIRE(incadapt_scenario_parse_text(kScenario, &s) == INCADAPT_OK);
    REQUIRE(incadapt_scenario_override(s, "integrator.t_final=2") == INCADAPT_OK);

    const std::string d1 = dir.str() + "/j1";
    const std::string d2 = dir.str() + "/j2";
    CHECK(incadapt_cmd_sweep(s, "tau=0.2,0.1;kappa=1,2", d1.c_str(), 1) == INCADAPT_OK);
    CHECK(incadapt_cmd_sweep(s, "tau=0.2,0.1;kappa=1,2", d2.c_str(), 2) == INCADAPT_OK);
    const std::string sum1 = slurp(d1 + "/summary.csv");
    CHECK(!sum1.empty());
    CHECK(sum1 == slurp(d2 + "/summary.csv"));

    // a 1x1 grid reproduces cmd_run plus a one-row table
    const std::string d3 = dir.str() + "/single";
    CHECK(incadapt_cmd_sweep(s, "tau=0.1", d3.c_str(), 1) == INCADAPT_OK);
    incadapt_scenario* plain = nullptr;
    REQUIRE(incadapt_scenario_parse_text(kScenario, &plain) == INCADAPT_OK);
    REQUIRE(incadapt_scenario_override(plain, "integrator.t_final=2") == INCADAPT_OK);
    REQUIRE(incadapt_scenario_override(plain, "adaptation.tau=0.1") == INCADAPT_OK);
    const std::string d4 = dir.str() + "/plain";
    CHECK(incadapt_cmd_run(plain, d4.c_str()) == INCADAPT_OK);
    CHECK(slurp(d3 + "/point_000/trajectory.csv") == slurp(d4 + "/trajectory.csv"));
    std::ifstream table(d3 + "/summary.csv");
    std::string line;
    int rows = 0;
    while (std::getline(table, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);  // header plus one point

    // an invalid grid point aborts before any run starts
    const std::string d5 = dir.str() + "/bad";
    CHECK(incadapt_cmd_sweep(s, "tau=0.1,0.1234567", d5.c_str(), 1) == INCADAPT_ERR_VALIDATION);
    CHECK(!std::filesystem::exists(std::filesystem::path(d5) / "summary.csv"));
    CHECK(incadapt_cmd_sweep(s, "", d5.c_str(), 1) == INCADAPT_ERR_VALIDATION);

    incadapt_scenario_free(plain);
    incadapt_scenario_free(s);
}

TEST_CASE("written CSV columns line up with the in-memory series") {
    TempDir dir("csv");
    incadapt_scenario* s = nullptr;
    REQUIRE(incadapt_scenario_parse_text(kScenario, &s) == INCADAPT_OK);
    REQUIRE(incadapt_scenario_override(s, "integrator.t_final=2") == INCADAPT_OK);
    incadapt_run* run = nullptr;
    REQUIRE(incadapt_simulate(s, &run) == INCADAPT_OK);
    const std::string path = dir.str() + "/t.csv";
    REQUIRE(incadapt_run_write_csv(run, path.c_str()) == INCADAPT_OK);
    REQUIRE(incadapt_run_write_report(run, (dir.str() + "/r.txt").c_str()) == INCADAPT_OK);
    CHECK(slurp(dir.str() + "/r.txt").find("verdict:") != std::string::npos);

    const size_t count = incadapt_run_record_count(run);
    std::vector<double> t(count), x1(count), th2(count), winV(count);
    incadapt_run_column(run, "t", t.data(), count, nullptr);
    incadapt_run_column(run, "x1", x1.data(), count, nullptr);
    incadapt_run_column(run, "th2", th2.data(), count, nullptr);
    incadapt_run_column(run, "winV", winV.data(), count, nullptr);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::string> names;
    {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) names.push_back(cell);
    }
    const int stride = 10;
    int row = 0;
    while (std::getline(in, line)) {
        std::vector<double> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(std::stod(cell));
        REQUIRE(cells.size() == names.size());
        const size_t i = std::min<size_t>(static_cast<size_t>(row) * stride, count - 1);
        for (size_t c = 0; c < names.size(); ++c) {
            if (names[c] == "t") CHECK(cells[c] == doctest::Approx(t[i]));
            if (names[c] == "x1") CHECK(cells[c] == doctest::Approx(x1[i]).epsilon(1e-15));
            if (names[c] == "th2") CHECK(cells[c] == doctest::Approx(th2[i]).epsilon(1e-15));
            if (names[c] == "winV") CHECK(cells[c] == doctest::Approx(winV[i]).epsilon(1e-12));
        }
        ++row;
    }
    CHECK(row == 201);  // 2001 grid points at stride 10; the last one lands on the stride
    incadapt_run_free(run);
    incadapt_scenario_free(s);
}

TEST_CASE("compare requires matching grids and reports zero self-distance") {
    TempDir dir("cmp");
    incadapt_scenario* a = nullptr;
    REQUIRE(incadapt_scenario_parse_text(kScenario, &a) == INCADAPT_OK);
    CHECK(incadapt_cmd_compare(a, a, (dir.str() + "/self").c_str()) == INCADAPT_OK);
    const std::string rep = slurp(dir.str() + "/self/compare.txt");
    CHECK(rep.find("state_sup: 0\n") != std::string::npos);

    incadapt_scenario* b = nullptr;
    REQUIRE(incadapt_scenario_parse_text(kScenario, &b) == INCADAPT_OK);
    REQUIRE(incadapt_scenario_override(b, "integrator.t_final=4") == INCADAPT_OK);
    CHECK(incadapt_cmd_compare(a, b, (dir.str() + "/bad").c_str()) == INCADAPT_ERR_VALIDATION);
    incadapt_scenario_free(a);
    incadapt_scenario_free(b);
}

namespace {
void ramp_regressor(double, const double* x, size_t, double* out, void*) {
    out[0] = x[0] / (1.0 + x[0] * x[0]);
    out[1] = 1.0;
}
}  // namespace

TEST_CASE("custom evaluators plug into the registry") {
    REQUIRE(incadapt_register_regressor("capi_custom", 2, 1.2, ramp_regressor, nullptr) ==
            INCADAPT_OK);
    std::string text = kScenario;
    text.replace(text.find("regressor = sincos"), 18, "regressor = capi_custom");
    incadapt_scenario* s = nullptr;
    REQUIRE(incadapt_scenario_parse_text(text.c_str(), &s) == INCADAPT_OK);
    incadapt_run* run = nullptr;
    REQUIRE(incadapt_simulate(s, &run) == INCADAPT_OK);
    CHECK(incadapt_run_passed(run) == 1);
    incadapt_run_free(run);
    incadapt_scenario_free(s);

    CHECK(incadapt_register_regressor(nullptr, 2, 1.0, ramp_regressor, nullptr) ==
          INCADAPT_ERR_INVALID_HANDLE);
}
