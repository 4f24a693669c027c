// scnsim: sweeps of coverage, activated density and ASE, plus q* calibration.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scn/scn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct Options {
    std::string config_path;
    std::optional<std::string> lambda_grid;
    std::optional<std::string> gamma_db;
    std::optional<std::string> gamma0_db;
    std::string scenario;
    std::optional<std::string> trials;
    std::optional<std::string> seed;
    std::string out;
    std::vector<std::string> sets;
};

int exit_code(scn_status s) {
    switch (s) {
        case SCN_OK: return kExitOk;
        case SCN_ERR_IO: return kExitIo;
        case SCN_ERR_CONFIG:
        case SCN_ERR_INVALID_ARGUMENT:
        case SCN_ERR_INVALID_MODEL:
        case SCN_ERR_EXPONENT_TOO_SMALL:
        case SCN_ERR_EMPTY_GRID: return kExitConfig;
        default: return kExitNumerical;
    }
}

int fail(scn_status s) {
    std::fprintf(stderr, "scnsim: %s\n", scn_last_error());
    return exit_code(s);
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "key = value config file (defaults: 3GPP Case 1)");
    cmd->add_option("--lambda-grid", o.lambda_grid, "BS densities: a,b,c or logspace:<lo_exp>:<hi_exp>:<n>");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point (0 = analytical only)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--set", o.sets, "override a config key (key=value), repeatable");
}

// Config file (if any), then --set overrides, then the dedicated flags.
scn_status build_config(const Options& o, scn_config** cfg) {
    scn_status s = o.config_path.empty() ? scn_config_default(cfg) : scn_config_load(o.config_path.c_str(), cfg);
    if (s != SCN_OK) return s;
    std::vector<std::string> assignments = o.sets;
    if (o.lambda_grid) assignments.push_back("lambda_grid=" + *o.lambda_grid);
    if (o.gamma_db) assignments.push_back("gamma_db=" + *o.gamma_db);
    if (o.gamma0_db) assignments.push_back("gamma0_db=" + *o.gamma0_db);
    if (o.trials) assignments.push_back("trials=" + *o.trials);
    if (o.seed) assignments.push_back("seed=" + *o.seed);
    for (const auto& a : assignments) {
        if ((s = scn_config_set(*cfg, a.c_str())) != SCN_OK) return s;
    }
    return SCN_OK;
}

using SweepFn = scn_status (*)(const scn_config*, const char*, scn_sweep**);

int run_sweep(const Options& o, SweepFn fn) {
    scn_config* cfg = nullptr;
    scn_status s = build_config(o, &cfg);
    if (s != SCN_OK) {
        scn_config_free(cfg);
        return fail(s);
    }
    scn_sweep* sweep = nullptr;
    s = fn(cfg, o.scenario.c_str(), &sweep);
    scn_config_free(cfg);
    if (s == SCN_OK) s = scn_sweep_write_csv(sweep, o.out.c_str());
    if (s == SCN_OK) {
        std::fputs(scn_sweep_summary(sweep), stdout);
        std::printf("wrote %zu rows to %s\n", scn_sweep_row_count(sweep), o.out.c_str());
    }
    scn_sweep_free(sweep);
    return s == SCN_OK ? kExitOk : fail(s);
}

int run_calibrate(const Options& o) {
    scn_config* cfg = nullptr;
    scn_status s = build_config(o, &cfg);
    scn_calibration result{};
    if (s == SCN_OK) s = scn_calibrate(cfg, o.scenario.c_str(), o.out.empty() ? nullptr : o.out.c_str(), &result);
    scn_config_free(cfg);
    if (s != SCN_OK) return fail(s);
    char value[32];
    std::snprintf(value, sizeof value, "%.6g", result.q_star);
    if (!o.config_path.empty()) {
        s = scn_config_update_file(o.config_path.c_str(), "q_star", value);
        if (s != SCN_OK) return fail(s);
    }
    std::printf("q_star = %s (search interval [3.5, %.6g], mse %.6g%s)\n", value, result.q_upper_limit, result.mse,
                result.used_grid_scan ? ", grid-scan fallback" : "");
    if (!o.config_path.empty()) std::printf("updated %s\n", o.config_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage, activated-density and ASE sweeps for small-cell networks with idle-mode BSs"};
    app.require_subcommand(1);

    Options o;
    auto* coverage = app.add_subcommand("coverage-sweep", "coverage probability over a density grid");
    add_common(coverage, o);
    coverage->add_option("--gamma-db", o.gamma_db, "SINR thresholds in dB, comma-separated");
    coverage->add_option("--scenario", o.scenario, "scenario tag(s), comma-separated")->default_val("3gpp-case1-imc");
    coverage->add_option("--out", o.out, "output CSV")->required();

    auto* density = app.add_subcommand("density-sweep", "activated BS density: bounds, approximation, Monte Carlo");
    add_common(density, o);
    density->add_option("--scenario", o.scenario, "scenario tag")->default_val("3gpp-case1-imc");
    density->add_option("--out", o.out, "output CSV")->required();

    auto* ase = app.add_subcommand("ase-sweep", "area spectral efficiency over a density grid");
    add_common(ase, o);
    ase->add_option("--gamma0-db", o.gamma0_db, "minimum working SINR in dB");
    ase->add_option("--scenario", o.scenario, "scenario tag(s), comma-separated")
        ->default_val("3gpp-case1-imc,3gpp-case1-fullload");
    ase->add_option("--out", o.out, "output CSV")->required();

    auto* calibrate = app.add_subcommand("calibrate", "fit q* to Monte Carlo activated densities");
    add_common(calibrate, o);
    calibrate->add_option("--scenario", o.scenario, "idle-mode scenario tag")->default_val("3gpp-case1-imc");
    calibrate->add_option("--out", o.out, "calibration report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (coverage->parsed()) return run_sweep(o, scn_sweep_coverage);
    if (density->parsed()) return run_sweep(o, scn_sweep_density);
    if (ase->parsed()) return run_sweep(o, scn_sweep_ase);
    return run_calibrate(o);
}
