#include "scn/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scn/ase.hpp"
#include "scn/coverage.hpp"
#include "scn/error.hpp"

namespace scn {

namespace {

constexpr std::array<std::string_view, 17> kColumns{
    "lambda_bs",        "scenario",        "gamma_db",          "p_cov_analytical", "p_cov_mc",
    "p_cov_mc_stderr",  "lambda_tilde_lb", "lambda_tilde_ub",   "lambda_tilde_approx",
    "lambda_tilde_mc",  "lambda_tilde_mc_stderr", "err_lb",     "err_ub",           "err_approx",
    "ase_analytical",   "ase_mc",          "ase_mc_stderr",
};

using OptionalField = std::optional<double> SweepRow::*;
// Columns 2.. in order.
constexpr std::array<OptionalField, 15> kOptionalFields{
    &SweepRow::gamma_db,        &SweepRow::p_cov_analytical,    &SweepRow::p_cov_mc,
    &SweepRow::p_cov_mc_stderr, &SweepRow::lambda_tilde_lb,     &SweepRow::lambda_tilde_ub,
    &SweepRow::lambda_tilde_approx, &SweepRow::lambda_tilde_mc, &SweepRow::lambda_tilde_mc_stderr,
    &SweepRow::err_lb,          &SweepRow::err_ub,              &SweepRow::err_approx,
    &SweepRow::ase_analytical,  &SweepRow::ase_mc,              &SweepRow::ase_mc_stderr,
};

constexpr std::array<Scenario, 4> kAllScenarios{Scenario::Case1Imc, Scenario::Case1FullLoad,
                                                 Scenario::SingleSlopeImc, Scenario::SingleSlopeFullLoad};

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

double parse_cell(std::string_view cell, std::size_t line) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || end != cell.data() + cell.size()) {
        raise(ErrorCode::IoError, "line " + std::to_string(line) + ": bad number '" + std::string(cell) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    for (std::size_t comma; (comma = line.find(',')) != std::string_view::npos; line = line.substr(comma + 1)) {
        out.push_back(line.substr(0, comma));
    }
    out.push_back(line);
    return out;
}

std::size_t scenario_ordinal(Scenario s) {
    return static_cast<std::size_t>(std::find(kAllScenarios.begin(), kAllScenarios.end(), s) - kAllScenarios.begin());
}

void require_trials(const ExperimentConfig& cfg, const char* what) {
    if (cfg.trials < 100) {
        raise(ErrorCode::ConfigError, std::string("key 'trials' must be >= 100 for ") + what);
    }
}

std::vector<double> gammas_linear(const ExperimentConfig& cfg) {
    if (cfg.gamma_db.empty()) raise(ErrorCode::ConfigError, "key 'gamma_db' is empty");
    std::vector<double> out;
    for (double g : cfg.gamma_db) out.push_back(db_to_linear(g));
    return out;
}

// Grid index whose density is closest to `target` in log scale.
std::size_t nearest_index(const std::vector<double>& grid, double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(std::log(grid[i] / target)) < std::abs(std::log(grid[best] / target))) best = i;
    }
    return best;
}

}  // namespace

const char* to_string(Scenario s) noexcept {
    switch (s) {
        case Scenario::Case1Imc: return "3gpp-case1-imc";
        case Scenario::Case1FullLoad: return "3gpp-case1-fullload";
        case Scenario::SingleSlopeImc: return "single-slope-imc";
        case Scenario::SingleSlopeFullLoad: return "single-slope-fullload";
    }
    return "?";
}

Scenario parse_scenario(std::string_view tag) {
    for (Scenario s : kAllScenarios) {
        if (tag == to_string(s)) return s;
    }
    raise(ErrorCode::ConfigError, "unknown scenario '" + std::string(tag) +
                                      "' (expected 3gpp-case1-imc, 3gpp-case1-fullload, single-slope-imc or "
                                      "single-slope-fullload)");
}

std::vector<Scenario> parse_scenarios(std::string_view tags) {
    std::vector<Scenario> out;
    for (auto tag : split(tags)) out.push_back(parse_scenario(tag));
    return out;
}

bool is_full_load(Scenario s) noexcept {
    return s == Scenario::Case1FullLoad || s == Scenario::SingleSlopeFullLoad;
}

PathLossModel scenario_model(Scenario s, const ExperimentConfig& cfg) {
    try {
        if (s == Scenario::Case1Imc || s == Scenario::Case1FullLoad) return make_3gpp_case1(cfg.pathloss);
        return make_single_slope(cfg.pathloss.nlos_exponent, cfg.pathloss.nlos_amplitude);
    } catch (const Error& e) {
        raise(ErrorCode::ConfigError, std::string("path-loss keys do not form a valid model: ") + e.what());
    }
}

NetworkConfig scenario_network(Scenario s, const ExperimentConfig& cfg, double lambda_bs) {
    NetworkConfig net = cfg.network;
    net.lambda_bs = lambda_bs;
    if (is_full_load(s)) net.rho_ue = std::numeric_limits<double>::infinity();
    try {
        net.validate();
    } catch (const Error& e) {
        raise(ErrorCode::ConfigError, e.what());
    }
    return net;
}

double scenario_q(Scenario s, const ExperimentConfig& cfg) {
    return (s == Scenario::Case1Imc || s == Scenario::Case1FullLoad) ? cfg.q_star : kVoronoiShape;
}

double scenario_active_density(Scenario s, const ExperimentConfig& cfg, double lambda_bs) {
    if (is_full_load(s)) return lambda_bs;
    return lambda0(lambda_bs, cfg.network.rho_ue, scenario_q(s, cfg));
}

mc::SimConfig scenario_sim(Scenario s, const ExperimentConfig& cfg, double lambda_bs, std::size_t point_index,
                           std::vector<double> gammas_linear) {
    mc::SimConfig sim{scenario_model(s, cfg), scenario_network(s, cfg, lambda_bs), cfg.window_side_km, cfg.trials,
                      mc::trial_seed(cfg.seed + 0x1000 * scenario_ordinal(s), point_index), std::move(gammas_linear)};
    try {
        sim.finalize();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) raise(ErrorCode::ConfigError, e.what());
        throw;
    }
    return sim;
}

void SweepResult::validate() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto fail = [&](const std::string& what) {
            raise(ErrorCode::NumericalInconsistency, "sweep row " + std::to_string(i) + ": " + what);
        };
        if (i > 0 && r.lambda_bs < rows[i - 1].lambda_bs) fail("rows not sorted by lambda_bs");
        if (!(r.lambda_bs > 0.0)) fail("lambda_bs must be positive");
        for (auto field : {&SweepRow::p_cov_analytical, &SweepRow::p_cov_mc}) {
            const auto& v = r.*field;
            if (v && !(*v >= 0.0 && *v <= 1.0)) fail("probability outside [0,1]");
        }
        for (auto field : {&SweepRow::lambda_tilde_lb, &SweepRow::lambda_tilde_ub, &SweepRow::lambda_tilde_approx,
                           &SweepRow::lambda_tilde_mc, &SweepRow::ase_analytical, &SweepRow::ase_mc}) {
            const auto& v = r.*field;
            if (v && !(*v >= 0.0)) fail("negative density");
        }
    }
}

std::span<const std::string_view> sweep_columns() { return kColumns; }

std::string sweep_csv_text(const SweepResult& result) {
    std::string out;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        if (c) out += ',';
        out += kColumns[c];
    }
    out += '\n';
    for (const auto& row : result.rows) {
        out += csv_number(row.lambda_bs);
        out += ',';
        out += row.scenario;
        for (auto field : kOptionalFields) {
            out += ',';
            if (const auto& v = row.*field) out += csv_number(*v);
        }
        out += '\n';
    }
    return out;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    result.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out << sweep_csv_text(result);
    if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

SweepResult parse_sweep_csv(std::string_view text) {
    SweepResult result;
    std::size_t line_no = 0;
    bool header = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != kColumns.size()) {
            raise(ErrorCode::IoError, "line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(kColumns.size()) + " columns, got " +
                                          std::to_string(cells.size()));
        }
        if (header) {
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                if (cells[c] != kColumns[c]) {
                    raise(ErrorCode::IoError, "unexpected header column '" + std::string(cells[c]) + "'");
                }
            }
            header = false;
            continue;
        }
        SweepRow row;
        row.lambda_bs = parse_cell(cells[0], line_no);
        row.scenario = std::string(cells[1]);
        for (std::size_t f = 0; f < kOptionalFields.size(); ++f) {
            if (!cells[f + 2].empty()) row.*kOptionalFields[f] = parse_cell(cells[f + 2], line_no);
        }
        result.rows.push_back(std::move(row));
    }
    if (header) raise(ErrorCode::IoError, "CSV has no header");
    return result;
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_sweep_csv(ss.str());
}

SweepResult coverage_sweep(const ExperimentConfig& cfg, std::span<const Scenario> scenarios) {
    const auto grid = cfg.resolved_lambda_grid();
    const auto gammas = gammas_linear(cfg);
    if (scenarios.empty()) raise(ErrorCode::ConfigError, "no scenario selected");
    SweepResult result;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (Scenario s : scenarios) {
            const PathLossModel model = scenario_model(s, cfg);
            const NetworkConfig net = scenario_network(s, cfg, grid[i]);
            const DistanceDistributions dist(model, grid[i]);
            const ActiveDensity active{scenario_active_density(s, cfg, grid[i])};
            std::vector<mc::Estimate> sim;
            if (cfg.trials > 0) {
                require_trials(cfg, "Monte Carlo coverage");
                sim = mc::coverage_from(mc::run_trials(scenario_sim(s, cfg, grid[i], i, gammas)), gammas);
            }
            for (std::size_t g = 0; g < gammas.size(); ++g) {
                SweepRow row;
                row.lambda_bs = grid[i];
                row.scenario = to_string(s);
                row.gamma_db = cfg.gamma_db[g];
                row.lambda_tilde_approx = active.per_km2;
                row.p_cov_analytical = coverage_probability(CoverageQuery(model, net, active, gammas[g]), dist);
                if (!sim.empty()) {
                    row.p_cov_mc = sim[g].value;
                    row.p_cov_mc_stderr = sim[g].std_error;
                }
                result.rows.push_back(std::move(row));
            }
        }
    }
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.lambda_bs < b.lambda_bs; });
    return result;
}

SweepResult density_sweep(const ExperimentConfig& cfg, Scenario scenario) {
    const auto grid = cfg.resolved_lambda_grid();
    require_trials(cfg, "the activated-density sweep");
    const PathLossModel model = scenario_model(scenario, cfg);
    SweepResult result;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const NetworkConfig net = scenario_network(scenario, cfg, grid[i]);
        const DistanceDistributions dist(model, grid[i]);
        const ActivationEstimate est = estimate_activation(dist, net.rho_ue, scenario_q(scenario, cfg));
        const mc::Estimate sim =
            mc::activated_density_from(mc::run_trials(scenario_sim(scenario, cfg, grid[i], i, {})), grid[i]);
        SweepRow row;
        row.lambda_bs = grid[i];
        row.scenario = to_string(scenario);
        row.lambda_tilde_lb = est.lower_bound;
        row.lambda_tilde_ub = est.upper_bound;
        row.lambda_tilde_approx = est.approx;
        row.lambda_tilde_mc = sim.value;
        row.lambda_tilde_mc_stderr = sim.std_error;
        row.err_lb = est.lower_bound - sim.value;
        row.err_ub = est.upper_bound - sim.value;
        row.err_approx = est.approx - sim.value;
        result.rows.push_back(std::move(row));
    }
    return result;
}

SweepResult ase_sweep(const ExperimentConfig& cfg, std::span<const Scenario> scenarios) {
    const auto grid = cfg.resolved_lambda_grid();
    if (scenarios.empty()) raise(ErrorCode::ConfigError, "no scenario selected");
    const double gamma0 = db_to_linear(cfg.gamma0_db);
    SweepResult result;
    std::vector<std::vector<double>> ase_by_scenario(scenarios.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < scenarios.size(); ++k) {
            const Scenario s = scenarios[k];
            const PathLossModel model = scenario_model(s, cfg);
            const NetworkConfig net = scenario_network(s, cfg, grid[i]);
            const DistanceDistributions dist(model, grid[i]);
            const ActiveDensity active{scenario_active_density(s, cfg, grid[i])};
            SweepRow row;
            row.lambda_bs = grid[i];
            row.scenario = to_string(s);
            row.gamma_db = cfg.gamma0_db;
            row.lambda_tilde_approx = active.per_km2;
            row.ase_analytical = ase(AseQuery{CoverageQuery(model, net, active, gamma0), gamma0}, dist).value;
            if (cfg.trials > 0) {
                require_trials(cfg, "the Monte Carlo rate density");
                const auto outcomes = mc::run_trials(scenario_sim(s, cfg, grid[i], i, {}));
                const mc::Estimate sim = mc::rate_density_from(outcomes, grid[i], gamma0);
                row.ase_mc = sim.value;
                row.ase_mc_stderr = sim.std_error;
            }
            ase_by_scenario[k].push_back(*row.ase_analytical);
            result.rows.push_back(std::move(row));
        }
    }

    std::ostringstream summary;
    if (grid.size() >= 2) {
        const std::size_t a = nearest_index(grid, 20.0);
        const std::size_t b = nearest_index(grid, 200.0);
        if (b > a) {
            for (std::size_t k = 0; k < scenarios.size(); ++k) {
                const double growth = ase_by_scenario[k][b] / ase_by_scenario[k][a];
                const double density_growth = grid[b] / grid[a];
                summary << to_string(scenarios[k]) << ": ASE growth over lambda [" << format_double(grid[a]) << ", "
                        << format_double(grid[b]) << "] = " << format_double(growth) << "x for "
                        << format_double(density_growth) << "x density ("
                        << (growth < density_growth ? "sub-linear" : "linear or faster") << ")\n";
            }
        }
    }
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        if (is_full_load(scenarios[k])) continue;
        const Scenario partner =
            scenarios[k] == Scenario::Case1Imc ? Scenario::Case1FullLoad : Scenario::SingleSlopeFullLoad;
        const auto it = std::find(scenarios.begin(), scenarios.end(), partner);
        if (it == scenarios.end()) continue;
        const auto& imc = ase_by_scenario[k];
        const auto& full = ase_by_scenario[static_cast<std::size_t>(it - scenarios.begin())];
        bool capped = true;
        for (std::size_t i = 0; i < grid.size(); ++i) capped = capped && imc[i] <= full[i];
        summary << to_string(scenarios[k]) << " <= " << to_string(partner) << " at every lambda: "
                << (capped ? "yes" : "no") << '\n';
    }
    result.summary = summary.str();
    return result;
}

std::string CalibrationReport::to_text() const {
    const auto join = [](const std::vector<double>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
        return out;
    };
    std::ostringstream os;
    os << "# q* calibration report\n"
       << "q_star = " << format_double(fit.q_star) << '\n'
       << "q_upper_limit = " << format_double(fit.q_upper_limit) << '\n'
       << "mse = " << format_double(fit.mse) << '\n'
       << "used_grid_scan = " << (fit.used_grid_scan ? "true" : "false") << '\n'
       << "trials = " << trials << '\n'
       << "seed = " << seed << '\n'
       << "lambda_grid = " << join(lambda_grid) << '\n'
       << "lambda_tilde_mc = " << join(lambda_tilde_mc) << '\n'
       << "lambda_tilde_mc_stderr = " << join(lambda_tilde_mc_stderr) << '\n'
       << "lambda_tilde_upper = " << join(lambda_tilde_upper) << '\n'
       << "lambda_tilde_lower = " << join(lambda_tilde_lower) << '\n'
       << "lambda0_q_star = " << join(lambda0_q_star) << '\n';
    return os.str();
}

CalibrationReport calibrate(const ExperimentConfig& cfg, Scenario scenario) {
    if (is_full_load(scenario)) raise(ErrorCode::ConfigError, "calibration needs an idle-mode scenario");
    require_trials(cfg, "calibration");
    const auto grid = cfg.lambda_grid ? cfg.resolved_lambda_grid() : numerics::logspace(10.0, 1000.0, 9);
    CalibrationReport report;
    report.lambda_grid = grid;
    report.trials = cfg.trials;
    report.seed = cfg.seed;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const mc::Estimate sim =
            mc::activated_density_from(mc::run_trials(scenario_sim(scenario, cfg, grid[i], i, {})), grid[i]);
        report.lambda_tilde_mc.push_back(sim.value);
        report.lambda_tilde_mc_stderr.push_back(sim.std_error);
    }
    const auto model = scenario_model(scenario, cfg);
    report.fit = calibrate_q_star(model, cfg.network.rho_ue, grid, report.lambda_tilde_mc);
    for (double l : grid) {
        report.lambda_tilde_upper.push_back(lambda_tilde_upper(DistanceDistributions(model, l), cfg.network.rho_ue));
        report.lambda_tilde_lower.push_back(lambda_tilde_lower(l, cfg.network.rho_ue));
        report.lambda0_q_star.push_back(lambda0(l, cfg.network.rho_ue, report.fit.q_star));
    }
    return report;
}

}  // namespace scn
