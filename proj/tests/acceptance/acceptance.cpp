// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Usage: acceptance [output_dir]   (CSV files and the calibration report go there)
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "scn/activation.hpp"
#include "scn/coverage.hpp"
#include "scn/error.hpp"
#include "scn/montecarlo.hpp"
#include "scn/numerics.hpp"
#include "scn/sweep.hpp"

using namespace scn;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(bool ok, int id, const std::string& title) {
    std::printf("%s %d %s\n", ok ? "PASS" : "FAIL", id, title.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class... Args>
void detail(const char* fmt, Args... args) {
    std::printf("    ");
    std::printf(fmt, args...);
    std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

NetworkConfig network(double lambda, double rho = 300.0) {
    NetworkConfig n;
    n.lambda_bs = lambda;
    n.rho_ue = rho;
    return n;
}

double p_cov(const PathLossModel& m, double lambda, double lambda_tilde) {
    return coverage_probability(CoverageQuery(m, network(lambda), ActiveDensity{lambda_tilde}, 1.0),
                                DistanceDistributions(m, lambda));
}

// IMC and full-load rate density on the same snapshots and fades, so their
// difference is estimated with far less noise than two separate runs.
struct PairedAse {
    double imc;
    double full;
    double diff_stderr;
};

PairedAse paired_ase(const PathLossModel& m, double lambda, std::size_t trials, std::uint64_t seed) {
    mc::SimConfig c{m, network(lambda), 0.0, trials, seed, {1.0}};
    c.finalize();
    const double noise = c.network.noise_power_mw;
    const auto rate = [](double sinr) { return sinr > 1.0 ? std::log2(1.0 + sinr) : 0.0; };
    double sum_imc = 0.0, sum_full = 0.0, sum_d = 0.0, sum_d2 = 0.0, active = 0.0, total = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto s = mc::draw_snapshot(c, mc::trial_seed(seed, t));
        std::mt19937_64 rng(mc::trial_seed(seed ^ 0xFADEull, t));
        std::exponential_distribution<double> fade(1.0);
        const double signal = c.network.tx_power_mw * s.typical_gain * fade(rng);
        double i_imc = 0.0;
        double i_full = 0.0;
        for (std::uint32_t b = 0; b < s.bs.size(); ++b) {
            if (b == s.typical_serving) continue;
            const double d = mc::torus_distance({0.0, 0.0}, s.bs[b], c.window_side_km);
            const bool los = mc::link_is_los(m, s.link_seed, mc::kTypicalUeId, b, d);
            const double p = c.network.tx_power_mw * m.zeta(los ? Path::LoS : Path::NLoS, d) * fade(rng);
            i_full += p;
            if (s.active[b]) i_imc += p;
        }
        const double r_imc = rate(signal / (i_imc + noise));
        const double r_full = rate(signal / (i_full + noise));
        sum_imc += r_imc;
        sum_full += r_full;
        for (auto a : s.active) active += a;
        total += static_cast<double>(s.bs.size());
        const double lt = lambda * active / total;  // running estimate, only used for the spread
        const double d = lt * r_imc - lambda * r_full;
        sum_d += d;
        sum_d2 += d * d;
    }
    const double n = static_cast<double>(trials);
    const double lt = lambda * active / total;
    const double mean_d = sum_d / n;
    return {lt * sum_imc / n, lambda * sum_full / n, std::sqrt((sum_d2 / n - mean_d * mean_d) / n)};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::current_path();
    fs::create_directories(out_dir);
    const auto m = make_3gpp_case1();
    const double rho = 300.0;

    // ---- 1: q* calibration --------------------------------------------------
    auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cal_cfg;
    cal_cfg.lambda_grid = numerics::logspace(10.0, 1000.0, 9);
    cal_cfg.trials = 10000;
    cal_cfg.seed = 1;
    const auto report = calibrate(cal_cfg, Scenario::Case1Imc);
    std::ofstream(out_dir / "calibration_report.txt") << report.to_text();
    const double q_star = report.fit.q_star;
    verdict(q_star >= 4.03 && q_star <= 4.33, 1, "q* calibration in [4.03, 4.33]");
    detail("q* = %.4f (search [3.5, %.3g], mse %.4g, grid-scan fallback %s), %zu trials x %zu points, %.0f s",
           q_star, report.fit.q_upper_limit, report.fit.mse, report.fit.used_grid_scan ? "yes" : "no", report.trials,
           report.lambda_grid.size(), seconds_since(t0));

    // ---- 2 and 3: bounds, reusing the calibration Monte Carlo --------------
    bool bounds_ok = true;
    bool approx_ok = true;
    bool lb_near_100_ok = false;
    bool ub_tighter_low = true;
    bool lb_tighter_high = true;
    int low_points = 0;
    int high_points = 0;
    detail("%-9s %9s %9s %9s %9s %7s %8s %8s %8s", "lambda", "mc", "se", "lb", "ub", "approx", "err_lb", "err_ub",
           "err_q*");
    for (std::size_t i = 0; i < report.lambda_grid.size(); ++i) {
        const double l = report.lambda_grid[i];
        const double mc = report.lambda_tilde_mc[i];
        const double se = report.lambda_tilde_mc_stderr[i];
        const DistanceDistributions d(m, l);
        const double lb = lambda_tilde_lower(l, rho);
        const double ub = lambda_tilde_upper(d, rho);
        const double ap = lambda0(l, rho, q_star);
        detail("%-9.4g %9.4f %9.4f %9.4f %9.4f %7.3f %8.3f %8.3f %8.3f", l, mc, se, lb, ub, ap, lb - mc, ub - mc,
               ap - mc);
        bounds_ok = bounds_ok && lb - 2 * se <= mc && mc <= ub + 2 * se;
        approx_ok = approx_ok && std::abs(ap - mc) <= 0.5 + 2 * se;
        if (std::abs(std::log10(l) - 2.0) < 1e-9) lb_near_100_ok = std::abs((lb - mc) + 2.0) <= 1.0;
        if (l >= 10.0 && l <= 30.0) {
            ++low_points;
            ub_tighter_low = ub_tighter_low && std::abs(ub - mc) < std::abs(lb - mc);
        }
        if (l > 100.0) {
            ++high_points;
            lb_tighter_high = lb_tighter_high && std::abs(ub - mc) > std::abs(lb - mc);
        }
    }
    verdict(bounds_ok && approx_ok && lb_near_100_ok, 2, "activated-density bounds and lambda0(q*) error");
    detail("bounds hold (2 se): %s; |lambda0(q*) err| <= 0.5 + 2 se: %s; lb err at 100 in [-3, -1]: %s",
           bounds_ok ? "yes" : "no", approx_ok ? "yes" : "no", lb_near_100_ok ? "yes" : "no");
    verdict(ub_tighter_low && lb_tighter_high && low_points > 0 && high_points > 0, 3, "bound tightness regimes");
    detail("UB tighter on [10, 30] (%d points): %s; LB tighter above 100 (%d points): %s", low_points,
           ub_tighter_low ? "yes" : "no", high_points, lb_tighter_high ? "yes" : "no");

    // ---- 4: analytical vs Monte Carlo coverage ------------------------------
    t0 = std::chrono::steady_clock::now();
    ExperimentConfig cov_cfg;
    cov_cfg.q_star = q_star;
    cov_cfg.lambda_grid = numerics::logspace(10.0, 1e4, 6);
    cov_cfg.gamma_db = {0.0};
    cov_cfg.trials = 20000;
    cov_cfg.seed = 2;
    const std::vector<Scenario> imc{Scenario::Case1Imc};
    const auto cov = coverage_sweep(cov_cfg, imc);
    write_sweep_csv(out_dir / "coverage_imc.csv", cov);
    bool cov_ok = true;
    for (const auto& r : cov.rows) {
        const double diff = *r.p_cov_analytical - *r.p_cov_mc;
        cov_ok = cov_ok && std::abs(diff) <= 0.01;
        detail("lambda %-8.4g analytical %.4f  mc %.4f +- %.4f  diff %+.4f", r.lambda_bs, *r.p_cov_analytical,
               *r.p_cov_mc, *r.p_cov_mc_stderr, diff);
    }
    verdict(cov_ok, 4, "analytical vs Monte Carlo coverage within 0.01");
    detail("6 points over [10, 1e4], %zu trials each, %.0f s", cov_cfg.trials, seconds_since(t0));

    // ---- 5: coverage takeoff ------------------------------------------------
    std::vector<double> takeoff;
    for (double l : {300.0, 1000.0, 3000.0}) takeoff.push_back(p_cov(m, l, lambda0(l, rho, q_star)));
    const bool increasing = takeoff[0] < takeoff[1] && takeoff[1] < takeoff[2];
    verdict(increasing, 5, "coverage takeoff: strictly increasing over {300, 1e3, 3e3}");
    detail("p_cov = %.4f, %.4f, %.4f", takeoff[0], takeoff[1], takeoff[2]);
    if (takeoff[2] <= 0.9) detail("flag: p_cov(3e3) = %.4f does not exceed 0.9 (deviation reported)", takeoff[2]);

    // ---- 6: full-load peak --------------------------------------------------
    const auto peak_grid = numerics::logspace(std::pow(10.0, 0.5), std::pow(10.0, 2.5), 9);
    double best = -1.0;
    double argmax = 0.0;
    std::string row;
    for (double l : peak_grid) {
        const double p = p_cov(m, l, l);
        char buf[48];
        std::snprintf(buf, sizeof buf, " %.4g:%.4f", l, p);
        row += buf;
        if (p > best) {
            best = p;
            argmax = l;
        }
    }
    verdict(argmax >= 10.0 && argmax <= 40.0, 6, "full-load coverage peak in [10, 40]");
    detail("argmax %.4g (p_cov %.4f); grid%s", argmax, best, row.c_str());

    // ---- 7: single-slope invariance -----------------------------------------
    const auto ss = make_single_slope(3.75, db_to_linear(-145.4));
    std::vector<double> flat;
    for (double l : {100.0, 300.0, 1000.0}) flat.push_back(p_cov(ss, l, l));
    const double spread = *std::max_element(flat.begin(), flat.end()) - *std::min_element(flat.begin(), flat.end());
    verdict(spread <= 0.02, 7, "single-slope full-load coverage flat over {100, 300, 1e3}");
    detail("p_cov = %.5f, %.5f, %.5f; spread %.5f", flat[0], flat[1], flat[2], spread);

    // ---- 8: ASE ------------------------------------------------------------
    t0 = std::chrono::steady_clock::now();
    ExperimentConfig ase_cfg;
    ase_cfg.q_star = q_star;
    ase_cfg.lambda_grid = std::vector<double>{100.0, 1000.0};
    ase_cfg.gamma0_db = 0.0;
    ase_cfg.trials = 20000;
    ase_cfg.seed = 3;
    const auto ase_mc = ase_sweep(ase_cfg, imc);
    write_sweep_csv(out_dir / "ase_mc.csv", ase_mc);
    bool ase_mc_ok = true;
    for (const auto& r : ase_mc.rows) {
        const double rel = (*r.ase_analytical - *r.ase_mc) / *r.ase_mc;
        ase_mc_ok = ase_mc_ok && std::abs(rel) <= 0.03;
        detail("lambda %-6.4g ASE analytical %.3f  mc %.3f +- %.3f  rel %+.4f", r.lambda_bs, *r.ase_analytical,
               *r.ase_mc, *r.ase_mc_stderr, rel);
    }
    ExperimentConfig ase_grid_cfg = ase_cfg;
    ase_grid_cfg.lambda_grid = numerics::logspace(100.0, 1e4, 5);
    ase_grid_cfg.trials = 0;
    const std::vector<Scenario> both{Scenario::Case1Imc, Scenario::Case1FullLoad};
    const auto ase_grid = ase_sweep(ase_grid_cfg, both);
    write_sweep_csv(out_dir / "ase_grid.csv", ase_grid);
    std::vector<double> imc_ase;
    std::vector<double> full_ase;
    for (const auto& r : ase_grid.rows) {
        (r.scenario == to_string(Scenario::Case1Imc) ? imc_ase : full_ase).push_back(*r.ase_analytical);
    }
    bool monotone = true;
    bool capped = imc_ase.size() == full_ase.size();
    for (std::size_t i = 0; i < imc_ase.size(); ++i) {
        if (i > 0) monotone = monotone && imc_ase[i] >= imc_ase[i - 1];
        if (capped) capped = imc_ase[i] <= full_ase[i];
        detail("lambda %-8.4g ASE imc %.3f  full load %.3f", ase_grid_cfg.lambda_grid->at(i), imc_ase[i],
               i < full_ase.size() ? full_ase[i] : std::nan(""));
    }
    verdict(ase_mc_ok && monotone && capped, 8, "ASE: Monte Carlo agreement, monotone IMC, IMC <= full load");
    detail("MC within 3%%: %s; IMC non-decreasing on [1e2, 1e4]: %s; IMC <= full load: %s",
           ase_mc_ok ? "yes" : "no", monotone ? "yes" : "no", capped ? "yes" : "no");
    const auto paired = paired_ase(m, 100.0, 20000, 4242);
    detail("paired MC at lambda 100 (informational): ASE imc %.3f  full load %.3f  diff %+.3f +- %.3f; %.0f s",
           paired.imc, paired.full, paired.imc - paired.full, paired.diff_stderr, seconds_since(t0));

    // ---- 9: property summaries ----------------------------------------------
    bool norm_ok = true;
    for (double l : {1.0, 10.0, 100.0, 1000.0, 1e4}) {
        const DistanceDistributions d(m, l);
        norm_ok = norm_ok && std::abs(d.total_mass(Path::LoS) + d.total_mass(Path::NLoS) - 1.0) <= 1e-6;
    }
    bool round_trip_ok = true;
    for (double r : numerics::logspace(1e-3, 10.0, 200)) {
        round_trip_ok = round_trip_ok && std::abs(m.r2_of(m.r1_of(r)) / r - 1.0) <= 1e-9 &&
                        std::abs(m.r1_of(m.r2_of(r)) / r - 1.0) <= 1e-9;
    }
    bool laplace_ok = true;
    const CoverageQuery lq(m, network(100.0), ActiveDensity{60.0}, 1.0);
    for (Path p : {Path::LoS, Path::NLoS}) {
        for (double s : numerics::logspace(1e-3, 1e12, 16)) {
            const double v = laplace_interference(lq, p, 0.05, s);
            laplace_ok = laplace_ok && v > 0.0 && v <= 1.0;
        }
        laplace_ok = laplace_ok && std::abs(laplace_interference(lq, p, 0.05, 1e-20) - 1.0) < 1e-9;
    }
    bool gamma_ok = true;
    double prev = 1.0;
    const DistanceDistributions d100(m, 100.0);
    for (double g = -10.0; g <= 20.0; g += 5.0) {
        const double p =
            coverage_probability(CoverageQuery::from_db(m, network(100.0), ActiveDensity{60.0}, g), d100);
        gamma_ok = gamma_ok && p <= prev;
        prev = p;
    }
    mc::SimConfig det{m, network(100.0), 0.0, 200, 77, {1.0}};
    det.finalize();
    const auto a = mc::run_trials(det);
    const auto b = mc::run_trials(det);
    bool determinism_ok = a.size() == b.size();
    for (std::size_t i = 0; determinism_ok && i < a.size(); ++i) determinism_ok = a[i].sinr_linear == b[i].sinr_linear;
    mc::SimConfig near{ss, network(100.0, 0.0), 0.0, 1000, 5, {1.0}};
    near.finalize();
    bool nearest_ok = true;
    for (std::size_t i = 0; i < near.trials; ++i) {
        const auto snap = mc::draw_snapshot(near, mc::trial_seed(near.seed, i));
        double closest = std::numeric_limits<double>::infinity();
        for (const auto& p : snap.bs) closest = std::min(closest, mc::torus_distance({0.0, 0.0}, p, near.window_side_km));
        nearest_ok = nearest_ok && snap.typical_distance_km == closest;
    }
    verdict(norm_ok && round_trip_ok && laplace_ok && gamma_ok && determinism_ok && nearest_ok, 9,
            "property suites");
    detail("normalisation %s; r1/r2 round trip %s; Laplace in (0,1] and -> 1 %s; p_cov monotone in gamma %s; "
           "MC determinism %s; single-slope nearest BS %s",
           norm_ok ? "ok" : "BAD", round_trip_ok ? "ok" : "BAD", laplace_ok ? "ok" : "BAD", gamma_ok ? "ok" : "BAD",
           determinism_ok ? "ok" : "BAD", nearest_ok ? "ok" : "BAD");

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
