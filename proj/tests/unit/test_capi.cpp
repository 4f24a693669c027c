// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "scn/scn.h"

TEST_CASE("model handles") {
    scn_model* m = nullptr;
    REQUIRE(scn_model_3gpp_case1(nullptr, &m) == SCN_OK);
    double v = 0.0;
    CHECK(scn_model_zeta(m, SCN_PATH_LOS, 1.0, &v) == SCN_OK);
    CHECK(v == doctest::Approx(std::pow(10.0, -10.38)).epsilon(1e-12));
    CHECK(scn_model_los_probability(m, 0.15, &v) == SCN_OK);
    CHECK(v == doctest::Approx(0.5));
    CHECK(scn_model_r1(m, 0.1, &v) == SCN_OK);
    CHECK(v == doctest::Approx(0.021544).epsilon(1e-4));
    CHECK(scn_model_zeta(m, SCN_PATH_NLOS, 0.0, &v) == SCN_ERR_NON_POSITIVE_DISTANCE);
    CHECK(std::string(scn_last_error()).find("NonPositiveDistance") != std::string::npos);
    CHECK(scn_model_zeta(nullptr, SCN_PATH_NLOS, 1.0, &v) == SCN_ERR_INVALID_ARGUMENT);
    scn_model_free(m);

    scn_case1_params p;
    scn_case1_params_default(&p);
    CHECK(p.d1_km == 0.3);
    p.alpha_nlos = 1.5;
    CHECK(scn_model_3gpp_case1(&p, &m) == SCN_ERR_EXPONENT_TOO_SMALL);
    CHECK(scn_model_single_slope(2.0, 1e-12, &m) == SCN_ERR_EXPONENT_TOO_SMALL);
    CHECK(std::string(scn_status_name(SCN_ERR_EMPTY_GRID)) != "");
}

TEST_CASE("analysis chain") {
    scn_model* m = nullptr;
    REQUIRE(scn_model_3gpp_case1(nullptr, &m) == SCN_OK);
    scn_distances* d = nullptr;
    REQUIRE(scn_distances_create(m, 100.0, &d) == SCN_OK);
    double l = 0.0;
    double n = 0.0;
    CHECK(scn_distances_total_mass(d, SCN_PATH_LOS, &l) == SCN_OK);
    CHECK(scn_distances_total_mass(d, SCN_PATH_NLOS, &n) == SCN_OK);
    CHECK(l + n == doctest::Approx(1.0).epsilon(1e-6));

    double lam0 = 0.0;
    CHECK(scn_lambda0(300.0, 300.0, 3.5, &lam0) == SCN_OK);
    CHECK(lam0 == doctest::Approx(175.52).epsilon(1e-4));

    scn_activation act{};
    CHECK(scn_activation_estimate(d, 300.0, 4.18, &act) == SCN_OK);
    CHECK(act.lower_bound <= act.approx);
    CHECK(act.approx <= act.upper_bound);

    scn_network net;
    scn_network_default(&net);
    double p = 0.0;
    CHECK(scn_coverage_probability(d, &net, act.approx, 1.0, &p) == SCN_OK);
    CHECK(p == doctest::Approx(0.4343).epsilon(1e-3));
    net.lambda_bs = 50.0;
    CHECK(scn_coverage_probability(d, &net, 10.0, 1.0, &p) == SCN_ERR_INVALID_ARGUMENT);

    const double grid[] = {10.0, 100.0, 1000.0};
    double mc[3];
    for (int i = 0; i < 3; ++i) scn_lambda0(grid[i], 300.0, 4.0, &mc[i]);
    scn_calibration cal{};
    CHECK(scn_calibrate_q_star(m, 300.0, grid, mc, 3, &cal) == SCN_OK);
    CHECK(cal.q_star == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(scn_calibrate_q_star(m, 300.0, grid, mc, 0, &cal) == SCN_ERR_EMPTY_GRID);

    scn_distances_free(d);
    scn_model_free(m);
}

TEST_CASE("simulation handle") {
    scn_model* m = nullptr;
    REQUIRE(scn_model_3gpp_case1(nullptr, &m) == SCN_OK);
    scn_network net;
    scn_network_default(&net);
    net.lambda_bs = 30.0;
    const double gammas[] = {1.0, 10.0};
    scn_sim* s = nullptr;
    REQUIRE(scn_sim_create(m, &net, 0.0, 120, 5, gammas, 2, &s) == SCN_OK);
    double side = 0.0;
    CHECK(scn_sim_window_side(s, &side) == SCN_OK);
    CHECK(side >= 3.0);
    scn_estimate e{};
    CHECK(scn_sim_coverage(s, 0, &e) != SCN_OK);  // not run yet
    REQUIRE(scn_sim_run(s, 2) == SCN_OK);
    scn_estimate lo{};
    scn_estimate hi{};
    CHECK(scn_sim_coverage(s, 0, &lo) == SCN_OK);
    CHECK(scn_sim_coverage(s, 1, &hi) == SCN_OK);
    CHECK(hi.value <= lo.value);
    CHECK(scn_sim_coverage(s, 2, &hi) == SCN_ERR_INVALID_ARGUMENT);
    CHECK(scn_sim_activated_density(s, &e) == SCN_OK);
    CHECK(e.value <= 30.0 + 2 * e.std_error);
    scn_trial t{};
    CHECK(scn_sim_outcome(s, 119, &t) == SCN_OK);
    CHECK(scn_sim_outcome(s, 120, &t) == SCN_ERR_INVALID_ARGUMENT);
    const auto path = (std::filesystem::temp_directory_path() / "scn_capi_trials.csv").string();
    CHECK(scn_sim_write_trials_csv(s, path.c_str()) == SCN_OK);
    std::filesystem::remove(path);
    scn_sim_free(s);

    CHECK(scn_sim_create(m, &net, 0.001, 120, 5, nullptr, 0, &s) == SCN_ERR_INVALID_ARGUMENT);
    scn_model_free(m);
}

TEST_CASE("config and sweeps") {
    scn_config* cfg = nullptr;
    REQUIRE(scn_config_default(&cfg) == SCN_OK);
    double q = 0.0;
    CHECK(scn_config_q_star(cfg, &q) == SCN_OK);
    CHECK(q == 4.18);
    CHECK(scn_config_set(cfg, "nonsense=1") == SCN_ERR_CONFIG);
    CHECK(scn_config_set(cfg, "lambda_grid=10,100") == SCN_OK);
    CHECK(scn_config_set(cfg, "trials=0") == SCN_OK);

    scn_sweep* sw = nullptr;
    REQUIRE(scn_sweep_coverage(cfg, "3gpp-case1-imc,3gpp-case1-fullload", &sw) == SCN_OK);
    CHECK(scn_sweep_row_count(sw) == 4);
    double v = 0.0;
    int present = 0;
    CHECK(scn_sweep_value(sw, 0, "p_cov_analytical", &v, &present) == SCN_OK);
    CHECK(present == 1);
    CHECK(v > 0.0);
    CHECK(scn_sweep_value(sw, 0, "p_cov_mc", &v, &present) == SCN_OK);
    CHECK(present == 0);
    CHECK(scn_sweep_value(sw, 0, "no_such_column", &v, &present) == SCN_ERR_INVALID_ARGUMENT);
    CHECK(std::string(scn_sweep_scenario(sw, 0)).find("3gpp-case1") == 0);

    const auto path = (std::filesystem::temp_directory_path() / "scn_capi_sweep.csv").string();
    CHECK(scn_sweep_write_csv(sw, path.c_str()) == SCN_OK);
    scn_sweep* back = nullptr;
    CHECK(scn_sweep_read_csv(path.c_str(), &back) == SCN_OK);
    CHECK(scn_sweep_row_count(back) == 4);
    scn_sweep_free(back);
    std::filesystem::remove(path);
    CHECK(scn_sweep_write_csv(sw, "/nonexistent/dir/x.csv") == SCN_ERR_IO);
    scn_sweep_free(sw);

    CHECK(scn_sweep_coverage(cfg, "nope", &sw) == SCN_ERR_CONFIG);
    CHECK(scn_config_set(cfg, "lambda_grid=") == SCN_OK);
    CHECK(scn_sweep_coverage(cfg, "3gpp-case1-imc", &sw) == SCN_ERR_CONFIG);
    CHECK(std::string(scn_last_error()).find("lambda_grid") != std::string::npos);
    scn_config_free(cfg);

    CHECK(scn_config_load("/nonexistent/x.cfg", &cfg) == SCN_ERR_IO);
    scn_sweep_free(nullptr);
    scn_config_free(nullptr);
}
