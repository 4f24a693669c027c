#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scn/association.hpp"
#include "scn/error.hpp"
#include "scn/numerics.hpp"

using namespace scn;
using std::numbers::pi;

namespace {

constexpr double kALos = 4.168693834703355e-11;
constexpr double kANlos = 2.884031503126606e-15;

double pr_los(double u) { return u < 0.3 ? 1.0 - u / 0.3 : 0.0; }

// Direct transcription of the serving-distance densities with brute-force
// inner quadrature and closed-form equal-gain radii.
double oracle_pdf(Path path, double r, double lambda) {
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-16;
    const auto los_mass = [&](double to) {
        const std::vector<double> pts = to > 0.3 ? std::vector<double>{0.0, 0.3, to} : std::vector<double>{0.0, to};
        return numerics::integrate_split([](double u) { return pr_los(u) * 2 * pi * u; }, pts, spec);
    };
    const auto nlos_mass = [&](double to) { return pi * to * to - los_mass(to); };
    if (path == Path::LoS) {
        const double r1 = std::pow(kANlos / (kALos * std::pow(r, -2.09)), 1.0 / 3.75);
        return std::exp(-lambda * (nlos_mass(r1) + los_mass(r))) * pr_los(r) * 2 * pi * r * lambda;
    }
    const double r2 = std::pow(kALos / (kANlos * std::pow(r, -3.75)), 1.0 / 2.09);
    return std::exp(-lambda * (los_mass(r2) + nlos_mass(r))) * (1.0 - pr_los(r)) * 2 * pi * r * lambda;
}

}  // namespace

TEST_CASE("single slope reduces to the nearest-neighbour distance law") {
    const double lambda = 100.0;
    const DistanceDistributions d(make_single_slope(3.75, kANlos), lambda);
    const double r = 0.05;
    const double closed = 2 * pi * lambda * r * std::exp(-lambda * pi * r * r);
    CHECK(d.pdf(Path::NLoS, r) == doctest::Approx(closed).epsilon(1e-10));
    CHECK(d.pdf(Path::NLoS, r) == doctest::Approx(14.32372).epsilon(1e-6));
    CHECK(d.pdf(Path::LoS, r) == 0.0);
    CHECK(d.cdf(Path::NLoS, r) == doctest::Approx(0.5441).epsilon(1e-4));
    for (double x : numerics::logspace(1e-3, 0.5, 200)) {
        CHECK(std::abs(d.cdf(Path::NLoS, x) - (1.0 - std::exp(-lambda * pi * x * x))) < 1e-8);
    }
}

TEST_CASE("3GPP Case 1 pdf matches the brute-force oracle") {
    const auto m = make_3gpp_case1();
    for (double lambda : {10.0, 100.0, 1000.0}) {
        const DistanceDistributions d(m, lambda);
        for (double r : {0.005, 0.02, 0.08, 0.15, 0.29, 0.31, 0.6, 1.5}) {
            CHECK_MESSAGE(d.pdf(Path::LoS, r) == doctest::Approx(oracle_pdf(Path::LoS, r, lambda)).epsilon(1e-8),
                          "lambda=" << lambda << " r=" << r);
            CHECK_MESSAGE(d.pdf(Path::NLoS, r) == doctest::Approx(oracle_pdf(Path::NLoS, r, lambda)).epsilon(1e-8),
                          "lambda=" << lambda << " r=" << r);
        }
    }
}

TEST_CASE("LoS density vanishes beyond d1") {
    const DistanceDistributions d(make_3gpp_case1(), 100.0);
    for (double r : {0.3001, 0.5, 2.0}) CHECK(d.pdf(Path::LoS, r) == 0.0);
}

TEST_CASE("normalisation across densities") {
    const auto m = make_3gpp_case1();
    for (double lambda : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
        const DistanceDistributions d(m, lambda);
        CHECK_MESSAGE(std::abs(d.total_mass(Path::LoS) + d.total_mass(Path::NLoS) - 1.0) < 1e-6, "lambda=" << lambda);
        CHECK(d.cdf(Path::LoS, 1e6) + d.cdf(Path::NLoS, 1e6) == doctest::Approx(1.0).epsilon(1e-6));
    }
    const DistanceDistributions s(make_single_slope(3.75, kANlos), 3.0);
    CHECK(std::abs(s.total_mass(Path::NLoS) - 1.0) < 1e-6);
}

TEST_CASE("cdf basics") {
    const DistanceDistributions d(make_3gpp_case1(), 100.0);
    CHECK(d.cdf(Path::LoS, 0.0) == 0.0);
    CHECK(d.cdf(Path::NLoS, 0.0) == 0.0);
    double prev_l = 0.0;
    double prev_n = 0.0;
    for (double r : numerics::logspace(1e-5, 5.0, 2000)) {
        const double l = d.cdf(Path::LoS, r);
        const double n = d.cdf(Path::NLoS, r);
        CHECK(l >= prev_l - 1e-15);
        CHECK(n >= prev_n - 1e-15);
        prev_l = l;
        prev_n = n;
    }
    CHECK_THROWS_AS(d.pdf(Path::LoS, 0.0), Error);
}

TEST_CASE("pdf is non-negative") {
    const DistanceDistributions d(make_3gpp_case1(), 300.0);
    for (double r : numerics::logspace(1e-5, 10.0, 10000)) {
        CHECK(d.pdf(Path::LoS, r) >= 0.0);
        CHECK(d.pdf(Path::NLoS, r) >= 0.0);
    }
}

TEST_CASE("tabulated cdf agrees with direct quadrature and differentiates to the pdf") {
    const DistanceDistributions d(make_3gpp_case1(), 100.0);
    for (double r : numerics::logspace(2e-4, 2.0, 60)) {
        if (std::abs(r - 0.3) < 0.01) continue;  // derivative kink at the break point
        for (Path p : {Path::LoS, Path::NLoS}) {
            CHECK(d.cdf(p, r) == doctest::Approx(d.cdf_direct(p, r)).epsilon(1e-7).scale(1e-9));
            const double f = d.pdf(p, r);
            if (f < 1e-6) continue;
            const double h = 1e-4 * r;
            const double deriv = (d.cdf(p, r + h) - d.cdf(p, r - h)) / (2 * h);
            CHECK_MESSAGE(deriv == doctest::Approx(f).epsilon(1e-4), "r=" << r << " path=" << to_string(p));
        }
    }
}

TEST_CASE("invalid construction") {
    CHECK_THROWS_AS(DistanceDistributions(make_3gpp_case1(), 0.0), Error);
    CHECK_THROWS_AS(DistanceDistributions(make_3gpp_case1(), -5.0), Error);
}
