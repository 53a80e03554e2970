#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eplab/estimation.hpp"

using namespace eplab;

namespace {

PTParams pt(double eps, double gamma = 1.0) {
    PTParams p;
    p.gamma = gamma;
    p.eps_bar = eps;
    return p;
}

double splitting(double gamma, double eps) {
    const auto e = pt_eigenfrequencies(pt(eps, gamma));
    return (e.omega_plus - e.omega_minus).real();
}

}  // namespace

TEST_CASE("sensitivity") {
    CHECK(sensitivity(1.0, 2.0) == doctest::Approx(2.1213).epsilon(1e-4));
    for (double eps : {1e-4, 1e-2, 0.5, 2.0}) {
        const double h = 1e-4 * eps;
        const double fd = (splitting(1.3, eps + h) - splitting(1.3, eps - h)) / (2.0 * h);
        CHECK(sensitivity(1.3, eps) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK_THROWS_AS(sensitivity(1.0, 0.0), DomainError);
}

TEST_CASE("noise level and frequency noise") {
    CHECK(noise_level(12.5, 12.5, kTwoPi) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(noise_level(-1.0, 1.0, 1.0), DomainError);
    CHECK(fundamental_frequency_noise(1.0, 0.01, 1.0, 0.0) == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(fundamental_frequency_noise(1.0, 0.01, 2.0, 0.0) == doctest::Approx(12.5 / 4.0).epsilon(1e-15));
    CHECK_THROWS_AS(fundamental_frequency_noise(1.0, 0.01, 0.0, 0.0), NoCarrierError);
    // Chain from the near-resonance spectrum reproduces the flat form for any offset.
    for (double d : {1e-6, 1e-4, 1e-3}) {
        const double chain = frequency_noise_spectrum(pt_output_spectrum_near_resonance(pt(0.01), d), d, 1.0, 1.0);
        CHECK(chain == doctest::Approx(fundamental_frequency_noise(1.0, 0.01, 1.0, 0.0)).epsilon(1e-12));
    }
}

TEST_CASE("imprecision closed form") {
    const auto mean = mean_field_solution(pt(0.01), 1.0, 1.0);
    CHECK(imprecision_closed_form(pt(0.01), mean, 16.0 * kPi) == doctest::Approx(1.0).epsilon(1e-15));
    auto hot = pt(0.01);
    hot.n_in = hot.n_amp = 0.5;
    CHECK(imprecision_closed_form(hot, mean, 16.0 * kPi) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    const auto dark = mean_field_solution(pt(0.01), 1.0, 0.0);
    CHECK_THROWS_AS(imprecision_closed_form(pt(0.01), dark, 1.0), NoCarrierError);
    CHECK_THROWS_AS(imprecision(pt(0.01), dark, 1.0), NoCarrierError);
}

TEST_CASE("imprecision is independent of eps") {
    std::vector<double> eps, exact, chain;
    for (double e : logspace(1e-6, 1e-2, 9)) {
        const auto p = pt(e);
        const auto mean = mean_field_solution(p, 1.0, 1.0);
        const auto x = imprecision(p, mean, 16.0 * kPi);
        const auto c = imprecision_near_resonance(p, mean, 16.0 * kPi);
        CHECK(x.formula_id == formula::kImprecisionExact);
        CHECK(c.formula_id == formula::kImprecisionChain);
        CHECK(std::abs(x.imprecision / x.closed_form - 1.0) < 0.01);
        // The chain keeps the exact sensitivity; the closed form is its small-eps limit.
        CHECK(c.imprecision == doctest::Approx(c.closed_form * std::sqrt((2.0 + e) / 2.0) / (1.0 + e)).epsilon(1e-9));
        eps.push_back(e);
        exact.push_back(x.imprecision);
        chain.push_back(c.imprecision);
    }
    CHECK(std::abs(loglog_slope(eps, exact)) < 0.01);
    CHECK(std::abs(loglog_slope(eps, chain)) < 1e-3);
}

TEST_CASE("technical noise") {
    CHECK(technical_imprecision(0.0625, 0.0625, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(technical_imprecision(0.0, 1.0, 1.0, 0.5) ==
          doctest::Approx(technical_imprecision(0.0, 1.0, 1.0, 1.0) / std::sqrt(2.0)).epsilon(1e-15));

    std::vector<double> eps, value, root;
    for (double e : logspace(1e-6, 1e-2, 9)) {
        const double v = technical_imprecision(1e-9, 1.0, 1.0, e);
        eps.push_back(e);
        value.push_back(v);
        root.push_back(std::sqrt(v));
    }
    CHECK(loglog_slope(eps, value) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(loglog_slope(eps, root) == doctest::Approx(0.25).epsilon(0.01));

    const double s_tech = 3.0;
    const double e_star = crossover_epsilon(s_tech, 1.0, 1.0, 0.0);
    CHECK(fundamental_frequency_noise(1.0, e_star, 1.0, 0.0) == doctest::Approx(s_tech).epsilon(1e-14));
    CHECK(fundamental_frequency_noise(1.0, 2.0 * e_star, 1.0, 0.0) < s_tech);
    CHECK_THROWS_AS(crossover_epsilon(0.0, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("weak-force SNR") {
    const double s = 1e-3;
    double first = 0;
    for (double e : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const auto p = pt(e);
        const auto mean = mean_field_solution(p, 1.0, 1.0);
        const double snr = weak_force_snr(p, mean, s, 0.0);
        if (first == 0) first = snr;
        CHECK(snr == doctest::Approx(first).epsilon(1e-12));
    }

    const auto p = pt(1e-4);
    const auto mean = mean_field_solution(p, 1.0, cd(0.0, 1.0));
    const double printed = weak_force_snr(p, mean, s, 0.0);
    const double exact = weak_force_snr_exact(p, mean, s, p.splitting_half() + 1e-7);
    CHECK(std::abs(exact / printed - 1.0) < 1e-3);

    // Exact SNR from the output spectra with and without modulation.
    const std::vector<double> at = {p.splitting_half() + 1e-7};
    const Spectrum white{{-1.0, 1.0}, {s, s}}, none{{-1.0, 1.0}, {0.0, 0.0}};
    const double ratio = weak_force_output_spectrum(p, mean, white, at).values[0] /
                         weak_force_output_spectrum(p, mean, none, at).values[0];
    CHECK(std::abs((ratio - 1.0) / exact - 1.0) < 1e-3);

    auto hot = p;
    hot.n_in = hot.n_amp = 0.5;
    CHECK(weak_force_snr(hot, mean, s, 0.5) == doctest::Approx(printed / 2.0).epsilon(1e-14));
}

TEST_CASE("phase-sensitive imprecision") {
    std::vector<double> eps, imp, noise;
    for (double e : logspace(1e-6, 1e-2, 9)) {
        PhaseSensitiveParams p;
        p.gamma_a = 1.0;
        p.gamma_b = 0.5;
        p.r = 1.5;
        p.eps_bar = e;
        const auto r = ps_imprecision(p, 1.0, 16.0 * kPi);
        CHECK(r.formula_id == formula::kImprecisionPhaseSensitive);
        eps.push_back(e);
        imp.push_back(r.imprecision);
        noise.push_back(r.noise);
    }
    CHECK(loglog_slope(eps, imp) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(loglog_slope(eps, noise)) < 1e-12);
    PhaseSensitiveParams p;
    p.r = 0.5;
    CHECK_THROWS_AS(ps_imprecision(p, 0.0, 1.0), NoCarrierError);
}
