#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <random>

#include "eplab/core.hpp"
#include "eplab/nonmarkovian.hpp"

using namespace eplab;

namespace {

bool mentions(const ValidationError& e, const std::string& text) {
    for (const auto& v : e.violations())
        if (v.find(text) != std::string::npos) return true;
    return false;
}

template <class P>
std::vector<std::string> errors_of(const P& p) {
    try {
        validate(p);
    } catch (const ValidationError& e) {
        return e.violations();
    }
    return {};
}

}  // namespace

TEST_CASE("thermal occupation limits") {
    CHECK(thermal_occupation(1e15, 0.0) == 0.0);
    const double T = 4.2;
    const double w = std::log(2.0) * kBoltzmann * T / kHbar;
    CHECK(thermal_occupation(w, T) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(thermal_occupation(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(thermal_occupation(1.0, -1.0), DomainError);
}

TEST_CASE("thermal occupation matches 50-digit evaluation") {
    using big = boost::multiprecision::cpp_dec_float_50;
    const double w = kTwoPi * 1e14, T = 300.0;
    const big x = big(kHbar) * big(w) / (big(kBoltzmann) * big(T));
    const big n = 1 / (exp(x) - 1);
    const double ref = n.convert_to<double>();
    CHECK(std::abs(thermal_occupation(w, T) / ref - 1.0) < 1e-13);
    for (double t : {1.0, 10.0, 1000.0}) {
        const big xt = big(kHbar) * big(1e13) / (big(kBoltzmann) * big(t));
        const double r = (1 / (exp(xt) - 1)).convert_to<double>();
        CHECK(std::abs(thermal_occupation(1e13, t) / r - 1.0) < 1e-13);
    }
}

TEST_CASE("thermal occupation decreases in omega and increases in T") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lw(std::log(1e9), std::log(1e15)), lt(std::log(0.01), std::log(1e4));
    for (int i = 0; i < 200; ++i) {
        const double w = std::exp(lw(rng)), t = std::exp(lt(rng));
        const double n = thermal_occupation(w, t);
        if (n < 1e-300) continue;
        CHECK(thermal_occupation(w * 1.01, t) < n);
        CHECK(thermal_occupation(w, t * 1.01) > n);
    }
}

TEST_CASE("carrier factor and mean field") {
    CHECK(carrier_factor(0.0, +1) == cd(1.0, 0.0));
    const cd f = carrier_factor(0.02, +1);
    // sqrt(0.02 * 2.02) = 0.2009975...
    const double root = std::sqrt(0.0404);
    CHECK(f.real() == doctest::Approx(1.0 / 1.02).epsilon(1e-15));
    CHECK(f.imag() == doctest::Approx(-root / 1.02).epsilon(1e-15));
    CHECK(root == doctest::Approx(0.200998).epsilon(1e-6));
    CHECK(std::hypot(f.real(), f.imag()) == doctest::Approx(1.0).epsilon(1e-15));

    PTParams p;
    p.gamma = 1.0;
    const auto m = mean_field_solution(p, 1.0, 1.0);
    CHECK(m.flux_plus == doctest::Approx(2.0));
    CHECK(m.flux_minus == doctest::Approx(2.0));
}

TEST_CASE("|b| = |a| for every eps") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> le(std::log(1e-8), std::log(10.0)), u(-2.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        PTParams p;
        p.eps_bar = std::exp(le(rng));
        const cd ap(u(rng), u(rng)), am(u(rng), u(rng));
        const auto m = mean_field_solution(p, ap, am);
        CHECK(std::abs(std::abs(m.b_plus) - std::abs(ap)) <= 1e-14 * std::abs(ap));
        CHECK(std::abs(std::abs(m.b_minus) - std::abs(am)) <= 1e-14 * std::abs(am));
        CHECK(m.flux_plus >= 0.0);
    }
}

TEST_CASE("parameter validation") {
    PTParams pt;
    pt.eps_bar = 0.0;
    try {
        validate(pt);
        FAIL("eps_bar = 0 accepted");
    } catch (const ValidationError& e) {
        CHECK(mentions(e, "eps_bar must be > 0"));
    }

    PTParams n;
    n.n_in = 1.0;
    n.n_amp = 3.0;
    CHECK(n.n_th() == 2.0);

    ActiveParams a;
    a.gamma = 1.0;
    a.g = 1.0;
    CHECK(errors_of(a).empty());
    a.g = 1.0 + 1e-12;
    CHECK_FALSE(errors_of(a).empty());

    PhaseSensitiveParams ps;
    ps.gamma_a = 1.0;
    ps.gamma_b = 0.5;
    ps.r = 1.6;
    try {
        validate(ps);
        FAIL("r above gamma_a + gamma_b accepted");
    } catch (const ValidationError& e) {
        CHECK(mentions(e, "r must satisfy 0 <= r <= gamma_a + gamma_b"));
    }
    ps.r = 1.5;
    CHECK(errors_of(ps).empty());
    CHECK(ps.gamma_amp() == 0.0);

    LoopParams l;
    l.omega0 = 1.0;
    CHECK_FALSE(errors_of(l).empty());
    l.omega0 = kTwoPi / l.tau * 3.0;
    CHECK(errors_of(l).empty());

    PassiveParams bad;
    bad.gamma_a = -1.0;
    bad.n_b = -1.0;
    CHECK(errors_of(bad).size() == 2);
}

TEST_CASE("loop gain calibration identities") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ue(1e-6, 0.999), ueps(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double eta = ue(rng), eps = ueps(rng);
        const auto c = calibrate_loop(eta, eps);
        CHECK(std::sqrt(1.0 + c.G) * std::sqrt(1.0 - eta) == doctest::Approx(1.0).epsilon(1e-14));
        if (eta < 0.5) {
            CHECK(c.mu > 0.0);
            CHECK(c.mu < 1.0);
        }
    }
}

TEST_CASE("phase-sensitive loop gain balance") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ue(1e-5, 0.5), uf(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        PSLoopParams q;
        q.eta = ue(rng);
        q.xi = uf(rng) * PSLoopParams::pure_xi(q.eta);
        CHECK(std::exp(q.xi) * std::sqrt(1.0 + q.G()) * std::sqrt(1.0 - q.eta) == doctest::Approx(1.0).epsilon(1e-13));
        q.xi = PSLoopParams::pure_xi(q.eta);
        CHECK(std::abs(q.G()) < 1e-14);
    }
    PSLoopParams over;
    over.xi = 2.0 * PSLoopParams::pure_xi(over.eta);
    CHECK_FALSE(errors_of(over).empty());
}

TEST_CASE("grids and spectra") {
    const auto l = linspace(-1.0, 1.0, 5);
    CHECK(l == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    const auto g = logspace(1e-3, 1e3, 7);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g[3] == doctest::Approx(1.0));
    std::vector<double> y;
    for (double x : g) y.push_back(3.0 * std::pow(x, 1.5));
    CHECK(loglog_slope(g, y) == doctest::Approx(1.5).epsilon(1e-12));

    Spectrum s{{0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}};
    CHECK_NOTHROW(s.check());
    CHECK(s.interpolate(1.5) == 4.0);
    CHECK_THROWS_AS(s.interpolate(3.0), DomainError);
    Spectrum bad{{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(bad.check(), ShapeError);
}
