#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "eplab/markovian.hpp"

using namespace eplab;

namespace {

const cd I(0.0, 1.0);

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

// Output gains of a two-mode system dx/dt = K x + B u, out = sqrt(2 ga) x_a - u_a, at frequency w
// (component e^{-i w t}); solved with a general 2x2 inverse.
Eigen::RowVector2cd resolvent_gains(const Eigen::Matrix2cd& K, const Eigen::Matrix2cd& B, double ga, double w) {
    const Eigen::Matrix2cd M = K + I * w * Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd X = -M.inverse() * B;
    Eigen::RowVector2cd out = std::sqrt(2.0 * ga) * X.row(0);
    out(0) -= 1.0;
    return out;
}

// Roots of the characteristic polynomial of K, as frequencies omega = i lambda sorted by real part.
std::pair<cd, cd> char_poly_frequencies(const Eigen::Matrix2cd& K) {
    const cd tr = K.trace(), det = K.determinant();
    const cd disc = std::sqrt(tr * tr - 4.0 * det);
    cd a = I * (tr - disc) / 2.0, b = I * (tr + disc) / 2.0;
    if (b.real() < a.real()) std::swap(a, b);
    return {a, b};
}

}  // namespace

TEST_CASE("eigen_numeric basics") {
    const double w0 = 3.7;
    const auto e = eigen_numeric(-I * w0 * Eigen::Matrix2cd::Identity());
    CHECK(rel(e.omega_minus, w0) < 1e-15);
    CHECK(rel(e.omega_plus, w0) < 1e-15);

    PTParams p;
    p.omega0 = 2.0;
    p.eps_bar = 0.0;
    const auto d = pt_eigenfrequencies(p);
    CHECK(d.omega_minus == cd(2.0, 0.0));
    CHECK(d.omega_plus == cd(2.0, 0.0));
    const auto dn = eigen_numeric(pt_ode_matrix(p));
    // A defective 2x2 matrix only resolves its double root to sqrt(machine epsilon).
    CHECK(std::abs(dn.omega_minus - 2.0) < 1e-7);
    CHECK(std::abs(dn.omega_plus - 2.0) < 1e-7);
}

TEST_CASE("PT eigenfrequency examples") {
    PTParams p;
    p.omega0 = 10.0;
    p.gamma = 2.0;
    p.eps_bar = 0.02;
    const auto e = pt_eigenfrequencies(p);
    const auto [lo, hi] = char_poly_frequencies(pt_ode_matrix(p));
    CHECK(rel(e.omega_minus, lo) < 1e-12);
    CHECK(rel(e.omega_plus, hi) < 1e-12);
    CHECK(e.omega_plus.real() - 10.0 == doctest::Approx(0.401995).epsilon(1e-6));

    PTParams q;
    q.eps_bar = 2.0;
    const auto f = pt_eigenfrequencies(q);
    const auto fn = eigen_numeric(pt_ode_matrix(q));
    CHECK(f.omega_plus.real() == doctest::Approx(2.828427).epsilon(1e-6));
    CHECK(rel(f.omega_plus, fn.omega_plus) < 1e-12);

    PTParams a, b;
    a.eps_bar = 1e-4;
    b.eps_bar = 1e-4 / 4.0;
    const auto ea = eigen_numeric(pt_ode_matrix(a)), eb = eigen_numeric(pt_ode_matrix(b));
    const double ratio = (ea.omega_plus - ea.omega_minus).real() / (eb.omega_plus - eb.omega_minus).real();
    CHECK(std::abs(ratio / 2.0 - 1.0) < 1e-4);
}

TEST_CASE("passive and active eigenfrequency examples") {
    PassiveParams p;
    p.gamma_a = p.gamma_b = 1.3;
    p.eps = 0.4;
    const auto d = passive_eigenfrequencies(p);
    CHECK(rel(d.omega_minus, cd(0, -1.3)) < 1e-15);
    CHECK(rel(d.omega_plus, cd(0, -1.3)) < 1e-15);

    p.gamma_a = 2.0;
    p.gamma_b = 1.0;
    p.eps = 0.0;
    const auto z = passive_eigenfrequencies(p);
    CHECK(rel(z.omega_minus, cd(0, -1.5)) < 1e-15);
    CHECK(rel(z.omega_plus, cd(0, -1.5)) < 1e-15);

    p.eps = 0.02;
    const auto e = passive_eigenfrequencies(p);
    const auto n = eigen_numeric(passive_ode_matrix(p));
    CHECK(rel(e.omega_plus, n.omega_plus) < 1e-12);
    CHECK(rel(e.omega_minus, n.omega_minus) < 1e-12);
    CHECK(e.omega_plus.real() == doctest::Approx(0.100499).epsilon(1e-5));
    CHECK(e.omega_plus.imag() == doctest::Approx(-1.5));

    ActiveParams a;
    a.gamma = a.g = 1.0;
    a.eps = 0.05;
    const auto r = active_eigenfrequencies(a);
    CHECK(r.omega_minus.imag() == 0.0);
    CHECK(r.omega_plus.imag() == 0.0);

    a.g = 0.5;
    a.eps = 0.0;
    const auto ad = active_eigenfrequencies(a);
    CHECK(rel(ad.omega_minus, cd(0, -0.25)) < 1e-15);
    CHECK(rel(ad.omega_plus, cd(0, -0.25)) < 1e-15);

    a.eps = 0.02;
    const auto ae = active_eigenfrequencies(a);
    const auto an = eigen_numeric(active_ode_matrix(a));
    CHECK(rel(ae.omega_plus, an.omega_plus) < 1e-12);
    CHECK(ae.omega_plus.real() == doctest::Approx(0.150748).epsilon(1e-5));
    CHECK(ae.omega_plus.imag() == doctest::Approx(-0.25));
}

TEST_CASE("closed forms match the eigensolver on random draws") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        PTParams p;
        p.omega0 = 20.0 * u(rng) - 10.0;
        p.gamma = log_uniform(rng, 1e-2, 1e2);
        p.eps_bar = log_uniform(rng, 1e-6, 1e-1);
        const auto e = pt_eigenfrequencies(p), n = eigen_numeric(pt_ode_matrix(p));
        const double scale = std::max(std::abs(e.omega_plus), std::abs(e.omega_minus));
        worst = std::max({worst, std::abs(e.omega_plus - n.omega_plus) / scale,
                          std::abs(e.omega_minus - n.omega_minus) / scale});

        PassiveParams q;
        q.omega0 = p.omega0;
        q.gamma_a = log_uniform(rng, 1e-2, 1e2);
        q.gamma_b = log_uniform(rng, 1e-2, 1e2);
        q.eps = (u(rng) < 0.5 ? -1.0 : 1.0) * log_uniform(rng, 1e-6, 1e-1);
        const auto qe = passive_eigenfrequencies(q), qn = eigen_numeric(passive_ode_matrix(q));
        const double qs = std::max(std::abs(qe.omega_plus), std::abs(qe.omega_minus));
        worst = std::max({worst, std::abs(qe.omega_plus - qn.omega_plus) / qs,
                          std::abs(qe.omega_minus - qn.omega_minus) / qs});

        ActiveParams a;
        a.omega0 = p.omega0;
        a.gamma = log_uniform(rng, 1e-2, 1e2);
        a.g = a.gamma * u(rng);
        a.eps = log_uniform(rng, 1e-6, 1e-1);
        const auto ae = active_eigenfrequencies(a), an = eigen_numeric(active_ode_matrix(a));
        const double as = std::max(std::abs(ae.omega_plus), std::abs(ae.omega_minus));
        worst = std::max({worst, std::abs(ae.omega_plus - an.omega_plus) / as,
                          std::abs(ae.omega_minus - an.omega_minus) / as});
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("sqrt(eps) splitting slope") {
    std::vector<double> eps, split;
    for (double e : logspace(1e-6, 1e-2, 25)) {
        PTParams p;
        p.eps_bar = e;
        const auto w = pt_eigenfrequencies(p);
        eps.push_back(e);
        split.push_back((w.omega_plus - w.omega_minus).real());
    }
    CHECK(std::abs(loglog_slope(eps, split) - 0.5) <= 1e-3);
}

TEST_CASE("passive transfer functions") {
    PassiveParams p;
    p.gamma_a = p.gamma_b = 1.0;
    p.eps = 0.0;
    const auto t = passive_transfer_functions(p, {0.0});
    CHECK(rel(t.at("a")[0], 1.0) < 1e-15);
    CHECK(std::abs(t.at("b")[0]) == 0.0);

    const auto far = passive_transfer_functions(p, {1e8});
    CHECK(std::abs(far.at("a")[0] + 1.0) < 1e-7);
    CHECK(std::abs(far.at("b")[0]) < 1e-7);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        PassiveParams q;
        q.omega0 = u(rng);
        q.gamma_a = log_uniform(rng, 0.1, 10.0);
        q.gamma_b = log_uniform(rng, 0.1, 10.0);
        q.eps = u(rng) / 3.0;
        const double w = u(rng);
        const auto h = passive_transfer_functions(q, {w});
        Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
        B(0, 0) = std::sqrt(2.0 * q.gamma_a);
        B(1, 1) = std::sqrt(2.0 * q.gamma_b);
        const auto g = resolvent_gains(passive_ode_matrix(q), B, q.gamma_a, w);
        CHECK(rel(h.at("a")[0], g(0)) < 1e-12);
        CHECK(std::abs(std::abs(h.at("b")[0]) - std::abs(g(1))) < 1e-12);
        // Lossless coupling of two loss ports is unitary.
        CHECK(std::norm(h.at("a")[0]) + std::norm(h.at("b")[0]) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("passive and active gains are linear in eps at the degeneracy") {
    auto ha = [](double eps) {
        PassiveParams p;
        p.gamma_a = 1.0;
        p.gamma_b = 0.3;
        p.eps = eps;
        return passive_transfer_functions(p, {0.2}).at("a")[0];
    };
    auto hi = [](double eps) {
        ActiveParams a;
        a.gamma = 1.0;
        a.g = 0.5;
        a.eps = eps;
        return active_transfer_functions(a, {0.2}).at("in")[0];
    };
    for (auto h : {std::function<cd(double)>(ha), std::function<cd(double)>(hi)}) {
        const cd d6 = (h(1e-6) - h(-1e-6)) / 2e-6;
        const cd d5 = (h(1e-5) - h(-1e-5)) / 2e-5;
        CHECK(std::isfinite(std::abs(h(0.0))));
        CHECK(rel(d6, d5) < 1e-4);
    }
}

TEST_CASE("active transfer functions") {
    ActiveParams a;
    a.gamma = 1.0;
    a.g = 0.0;
    a.eps = 0.3;
    PassiveParams p;
    p.gamma_a = 1.0;
    p.gamma_b = 1e-13;
    p.eps = 0.3;
    for (double w : {-0.7, 0.1, 1.9}) {
        const auto ha = active_transfer_functions(a, {w}).at("in")[0];
        const auto hp = passive_transfer_functions(p, {w}).at("a")[0];
        CHECK(rel(ha, hp) < 1e-9);
    }
    CHECK(std::abs(active_transfer_functions(a, {1e8}).at("in")[0] + 1.0) < 1e-7);

    ActiveParams b;
    b.gamma = 1.0;
    b.g = 0.5;
    b.eps = 0.0;
    const auto h = active_transfer_functions(b, {0.0});
    Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
    B(0, 0) = std::sqrt(2.0 * b.gamma);
    B(1, 1) = std::sqrt(2.0 * b.g);
    const auto g = resolvent_gains(active_ode_matrix(b), B, b.gamma, 0.0);
    CHECK(std::isfinite(std::abs(h.at("in")[0])));
    CHECK(rel(h.at("in")[0], g(0)) < 1e-12);
    CHECK(std::abs(std::abs(h.at("amp")[0]) - std::abs(g(1))) < 1e-12);
}

TEST_CASE("passive output spectrum") {
    PassiveParams p;
    p.gamma_a = 1.0;
    p.gamma_b = 0.4;
    p.eps = 0.2;
    const std::vector<double> grid = {-0.5, 0.0, 0.3};
    const auto t = passive_transfer_functions(p, grid);
    Spectrum sa{grid, {2.0, 2.0, 2.0}}, sb{grid, {0.0, 0.0, 0.0}};
    const auto only_a = passive_output_spectrum(p, sa, sb, std::vector<cd>(3), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(only_a.values[i] == std::norm(t.at("a")[i]) * 2.0);

    const auto vac = passive_output_spectrum(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(vac.values[i] == doctest::Approx((std::norm(t.at("a")[i]) + std::norm(t.at("b")[i])) / 2.0));

    // Monte Carlo mixture: ua = x1, ub = c x1 + d x2 with unit complex normals x1, x2.
    const cd c(0.3, -0.4), d(0.7, 0.2);
    const cd ha = t.at("a")[2], hb = t.at("b")[2];
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    double acc = 0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) {
        const cd x1(n(rng), n(rng)), x2(n(rng), n(rng));
        acc += std::norm(ha * x1 + hb * (c * x1 + d * x2));
    }
    Spectrum sa1{{0.3}, {1.0}}, sb1{{0.3}, {std::norm(c) + std::norm(d)}};
    const auto mix = passive_output_spectrum(p, sa1, sb1, {std::conj(c)}, {0.3});
    CHECK(std::abs(acc / draws / mix.values[0] - 1.0) < 0.01);
    CHECK_THROWS_AS(passive_output_spectrum(p, sa1, sb1, {std::conj(c)}, {0.4}), ShapeError);
}

TEST_CASE("PT quadrature gains against a direct linear solve") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        PTParams p;
        p.omega0 = 5.0 * u(rng);
        p.gamma = log_uniform(rng, 0.1, 10.0);
        p.eps_bar = log_uniform(rng, 1e-4, 0.5);
        p.gamma_reg = i % 2 ? 0.0 : 0.01 * p.gamma;
        const double w = i == 0 ? p.omega0 : p.omega0 + p.gamma * u(rng);
        Eigen::Matrix2cd B = Eigen::Matrix2cd::Zero();
        B(0, 0) = B(1, 1) = std::sqrt(2.0 * p.gamma);
        // Solve in the frame rotating at omega0 so that the gain matrix is real.
        PTParams r = p;
        r.omega0 = 0.0;
        const auto g = resolvent_gains(pt_ode_matrix(r), B, p.gamma, w - p.omega0);
        const auto gp = pt_gains(p, nullptr, w, Quadrature::p);
        const auto gq = pt_gains(p, nullptr, w, Quadrature::q);
        CHECK(rel(gp.in, g(0)) < 1e-12);
        CHECK(rel(gq.in, g(0)) < 1e-12);
        CHECK(rel(gq.amp, g(1)) < 1e-12);
        CHECK(rel(gp.amp, -g(1)) < 1e-12);
    }
}

TEST_CASE("PT sideband channels") {
    PTParams p;
    p.eps_bar = 0.01;
    MeanField dark;
    dark.a_plus = dark.a_minus = dark.b_plus = dark.b_minus = 0.0;
    const auto g = pt_gains(p, &dark, 0.05, Quadrature::p);
    CHECK(g.de_plus == cd(0.0));
    CHECK(g.de_minus == cd(0.0));

    PTParams q;
    q.eps_bar = 1e-4;
    const double w = q.splitting_half() + 1e-6;
    const auto h = pt_gains(q, nullptr, w, Quadrature::p);
    CHECK(std::abs(std::abs(h.in) / std::abs(h.amp) - 1.0) < 0.01);
}

TEST_CASE("exact PT spectrum") {
    PTParams p;
    p.gamma = 1.0;
    p.eps_bar = 1e-2;
    p.n_in = 0.3;
    CHECK(pt_output_spectrum_exact(p, 1e6) == doctest::Approx(0.5 + p.n_in).epsilon(1e-6));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double d = u(rng);
        CHECK(pt_output_spectrum_exact(p, d) == doctest::Approx(pt_output_spectrum_exact(p, -d)).epsilon(1e-12));
    }

    PTParams z;
    z.eps_bar = 1e-2;
    const double d = 1e-3;
    const double oracle = z.gamma * z.gamma / (2.0 * z.eps_bar * d * d);
    CHECK(oracle == doctest::Approx(5.0e7));
    CHECK(std::abs(pt_output_spectrum_exact(z, z.splitting_half() + d) / oracle - 1.0) <= 0.02);

    const auto grid = std::vector<double>{0.05, 0.5};
    const auto sq = pt_output_spectrum_exact(z, grid, Quadrature::q);
    const auto sp = pt_output_spectrum_exact(z, grid, Quadrature::p);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(sq.values[i] == doctest::Approx(sp.values[i]).epsilon(1e-14));

    CHECK_THROWS_AS(pt_output_spectrum_exact(z, z.splitting_half() + 1e-11), PoleError);
    CHECK_NOTHROW(pt_output_spectrum_exact(z, z.splitting_half() + 1e-8));
}

TEST_CASE("exact vs near-resonance spectrum") {
    PTParams p;
    p.eps_bar = 1e-3;
    const double s = p.splitting_half();
    for (double res : {-s, s})
        for (double d : {-1e-5, -1e-6, 1e-6, 1e-5})
            CHECK(std::abs(pt_output_spectrum_exact(p, res + d) / pt_output_spectrum_near_resonance(p, d) - 1.0) <= 0.02);
}

TEST_CASE("near-resonance spectrum scalings") {
    PTParams p;
    p.eps_bar = 1e-2;
    CHECK(pt_output_spectrum_near_resonance(p, 1e-3) == doctest::Approx(5.0e7).epsilon(1e-14));
    PTParams h = p;
    h.n_in = h.n_amp = 0.5;
    CHECK(pt_output_spectrum_near_resonance(h, 1e-3) / pt_output_spectrum_near_resonance(p, 1e-3) ==
          doctest::Approx(2.0).epsilon(1e-14));
    for (double e : {1e-4, 1e-3}) {
        PTParams a, b;
        a.eps_bar = e;
        b.eps_bar = 10.0 * e;
        CHECK(pt_output_spectrum_near_resonance(a, 1e-4) / pt_output_spectrum_near_resonance(b, 1e-4) ==
              doctest::Approx(10.0).epsilon(1e-14));
    }
}

TEST_CASE("frequency-noise chain") {
    PTParams p;
    p.eps_bar = 0.01;
    const double a = frequency_noise_spectrum(pt_output_spectrum_near_resonance(p, 1e-3), 1e-3, 1.0, 1.0);
    const double oracle = 1.0 / (8.0 * 1.0 * 0.01);
    CHECK(oracle == 12.5);
    CHECK(a == doctest::Approx(oracle).epsilon(1e-12));
    const double b = frequency_noise_spectrum(pt_output_spectrum_near_resonance(p, 1e-4), 1e-4, 1.0, 1.0);
    CHECK(std::abs(a / b - 1.0) <= 1e-12);
    const double c = frequency_noise_spectrum(pt_output_spectrum_near_resonance(p, 1e-3), 1e-3, 1.0, 2.0);
    CHECK(c == doctest::Approx(a / 4.0).epsilon(1e-14));

    std::vector<double> prod;
    for (double e : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
        PTParams q;
        q.eps_bar = e;
        prod.push_back(e * frequency_noise_spectrum(pt_output_spectrum_near_resonance(q, 1e-7), 1e-7, 1.0, 1.0));
    }
    for (double v : prod) CHECK(v == doctest::Approx(prod.front()).epsilon(1e-12));
}

TEST_CASE("weak-force output spectrum") {
    PTParams p;
    p.eps_bar = 1e-4;
    const auto mean = mean_field_solution(p, cd(1.0, 0.0), cd(0.0, 1.0));
    const double s = p.splitting_half();
    const std::vector<double> grid = {s + 1e-6, s + 3e-6, -s - 2e-6};
    Spectrum zero{{-1.0, 1.0}, {0.0, 0.0}};
    const auto quiet = weak_force_output_spectrum(p, mean, zero, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = std::abs(std::abs(grid[i]) - s);
        CHECK(std::abs(quiet.values[i] / pt_output_spectrum_near_resonance(p, d) - 1.0) < 0.01);
    }

    const double see = 0.37;
    Spectrum white{{-1.0, 1.0}, {see, see}};
    const auto loud = weak_force_output_spectrum(p, mean, white, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto g = pt_gains(p, &mean, grid[i], Quadrature::p);
        const double oracle = std::norm(g.in) * (0.5 + p.n_in) + std::norm(g.amp) * (0.5 + p.n_amp) +
                              (std::norm(g.de_minus) + std::norm(g.de_plus)) * see;
        CHECK(std::abs(loud.values[i] / oracle - 1.0) < 0.01);
    }
}

TEST_CASE("diagonal perturbations") {
    const auto c = diagonal_perturbation_eigen(DiagonalKind::common_frequency, 1.0, 5.0, 0.01);
    CHECK(c.degenerate);
    CHECK(c.classification == DiagonalClass::degeneracy_not_lifted);
    CHECK(rel(c.eigenvalues.omega_plus, 5.05) < 1e-14);
    CHECK(rel(c.eigenvalues.omega_minus, 5.05) < 1e-14);

    const auto g = diagonal_perturbation_eigen(DiagonalKind::differential_gainloss, 1.0, 3.0, 0.01);
    CHECK(g.classification == DiagonalClass::linear_response);
    CHECK(rel(g.eigenvalues.omega_plus, cd(3.0, 0.01)) < 1e-12);
    const auto gn = eigen_numeric(diagonal_perturbation_matrix(DiagonalKind::differential_gainloss, 1.0, 3.0, 0.01));
    CHECK(std::abs(gn.omega_plus - cd(3.0, 0.01)) < 1e-7);

    const double w0 = 100.0, eps = 1e-4;
    const auto f = diagonal_perturbation_eigen(DiagonalKind::differential_frequency, 1.0, w0, eps);
    CHECK(f.classification == DiagonalClass::reverts_below_threshold);
    const auto fn = eigen_numeric(diagonal_perturbation_matrix(DiagonalKind::differential_frequency, 1.0, w0, eps));
    CHECK(rel(f.eigenvalues.omega_minus, fn.omega_minus) < 1e-10);
    CHECK(rel(f.eigenvalues.omega_plus, fn.omega_plus) < 1e-10);
    const cd root = std::sqrt(2.0 * I * w0 * eps - eps * eps * w0 * w0);
    const bool match = rel(f.eigenvalues.omega_plus, w0 + I * root) < 1e-10 || rel(f.eigenvalues.omega_plus, w0 - I * root) < 1e-10;
    CHECK(match);
    CHECK(std::max(f.eigenvalues.omega_plus.imag(), f.eigenvalues.omega_minus.imag()) > 0.0);

    for (auto k : {DiagonalKind::common_gainloss, DiagonalKind::differential_frequency, DiagonalKind::common_frequency}) {
        const auto r = diagonal_perturbation_eigen(k, 1.3, 7.0, 0.03);
        const auto n = eigen_numeric(diagonal_perturbation_matrix(k, 1.3, 7.0, 0.03));
        CHECK(std::abs(r.eigenvalues.omega_minus - n.omega_minus) < 1e-6);
        CHECK(std::abs(r.eigenvalues.omega_plus - n.omega_plus) < 1e-6);
        CHECK(parse_diagonal_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_diagonal_kind("nonsense"), UsageError);
}
