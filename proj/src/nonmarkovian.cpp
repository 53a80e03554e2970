#include "eplab/nonmarkovian.hpp"

#include <cmath>

#include "eplab/markovian.hpp"

namespace eplab {

namespace {

const cd I(0.0, 1.0);

// Wrapped per-pass detuning phase in (-pi, pi].
double wrapped_phase(double detuning, double tau) { return std::remainder(detuning * tau, kTwoPi); }

void guard_loop_poles(double w, double theta, double omega, const LoopParams& p) {
    if (std::abs(w - theta) <= kPoleGuard)
        throw PoleError("evaluation at the loop resonance Omega_0 + theta/tau", p.omega0 + theta / p.tau);
    if (std::abs(w + theta) <= kPoleGuard)
        throw PoleError("evaluation at the loop resonance Omega_0 - theta/tau", p.omega0 - theta / p.tau);
    (void)omega;
}

}  // namespace

double loop_theta(double eta, double eps) { return 0.5 * eta * std::sqrt(eps * (2.0 + eps)); }

LoopCalibration calibrate_loop(double eta, double eps, MuMode mode) {
    if (!(eta > 0 && eta < 1)) throw DomainError("calibrate_loop: eta must lie in (0, 1)");
    if (!(eps >= 0)) throw DomainError("calibrate_loop: eps must be >= 0");
    LoopCalibration c;
    c.G = eta / (1.0 - eta);
    if (mode == MuMode::linearized) {
        c.mu = (1.0 + 2.0 * eps) * eta * eta / 4.0;
        return c;
    }
    const double r = std::sqrt(1.0 - eta);
    const double x = std::cos(loop_theta(eta, eps)) / (r + 1.0 / r);
    c.mu = 1.0 - 4.0 * x * x;
    return c;
}

TransferFunctionSet loop_transfer_functions(const LoopParams& p, const std::vector<double>& grid) {
    validate(p);
    const double eta = p.eta;
    const double theta = loop_theta(eta, p.eps);
    const double ct = std::cos(theta);
    const double amp_num = eta * std::sqrt(4.0 * (1.0 - eta) * std::sin(theta) * std::sin(theta) + eta * eta);
    const double den_pre = 2.0 * std::sqrt(1.0 - eta) * (2.0 - eta);
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& hin = tf.channels["in"];
    auto& hamp = tf.channels["amp"];
    for (double omega : grid) {
        const double w = wrapped_phase(omega - p.omega0, p.tau);
        guard_loop_poles(w, theta, omega, p);
        // cos(w) - cos(theta) without cancellation.
        const double cdiff = -2.0 * std::sin(0.5 * (w + theta)) * std::sin(0.5 * (w - theta));
        const double den = den_pre * cdiff;
        hin.push_back((2.0 - eta) / (2.0 * std::sqrt(1.0 - eta)) +
                      cd(eta * eta * ct, eta * (2.0 - eta) * std::sin(w)) / den);
        hamp.push_back(amp_num / den);
    }
    return tf;
}

TransferFunctionSet loop_transfer_functions_literal(const LoopParams& p, const std::vector<double>& grid) {
    validate(p);
    const double eta = p.eta;
    const double theta = loop_theta(eta, p.eps);
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& hin = tf.channels["in"];
    auto& hamp = tf.channels["amp"];
    for (double omega : grid) {
        const double w = wrapped_phase(omega - p.omega0, p.tau);
        guard_loop_poles(w, theta, omega, p);
        const double den = 2.0 * std::sqrt(1.0 - eta) * (2.0 - eta) * (std::cos(w) - std::cos(theta));
        const cd num = std::exp(-I * w) * (2.0 + (2.0 - eta) * std::exp(2.0 * I * w) - 3.0 * eta + eta * eta -
                                          4.0 * std::exp(I * w) * (1.0 - eta) * std::cos(theta));
        hin.push_back(num / den);
        hamp.push_back(eta * std::sqrt(2.0 - eta * (2.0 - eta) - 2.0 * (1.0 - eta) * std::cos(2.0 * theta)) / den);
    }
    return tf;
}

double loop_output_spectrum(const LoopParams& p, double omega) {
    const auto tf = loop_transfer_functions(p, {omega});
    return (std::norm(tf.at("in")[0]) + std::norm(tf.at("amp")[0])) * (0.5 + p.n_th);
}

Spectrum loop_output_spectrum(const LoopParams& p, const std::vector<double>& grid) {
    const auto tf = loop_transfer_functions(p, grid);
    Spectrum out;
    out.grid = grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.values.push_back((std::norm(tf.at("in")[i]) + std::norm(tf.at("amp")[i])) * (0.5 + p.n_th));
    return out;
}

double loop_spectrum_near_resonance(const LoopParams& p, double delta_omega) {
    validate(p);
    if (delta_omega == 0 || p.eps == 0) throw DomainError("near-resonance loop spectrum diverges");
    const double eta = p.eta;
    return eta * eta * (1.0 + 2.0 * p.n_th) /
           (2.0 * (1.0 - eta) * (2.0 - eta) * (2.0 - eta) * p.tau * p.tau * p.eps * delta_omega * delta_omega);
}

double loop_spectrum_markov_limit(const LoopParams& p, double delta_omega) {
    validate(p);
    PTParams m;
    m.gamma = p.gamma_equiv();
    m.eps_bar = p.eps;
    m.n_in = m.n_amp = p.n_th;
    return pt_output_spectrum_near_resonance(m, delta_omega);
}

std::pair<double, double> loop_resonances(const LoopParams& p) {
    validate(p);
    const double theta = loop_theta(p.eta, p.eps);
    // f(w) = cos(w) - cos(theta) = -2 sin((w+theta)/2) sin((w-theta)/2), positive at w = 0, negative at w = pi.
    double lo = 0.0, hi = kPi;
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (-std::sin(0.5 * (mid + theta)) * std::sin(0.5 * (mid - theta)) > 0)
            lo = mid;
        else
            hi = mid;
    }
    const double w = 0.5 * (lo + hi);
    return {p.omega0 - w / p.tau, p.omega0 + w / p.tau};
}

Eigen::Matrix2d discrete_reduction_coefficients(double eta, double mu, double G, double tau) {
    if (!(tau > 0)) throw DomainError("discrete_reduction_coefficients: tau must be > 0");
    const double sm = std::sqrt(mu), cm = std::sqrt(1.0 - mu);
    const double se = std::sqrt(1.0 - eta), sg = std::sqrt(1.0 + G);
    Eigen::Matrix2d R;
    R << cm * se - 1.0, sm * sg, -sm * se, cm * sg - 1.0;
    return R / tau;
}

double freq_noise_nonmarkovian(const LoopParams& p, double alpha_amp) {
    validate(p);
    if (!(alpha_amp > 0)) throw NoCarrierError("non-Markovian frequency noise needs a nonzero carrier");
    if (p.eps == 0) throw DomainError("non-Markovian frequency noise diverges at eps = 0");
    const double eta = p.eta;
    return eta * eta * (1.0 + 2.0 * p.n_th) /
           (4.0 * (1.0 - eta) * (2.0 - eta) * (2.0 - eta) * p.tau * p.tau * alpha_amp * alpha_amp * p.eps);
}

LoopPassMap loop_pass_map(double eta, double mu, double G, double squeeze, int gain_sign) {
    const double se = std::sqrt(eta), ce = std::sqrt(1.0 - eta);
    const double sm = std::sqrt(mu), cm = std::sqrt(1.0 - mu);
    const double k = squeeze * std::sqrt(1.0 + G);
    const double ka = squeeze * gain_sign * std::sqrt(G);
    // a0 = se*in - ce*a_prev;  bs = k*b_prev + ka*amp
    // b = sm*a0 + cm*bs;       a = sm*bs - cm*a0
    LoopPassMap m;
    m.A << cm * ce, sm * k, -sm * ce, cm * k;
    m.B << -cm * se, sm * ka, sm * se, cm * ka;
    m.C << se, 0.0;
    m.D << ce, 0.0;
    return m;
}

std::pair<cd, cd> loop_quadrature_gains(double eta, double mu, double G, double squeeze, int gain_sign,
                                        double detuning, double tau) {
    const auto m = loop_pass_map(eta, mu, G, squeeze, gain_sign);
    // State x = (a, b) in the frequency domain: x = z A x + B u, z = e^{i w tau}.
    const cd z = std::exp(I * wrapped_phase(detuning, tau));
    Eigen::Matrix2cd M = Eigen::Matrix2cd::Identity() - z * m.A.cast<cd>();
    Eigen::Matrix2cd X = M.partialPivLu().solve(m.B.cast<cd>());
    const Eigen::RowVector2cd out = z * m.C.cast<cd>() * X + m.D.cast<cd>();
    return {out(0), out(1)};
}

}  // namespace eplab
