#include "eplab/phase_sensitive.hpp"

#include <cmath>

#include "eplab/nonmarkovian.hpp"

namespace eplab {

namespace {

const cd I(0.0, 1.0);

double half_split(const PhaseSensitiveParams& p) { return p.gamma_a * std::sqrt(p.eps_bar * (2.0 + p.eps_bar)); }

void guard_ps_poles(const PhaseSensitiveParams& p, double detuning) {
    if (p.r > 0) return;
    const double s = half_split(p);
    const double tol = kPoleGuard * p.gamma_a;
    if (std::abs(detuning - s) <= tol) throw PoleError("phase-quadrature pole at Omega_+ with r = 0", p.omega0 + s);
    if (std::abs(detuning + s) <= tol) throw PoleError("phase-quadrature pole at Omega_- with r = 0", p.omega0 - s);
}

void guard_ps_loop_poles(const PSLoopParams& p, double w, bool phase_channel) {
    if (phase_channel && p.xi != 0) return;
    const double theta = loop_theta(p.eta, p.eps);
    if (std::abs(w - theta) <= kPoleGuard)
        throw PoleError("evaluation at the loop resonance Omega_0 + theta/tau", p.omega0 + theta / p.tau);
    if (std::abs(w + theta) <= kPoleGuard)
        throw PoleError("evaluation at the loop resonance Omega_0 - theta/tau", p.omega0 - theta / p.tau);
}

}  // namespace

Eigen::Matrix2d ps_amplitude_block(const PhaseSensitiveParams& p) {
    const double k = p.gamma_a * (1.0 + p.eps_bar);
    Eigen::Matrix2d K;
    K << -p.gamma_a, k, -k, p.gamma_a;
    return K;
}

Eigen::Matrix2d ps_phase_block(const PhaseSensitiveParams& p) {
    const double k = p.gamma_a * (1.0 + p.eps_bar);
    Eigen::Matrix2d K;
    K << -p.gamma_a, k, -k, p.gamma_a - 2.0 * p.r;
    return K;
}

QuadratureEigenSet ps_quadrature_eigenvalues(const PhaseSensitiveParams& p) {
    validate(p);
    const double s = half_split(p);
    const cd w = std::sqrt(cd((p.r + p.eps_bar * p.gamma_a) * (p.gamma_a * (2.0 + p.eps_bar) - p.r), 0.0));
    QuadratureEigenSet e;
    e.amplitude_pair = {cd(0.0, s), cd(0.0, -s)};
    e.phase_pair = {-p.r + I * w, -p.r - I * w};
    return e;
}

PSMeanField ps_mean_steady_state(const PhaseSensitiveParams& p, cd q0) {
    validate(p);
    PSMeanField m;
    m.q0 = q0;
    m.q0_b = carrier_factor(p.eps_bar, +1) * q0;
    m.flux = 4.0 * p.gamma_a * std::norm(q0);
    return m;
}

TransferFunctionSet ps_phase_transfer_functions(const PhaseSensitiveParams& p, const std::vector<double>& grid) {
    validate(p);
    const double ga = p.gamma_a;
    const double s = half_split(p);
    const double pre = 2.0 * (1.0 + p.eps_bar) * std::pow(ga, 1.5);
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& ha = tf.channels["a_in"];
    auto& hm = tf.channels["amp"];
    auto& hb = tf.channels["b_in"];
    for (double omega : grid) {
        const double d = omega - p.omega0;
        guard_ps_poles(p, d);
        const cd Q = (d - s) * (d + s) + 2.0 * p.r * (I * d - ga);
        ha.push_back(2.0 * ga * (ga - 2.0 * p.r + I * d) / Q - 1.0);
        hm.push_back(pre * std::sqrt(p.gamma_amp()) / Q);
        hb.push_back(-pre * std::sqrt(p.gamma_b) / Q);
    }
    return tf;
}

TransferFunctionSet ps_amplitude_transfer_functions(const PhaseSensitiveParams& p,
                                                    const std::vector<double>& grid) {
    validate(p);
    const double ga = p.gamma_a;
    const double s = half_split(p);
    const double pre = 2.0 * (1.0 + p.eps_bar) * std::pow(ga, 1.5);
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& ha = tf.channels["a_in"];
    auto& hm = tf.channels["amp"];
    auto& hb = tf.channels["b_in"];
    for (double omega : grid) {
        const double d = omega - p.omega0;
        const double P = (d - s) * (d + s);
        if (std::abs(P) <= kPoleGuard * ga * ga)
            throw PoleError("amplitude-quadrature pole at a split resonance", p.omega0 + (d > 0 ? s : -s));
        ha.push_back(2.0 * ga * (ga + I * d) / P - 1.0);
        hm.push_back(-pre * std::sqrt(p.gamma_amp()) / P);
        hb.push_back(-pre * std::sqrt(p.gamma_b) / P);
    }
    return tf;
}

Spectrum ps_output_phase_spectrum(const PhaseSensitiveParams& p, const std::vector<double>& grid) {
    const auto tf = ps_phase_transfer_functions(p, grid);
    Spectrum out;
    out.grid = grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.values.push_back((std::norm(tf.at("a_in")[i]) + std::norm(tf.at("amp")[i]) + std::norm(tf.at("b_in")[i])) *
                             (0.5 + p.n_th));
    return out;
}

double ps_output_phase_spectrum(const PhaseSensitiveParams& p, double omega) {
    return ps_output_phase_spectrum(p, std::vector<double>{omega}).values[0];
}

double ps_spectrum_near_resonance(const PhaseSensitiveParams& p) {
    validate(p);
    if (p.r == 0) throw DomainError("near-resonance phase-sensitive spectrum diverges at r = 0");
    const double ga = p.gamma_a, gb = p.gamma_b, r = p.r;
    return (2.0 * ga * ga + 2.0 * ga * gb - 3.0 * ga * r + r * r) * (1.0 + 2.0 * p.n_th) / (2.0 * r * r);
}

double ps_spectrum_flat(const PhaseSensitiveParams& p) {
    validate(p);
    return p.gamma_b * (1.0 + 2.0 * p.n_th) / (2.0 * (p.gamma_a + p.gamma_b));
}

double ps_spectrum_lossless_pure(const PhaseSensitiveParams& p, double delta_omega) {
    validate(p);
    const double e = p.eps_bar;
    return e * (2.0 + e) * (1.0 + 2.0 * p.n_th) * delta_omega * delta_omega /
           (2.0 * p.gamma_a * p.gamma_a * (1.0 + e) * (1.0 + e));
}

double ps_nonmarkovian_amp_prefactor(const PSLoopParams& p) {
    validate(p);
    return std::sqrt(1.0 / p.eta - std::exp(2.0 * p.xi) * (1.0 / p.eta - 1.0));
}

TransferFunctionSet ps_nonmarkovian_quadrature_tfs(const PSLoopParams& p, const std::vector<double>& grid) {
    validate(p);
    const double G = p.G();
    if (G < -1e-12) throw CalibrationError("phase-sensitive loop needs G >= 0 under gain-loss balance");
    const double g = std::max(G, 0.0);
    const double mu = calibrate_loop(p.eta, p.eps).mu;
    const double sq = std::exp(p.xi);
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& qi = tf.channels["q_in"];
    auto& qa = tf.channels["q_amp"];
    auto& pi = tf.channels["p_in"];
    auto& pa = tf.channels["p_amp"];
    for (double omega : grid) {
        const double d = omega - p.omega0;
        const double w = std::remainder(d * p.tau, kTwoPi);
        guard_ps_loop_poles(p, w, false);
        const auto q = loop_quadrature_gains(p.eta, mu, g, sq, +1, d, p.tau);
        const auto ph = loop_quadrature_gains(p.eta, mu, g, 1.0 / sq, -1, d, p.tau);
        qi.push_back(q.first);
        qa.push_back(q.second);
        pi.push_back(ph.first);
        pa.push_back(ph.second);
    }
    return tf;
}

Spectrum ps_nonmarkovian_phase_spectrum(const PSLoopParams& p, const std::vector<double>& grid) {
    validate(p);
    const double G = p.G();
    if (G < -1e-12) throw CalibrationError("phase-sensitive loop needs G >= 0 under gain-loss balance");
    const double mu = calibrate_loop(p.eta, p.eps).mu;
    Spectrum out;
    out.grid = grid;
    for (double omega : grid) {
        const double d = omega - p.omega0;
        guard_ps_loop_poles(p, std::remainder(d * p.tau, kTwoPi), true);
        const auto ph = loop_quadrature_gains(p.eta, mu, std::max(G, 0.0), std::exp(-p.xi), -1, d, p.tau);
        out.values.push_back((std::norm(ph.first) + std::norm(ph.second)) * (0.5 + p.n_th));
    }
    return out;
}

double ps_nonmarkovian_phase_spectrum(const PSLoopParams& p, double omega) {
    return ps_nonmarkovian_phase_spectrum(p, std::vector<double>{omega}).values[0];
}

double ps_nonmarkovian_near_resonance(const PSLoopParams& p) {
    validate(p);
    if (p.xi == 0) throw DomainError("near-resonance phase-sensitive loop spectrum diverges at xi = 0");
    const double eta = p.eta, xi = p.xi;
    const double csch = 1.0 / std::sinh(xi);
    const double coth = 1.0 / std::tanh(xi);
    const double t = 2.0 - eta * (1.0 + coth);
    return (eta * (std::exp(-2.0 * xi) + eta - 1.0) * csch * csch + t * t) * (1.0 + 2.0 * p.n_th) /
           (8.0 * (1.0 - eta));
}

double ps_nonmarkovian_pure(const PSLoopParams& p, double delta_omega) {
    validate(p);
    const double eta = p.eta;
    return (1.0 - eta) * (2.0 - eta) * (2.0 - eta) * p.eps * p.tau * p.tau * delta_omega * delta_omega *
           (1.0 + 2.0 * p.n_th) / (eta * eta);
}

PSLoopParams ps_loop_from_markovian(const PhaseSensitiveParams& p, double tau) {
    validate(p);
    if (p.gamma_b != 0) throw DomainError("the loop model has no separate b-mode loss port; set gamma_b = 0");
    PSLoopParams l;
    l.eta = 2.0 * p.gamma_a * tau;
    l.tau = tau;
    l.eps = p.eps_bar;
    l.xi = p.r * tau;
    l.omega0 = 0.0;
    l.n_th = p.n_th;
    validate(l);
    return l;
}

}  // namespace eplab
