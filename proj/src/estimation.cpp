#include "eplab/estimation.hpp"

#include <cmath>

namespace eplab {

namespace {

void require_carrier(const MeanField& m) {
    if (!(std::abs(m.a_plus) > 0 && std::abs(m.a_minus) > 0))
        throw NoCarrierError("imprecision needs nonzero carriers at both resonances");
}

ImprecisionReport finish(const PTParams& p, const MeanField& mean, double dw, double sp, double sm,
                         const char* id) {
    ImprecisionReport r;
    r.sensitivity = sensitivity(p.gamma, p.eps_bar);
    r.noise = noise_level(sp, sm, dw);
    r.imprecision = r.noise / r.sensitivity;
    r.closed_form = imprecision_closed_form(p, mean, dw);
    r.delta_omega_meas = dw;
    r.formula_id = id;
    return r;
}

}  // namespace

double sensitivity(double gamma, double eps_bar) {
    if (!(eps_bar > 0)) throw DomainError("sensitivity diverges at eps = 0");
    return 2.0 * gamma * (1.0 + eps_bar) / std::sqrt(eps_bar * (2.0 + eps_bar));
}

double noise_level(double freq_noise_plus, double freq_noise_minus, double delta_omega_meas) {
    if (freq_noise_plus < 0 || freq_noise_minus < 0 || delta_omega_meas < 0)
        throw DomainError("noise_level inputs must be nonnegative");
    return std::sqrt((freq_noise_plus + freq_noise_minus) * delta_omega_meas / kTwoPi);
}

double fundamental_frequency_noise(double gamma, double eps_bar, double a_amp, double n_th) {
    if (!(a_amp > 0)) throw NoCarrierError("frequency noise needs a nonzero carrier amplitude");
    if (!(eps_bar > 0)) throw DomainError("frequency noise diverges at eps = 0");
    return gamma * (1.0 + 2.0 * n_th) / (8.0 * a_amp * a_amp * eps_bar);
}

double imprecision_closed_form(const PTParams& p, const MeanField& mean, double delta_omega_meas) {
    require_carrier(mean);
    const double inv = 0.5 * (1.0 / std::norm(mean.a_plus) + 1.0 / std::norm(mean.a_minus));
    return std::sqrt((1.0 + 2.0 * p.n_th()) * delta_omega_meas / (16.0 * kPi * p.gamma) * inv);
}

ImprecisionReport imprecision(const PTParams& p, const MeanField& mean, double delta_omega_meas) {
    validate(p);
    require_carrier(mean);
    const auto e = pt_eigenfrequencies(p);
    const double s = p.splitting_half();
    const double d = 1e-6 * s;
    const double spp_plus = pt_output_spectrum_exact(p, e.omega_plus.real() + d);
    const double spp_minus = pt_output_spectrum_exact(p, e.omega_minus.real() + d);
    const double sp = frequency_noise_spectrum(spp_plus, d, p.gamma, std::abs(mean.a_plus));
    const double sm = frequency_noise_spectrum(spp_minus, d, p.gamma, std::abs(mean.a_minus));
    return finish(p, mean, delta_omega_meas, sp, sm, formula::kImprecisionExact);
}

ImprecisionReport imprecision_near_resonance(const PTParams& p, const MeanField& mean, double delta_omega_meas) {
    validate(p);
    require_carrier(mean);
    const double d = 1e-6 * p.splitting_half();
    const double spp = pt_output_spectrum_near_resonance(p, d);
    const double sp = frequency_noise_spectrum(spp, d, p.gamma, std::abs(mean.a_plus));
    const double sm = frequency_noise_spectrum(spp, d, p.gamma, std::abs(mean.a_minus));
    return finish(p, mean, delta_omega_meas, sp, sm, formula::kImprecisionChain);
}

double technical_imprecision(double s_fund, double s_tech, double gamma, double eps_bar) {
    if (s_fund < 0 || s_tech < 0) throw DomainError("technical_imprecision spectra must be nonnegative");
    if (!(eps_bar > 0)) throw DomainError("technical_imprecision needs eps > 0");
    return std::sqrt((s_fund + s_tech) / (2.0 * gamma * gamma / eps_bar));
}

double crossover_epsilon(double s_tech, double gamma, double a_amp, double n_th) {
    if (!(s_tech > 0)) throw DomainError("crossover_epsilon needs S_tech > 0");
    if (!(a_amp > 0)) throw NoCarrierError("crossover_epsilon needs a nonzero carrier amplitude");
    return gamma * (1.0 + 2.0 * n_th) / (8.0 * a_amp * a_amp * s_tech);
}

double weak_force_snr(const PTParams& p, const MeanField& mean, double s_epseps, double n_th, Quadrature x) {
    validate(p);
    require_carrier(mean);
    const auto c = quadrature_components(mean.a_plus, mean.a_minus);
    const double w = x == Quadrature::q ? std::norm(c.q_minus) + std::norm(c.q_plus)
                                        : std::norm(c.p_minus) + std::norm(c.p_plus);
    return 2.0 * p.gamma * w * s_epseps / (1.0 + 2.0 * n_th);
}

double weak_force_snr_exact(const PTParams& p, const MeanField& mean, double s_epseps, double omega,
                            Quadrature x) {
    validate(p);
    require_carrier(mean);
    const auto g = pt_gains(p, &mean, omega, x);
    const double signal = (std::norm(g.de_minus) + std::norm(g.de_plus)) * s_epseps;
    const double noise = std::norm(g.in) * (0.5 + p.n_in) + std::norm(g.amp) * (0.5 + p.n_amp);
    return signal / noise;
}

ImprecisionReport ps_imprecision(const PhaseSensitiveParams& p, cd q0, double delta_omega_meas) {
    validate(p);
    if (!(std::abs(q0) > 0)) throw NoCarrierError("phase-sensitive imprecision needs a nonzero carrier");
    const double flux = ps_mean_steady_state(p, q0).flux;
    const double spp = ps_spectrum_near_resonance(p);
    const double dw = delta_omega_meas;
    const double sphi = dw * dw * spp / (2.0 * flux);
    ImprecisionReport r;
    r.sensitivity = sensitivity(p.gamma_a, p.eps_bar);
    r.noise = noise_level(sphi, sphi, dw);
    r.imprecision = r.noise / r.sensitivity;
    r.closed_form = r.imprecision;
    r.delta_omega_meas = dw;
    r.formula_id = formula::kImprecisionPhaseSensitive;
    return r;
}

}  // namespace eplab
