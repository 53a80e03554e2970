#pragma once

#include <string>

#include "eplab/core.hpp"
#include "eplab/markovian.hpp"
#include "eplab/phase_sensitive.hpp"

namespace eplab {

namespace formula {
inline constexpr const char* kImprecisionExact = "imprecision.exact_pipeline";
inline constexpr const char* kImprecisionChain = "imprecision.near_resonance_chain";
inline constexpr const char* kImprecisionClosed = "imprecision.closed_form";
inline constexpr const char* kImprecisionTechnical = "imprecision.technical";
inline constexpr const char* kImprecisionPhaseSensitive = "imprecision.phase_sensitive";
}  // namespace formula

struct ImprecisionReport {
    double sensitivity = 0;
    double noise = 0;
    double imprecision = 0;
    double closed_form = 0;
    double delta_omega_meas = 0;
    std::string formula_id;
};

// |d(Omega_+ - Omega_-)/d eps| = 2 gamma (1+eps) / sqrt(eps(2+eps)).
double sensitivity(double gamma, double eps_bar);

// sqrt((S_+ + S_-) dw / 2pi).
double noise_level(double freq_noise_plus, double freq_noise_minus, double delta_omega_meas);

// gamma (1 + 2n) / (8 |a|^2 eps): near-resonance frequency noise, flat in the offset.
double fundamental_frequency_noise(double gamma, double eps_bar, double a_amp, double n_th);

// sqrt((1+2n) dw / (16 pi gamma) * (|a_+|^-2 + |a_-|^-2) / 2).
double imprecision_closed_form(const PTParams& p, const MeanField& mean, double delta_omega_meas);

// Exact eigenfrequencies, exact spectra at a small offset from each resonance, conversion chain.
ImprecisionReport imprecision(const PTParams& p, const MeanField& mean, double delta_omega_meas);

// Same chain fed with the near-resonance spectrum.
ImprecisionReport imprecision_near_resonance(const PTParams& p, const MeanField& mean, double delta_omega_meas);

// sqrt((S_fund + S_tech) / (2 gamma^2 / eps)).
double technical_imprecision(double s_fund, double s_tech, double gamma, double eps_bar);

// eps* = gamma (1 + 2n) / (8 |a|^2 S_tech).
double crossover_epsilon(double s_tech, double gamma, double a_amp, double n_th);

// 2 gamma (|x_-|^2 + |x_+|^2) S_epseps / (1 + 2n), x the measured quadrature of the carrier.
double weak_force_snr(const PTParams& p, const MeanField& mean, double s_epseps, double n_th,
                      Quadrature x = Quadrature::p);

// Signal over noise from the full gains at omega for a white eps modulation of PSD s_epseps.
double weak_force_snr_exact(const PTParams& p, const MeanField& mean, double s_epseps, double omega,
                            Quadrature x = Quadrature::p);

// Phase-sensitive sensor: S_phidot = dw^2 S_pp / (2 N), N = 4 ga |q0|^2, with the flat
// near-resonance S_pp, then noise over sensitivity.
ImprecisionReport ps_imprecision(const PhaseSensitiveParams& p, cd q0, double delta_omega_meas);

}  // namespace eplab
