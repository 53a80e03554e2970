#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eplab/core.hpp"

namespace eplab {

enum class MuMode { exact, linearized };

struct LoopCalibration {
    double G;
    double mu;
};

// G = eta/(1-eta); mu places the loop resonances at the split frequencies.
// The linearized mode uses mu = (1 + 2 eps) eta^2 / 4.
LoopCalibration calibrate_loop(double eta, double eps, MuMode mode = MuMode::exact);

// Per-pass phase theta = (eta/2) sqrt(eps(2+eps)); resonances sit at Omega_0 +/- theta/tau.
double loop_theta(double eta, double eps);

// Channels "in" and "amp".
TransferFunctionSet loop_transfer_functions(const LoopParams& p, const std::vector<double>& grid);

// Literal closed form with exponentials; loses precision for eta << 1. Kept for cross-checks.
TransferFunctionSet loop_transfer_functions_literal(const LoopParams& p, const std::vector<double>& grid);

double loop_output_spectrum(const LoopParams& p, double omega);
Spectrum loop_output_spectrum(const LoopParams& p, const std::vector<double>& grid);

// eta^2 (1 + 2n) / (2 (1-eta) (2-eta)^2 tau^2 eps delta^2).
double loop_spectrum_near_resonance(const LoopParams& p, double delta_omega);

// Markovian near-resonance form with gamma = eta / (2 tau).
double loop_spectrum_markov_limit(const LoopParams& p, double delta_omega);

// Resonances of the loop found by bisection on cos(w tau) - cos(theta) in one free spectral range.
std::pair<double, double> loop_resonances(const LoopParams& p);

// Slow-envelope rates: dc/dt = R(0,0) c + R(0,1) d, dd/dt = R(1,0) c + R(1,1) d.
Eigen::Matrix2d discrete_reduction_coefficients(double eta, double mu, double G, double tau);

// eta^2 (1 + 2n) / (4 (1-eta) (2-eta)^2 tau^2 |alpha|^2 eps); |alpha|^2 is the out-coupled flux.
double freq_noise_nonmarkovian(const LoopParams& p, double alpha_amp);

// Exact per-pass quadrature map of the loop: state (a, b) after the couplers.
// x_{n+1} = A x_n + B (in, amp)_{n+1}; out_{n+1} = C x_n + D (in, amp)_{n+1}.
struct LoopPassMap {
    Eigen::Matrix2d A, B;
    Eigen::RowVector2d C, D;
};

// gain_sign = +1 for the amplitude quadrature, -1 for the phase quadrature.
// squeeze is e^{+xi} (amplitude) or e^{-xi} (phase); 1 for a phase-insensitive loop.
LoopPassMap loop_pass_map(double eta, double mu, double G, double squeeze, int gain_sign);

// Solve the reduced loop equations in the frequency domain for one quadrature.
// Returns the gains from (in, amp) to out at detuning omega - omega0.
std::pair<cd, cd> loop_quadrature_gains(double eta, double mu, double G, double squeeze, int gain_sign,
                                        double detuning, double tau);

}  // namespace eplab
