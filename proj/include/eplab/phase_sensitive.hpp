#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eplab/core.hpp"
#include "eplab/markovian.hpp"

namespace eplab {

// Eigenvalues lambda of dx/dt = K x for each quadrature block (not frequencies).
struct QuadratureEigenSet {
    std::pair<cd, cd> amplitude_pair;
    std::pair<cd, cd> phase_pair;
};

// Drift matrices of the amplitude (q) and phase (p) quadrature blocks, state (x_a, x_b).
Eigen::Matrix2d ps_amplitude_block(const PhaseSensitiveParams& p);
Eigen::Matrix2d ps_phase_block(const PhaseSensitiveParams& p);

QuadratureEigenSet ps_quadrature_eigenvalues(const PhaseSensitiveParams& p);

PSMeanField ps_mean_steady_state(const PhaseSensitiveParams& p, cd q0);

// Phase-quadrature channels "a_in", "amp", "b_in".
TransferFunctionSet ps_phase_transfer_functions(const PhaseSensitiveParams& p, const std::vector<double>& grid);

// Amplitude-quadrature channels "a_in", "amp", "b_in".
TransferFunctionSet ps_amplitude_transfer_functions(const PhaseSensitiveParams& p,
                                                    const std::vector<double>& grid);

Spectrum ps_output_phase_spectrum(const PhaseSensitiveParams& p, const std::vector<double>& grid);
double ps_output_phase_spectrum(const PhaseSensitiveParams& p, double omega);

// (2 ga^2 + 2 ga gb - 3 ga r + r^2)(1 + 2n) / (2 r^2).
double ps_spectrum_near_resonance(const PhaseSensitiveParams& p);

// gb (1 + 2n) / (2 (ga + gb)): the purely phase-sensitive case r = ga + gb.
double ps_spectrum_flat(const PhaseSensitiveParams& p);

// eps(2+eps)(1+2n) delta^2 / (2 ga^2 (1+eps)^2): lossless, purely phase-sensitive.
double ps_spectrum_lossless_pure(const PhaseSensitiveParams& p, double delta_omega);

// Non-Markovian loop with a phase-sensitive amplifier.
// Channels "q_in", "q_amp", "p_in", "p_amp".
TransferFunctionSet ps_nonmarkovian_quadrature_tfs(const PSLoopParams& p, const std::vector<double>& grid);

// Prefactor sqrt(1/eta - e^{2 xi}(1/eta - 1)) relating H^q_amp to the phase-insensitive H_amp.
double ps_nonmarkovian_amp_prefactor(const PSLoopParams& p);

Spectrum ps_nonmarkovian_phase_spectrum(const PSLoopParams& p, const std::vector<double>& grid);
double ps_nonmarkovian_phase_spectrum(const PSLoopParams& p, double omega);

// [eta (e^{-2xi} + eta - 1) csch^2 xi + (2 - eta(1 + coth xi))^2] (1 + 2n) / (8 (1 - eta)).
double ps_nonmarkovian_near_resonance(const PSLoopParams& p);

// (1 - eta)(2 - eta)^2 eps tau^2 delta^2 (1 + 2n) / eta^2: the purely phase-sensitive loop.
double ps_nonmarkovian_pure(const PSLoopParams& p, double delta_omega);

// Loop parameters whose Markovian limit is p: eta = 2 ga tau, xi = r tau. Requires gb = 0.
PSLoopParams ps_loop_from_markovian(const PhaseSensitiveParams& p, double tau);

}  // namespace eplab
