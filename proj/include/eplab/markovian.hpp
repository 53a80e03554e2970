#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eplab/core.hpp"

namespace eplab {

// Complex eigenfrequencies: real part is frequency, imaginary part growth (+) or decay (-).
struct EigenPair {
    cd omega_minus;
    cd omega_plus;
};

// Eigenfrequencies omega = i*lambda of the first-order system dx/dt = K x,
// sorted by real part (then imaginary part). Uses a general complex eigensolver.
EigenPair eigen_numeric(const Eigen::Matrix2cd& K);

Eigen::Matrix2cd pt_ode_matrix(const PTParams& p);
Eigen::Matrix2cd passive_ode_matrix(const PassiveParams& p);
Eigen::Matrix2cd active_ode_matrix(const ActiveParams& p);

EigenPair pt_eigenfrequencies(const PTParams& p);
EigenPair passive_eigenfrequencies(const PassiveParams& p);
EigenPair active_eigenfrequencies(const ActiveParams& p);

enum class Quadrature { q, p };

// Channels "a" and "b": gains from the a- and b-mode loss ports to a_out.
TransferFunctionSet passive_transfer_functions(const PassiveParams& p, const std::vector<double>& grid);

// Channels "in" and "amp".
TransferFunctionSet active_transfer_functions(const ActiveParams& p, const std::vector<double>& grid);

Spectrum passive_output_spectrum(const PassiveParams& p, const Spectrum& s_a, const Spectrum& s_b,
                                 const std::vector<cd>& s_ab, const std::vector<double>& grid);

// Thermal inputs 1/2 + n_a and 1/2 + n_b, uncorrelated.
Spectrum passive_output_spectrum(const PassiveParams& p, const std::vector<double>& grid);

Spectrum active_output_spectrum(const ActiveParams& p, const std::vector<double>& grid);

struct PTGains {
    cd in;
    cd amp;
    cd de_minus;  // multiplies d_eps[omega - Omega_-]
    cd de_plus;   // multiplies d_eps[omega - Omega_+]
};

PTGains pt_gains(const PTParams& p, const MeanField* mean, double omega, Quadrature x);

// Channels "in", "amp", "de_minus", "de_plus" for the chosen output quadrature.
TransferFunctionSet pt_output_quadrature_relation(const PTParams& p, const MeanField& mean,
                                                  const std::vector<double>& grid, Quadrature x);

// |H_in|^2 (1/2 + n_in) + |H_amp|^2 (1/2 + n_amp).
double pt_output_spectrum_exact(const PTParams& p, double omega);
Spectrum pt_output_spectrum_exact(const PTParams& p, const std::vector<double>& grid,
                                  Quadrature x = Quadrature::p);

// gamma^2 (1 + 2 n_th) / (2 eps delta^2), delta measured from the nearest resonance.
double pt_output_spectrum_near_resonance(const PTParams& p, double delta_omega);

// delta^2 / (4 gamma |a|^2) * S_pp.
double frequency_noise_spectrum(double s_pp, double delta_omega, double gamma, double a_amp);

// Near-resonance spectrum with a weak-stationary eps modulation of PSD s_epseps(omega - omega0).
Spectrum weak_force_output_spectrum(const PTParams& p, const MeanField& mean, const Spectrum& s_epseps,
                                    const std::vector<double>& grid, Quadrature x = Quadrature::p);

enum class DiagonalKind { common_frequency, differential_frequency, differential_gainloss, common_gainloss };
enum class DiagonalClass {
    degeneracy_not_lifted,
    linear_response,
    reverts_below_threshold,
    equivalent_to_coupling_perturbation
};

struct DiagonalPerturbationResult {
    DiagonalKind kind;
    EigenPair eigenvalues;
    bool degenerate;
    DiagonalClass classification;
};

DiagonalKind parse_diagonal_kind(const std::string& name);
std::string to_string(DiagonalKind kind);
std::string to_string(DiagonalClass c);

Eigen::Matrix2cd diagonal_perturbation_matrix(DiagonalKind kind, double gamma, double omega0, double eps);
DiagonalPerturbationResult diagonal_perturbation_eigen(DiagonalKind kind, double gamma, double omega0, double eps);

}  // namespace eplab
