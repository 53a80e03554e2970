#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace eplab {

using cd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;   // J/K

// Evaluation requests closer than this (in units of gamma or 1/tau) to a real
// resonance raise PoleError.
inline constexpr double kPoleGuard = 1e-9;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

class PoleError : public std::runtime_error {
public:
    PoleError(const std::string& what, double resonance)
        : std::runtime_error(what), resonance_(resonance) {}
    double resonance() const { return resonance_; }

private:
    double resonance_;
};

class NoCarrierError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class CalibrationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Too few samples or segments for a spectral estimate.
class StatisticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Balanced gain/loss two-mode sensor. gamma_reg is an optional extra damping
// added to both modes; it is zero for the physical model.
struct PTParams {
    double omega0 = 0.0;
    double gamma = 1.0;
    double eps_bar = 1e-2;
    double n_in = 0.0;
    double n_amp = 0.0;
    double gamma_reg = 0.0;

    double n_th() const { return 0.5 * (n_in + n_amp); }
    double splitting_half() const;  // gamma * sqrt(eps(2+eps))
};

struct PassiveParams {
    double omega0 = 0.0;
    double gamma_a = 1.0;
    double gamma_b = 0.5;
    double eps = 0.0;
    double n_a = 0.0;
    double n_b = 0.0;

    double coupling() const;
};

struct ActiveParams {
    double omega0 = 0.0;
    double gamma = 1.0;
    double g = 0.5;
    double eps = 0.0;
    double n_in = 0.0;
    double n_amp = 0.0;
};

struct LoopParams {
    double eta = 1e-2;
    double tau = 5e-3;
    double eps = 1e-2;
    double omega0 = 0.0;
    double n_th = 0.0;

    double gamma_equiv() const { return eta / (2.0 * tau); }
};

struct PhaseSensitiveParams {
    double omega0 = 0.0;
    double gamma_a = 1.0;
    double gamma_b = 0.0;
    double r = 1.0;
    double eps_bar = 1e-2;
    double n_th = 0.0;

    double gamma_amp() const { return gamma_a + gamma_b - r; }
};

// Delay-loop sensor with a phase-insensitive amplifier followed by a squeezer.
struct PSLoopParams {
    double eta = 1e-2;
    double tau = 5e-3;
    double eps = 1e-2;
    double xi = 0.0;
    double omega0 = 0.0;
    double n_th = 0.0;

    // Amplifier gain fixed by e^xi sqrt(1+G) sqrt(1-eta) = 1.
    double G() const;
    static double pure_xi(double eta);
};

std::vector<std::string> violations(const PTParams& p);
std::vector<std::string> violations(const PassiveParams& p);
std::vector<std::string> violations(const ActiveParams& p);
std::vector<std::string> violations(const LoopParams& p);
std::vector<std::string> violations(const PhaseSensitiveParams& p);
std::vector<std::string> violations(const PSLoopParams& p);

// Returns p unchanged, or throws ValidationError listing every violated invariant.
template <class P>
const P& validate(const P& p) {
    auto v = violations(p);
    if (!v.empty()) throw ValidationError(std::move(v));
    return p;
}

struct MeanField {
    cd a_plus{1.0, 0.0};
    cd a_minus{1.0, 0.0};
    cd b_plus{1.0, 0.0};
    cd b_minus{1.0, 0.0};
    double flux_plus = 0.0;
    double flux_minus = 0.0;
};

struct PSMeanField {
    cd q0{1.0, 0.0};
    cd q0_b{1.0, 0.0};
    double flux = 0.0;
};

// Carrier factor relating b_(+/-) to a_(+/-): (1 -/+ i sqrt(eps(2+eps)))/(1+eps).
cd carrier_factor(double eps_bar, int sign);

MeanField mean_field_solution(const PTParams& params, cd a_plus, cd a_minus);

// Quadrature Fourier components of a two-carrier field x(t) = x+ e^{-ist} + x- e^{ist}.
struct QuadratureComponents {
    cd q_plus, q_minus, p_plus, p_minus;
};
QuadratureComponents quadrature_components(cd x_plus, cd x_minus);

double thermal_occupation(double omega, double temperature);

struct Spectrum {
    std::vector<double> grid;
    std::vector<double> values;

    void check() const;
    double interpolate(double omega) const;
};

// Complex gains from each named input channel to the observed output.
struct TransferFunctionSet {
    std::vector<double> grid;
    std::map<std::string, std::vector<cd>> channels;

    const std::vector<cd>& at(const std::string& name) const;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace eplab
