#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eplab/core.hpp"

namespace eplab {

enum class Window { rectangular, hann };

Window parse_window(const std::string& name);
std::string to_string(Window w);

// dt is the integration step; loop simulations sample once per round trip and use tau instead.
struct SimConfig {
    double dt = 1e-2;
    double duration = 0.0;
    std::uint64_t seed = 1;
    int segments = 64;
    Window window = Window::hann;

    std::size_t samples(double step) const;
    std::size_t samples() const { return samples(dt); }
};

inline constexpr int kMinSegments = 8;
inline constexpr std::size_t kMinSegmentLength = 256;

std::vector<std::string> violations(const SimConfig& c, double step);
inline std::vector<std::string> violations(const SimConfig& c) { return violations(c, c.dt); }

// Out-coupled field fluctuations as quadrature pairs; z = (q + i p)/sqrt(2).
struct TimeSeries {
    double dt = 0.0;
    std::vector<double> q;
    std::vector<double> p;

    std::size_t size() const { return q.size(); }
    cd z(std::size_t i) const;
    std::vector<cd> field() const;
};

using SampleSink = std::function<void(cd)>;

// splitmix64 finalizer applied to base + golden-ratio multiple of index.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

// Standard normal draws from mt19937_64 seeded through mix_seed.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed, std::uint64_t stream = 0);
    double operator()() { return dist_(rng_); }
    // Complex sample with E|z|^2 = variance.
    cd complex(double variance);

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> dist_;
};

// Two independent quadrature streams, per-sample variance (1/2 + n)/dt each.
TimeSeries gaussian_quadrature_noise(double n_th, double dt, std::size_t count, std::uint64_t seed);

// Exact zero-order-hold discretization: Phi = e^{A dt}, Psi = int_0^dt e^{A s} ds.
struct ZohStep {
    Eigen::MatrixXcd Phi;
    Eigen::MatrixXcd Psi;
};
ZohStep zoh_discretize(const Eigen::MatrixXcd& A, double dt);

// Throws ResolutionError when dt * max|eig(A)| > 0.1.
void check_resolution(const Eigen::MatrixXcd& A, double dt);

struct PassiveSimOptions {
    bool noise = true;
    Eigen::Vector2cd initial = Eigen::Vector2cd::Zero();
};

void simulate_passive(const PassiveParams& p, const SimConfig& cfg, const SampleSink& sink,
                      const PassiveSimOptions& opt = {});
TimeSeries simulate_passive(const PassiveParams& p, const SimConfig& cfg, const PassiveSimOptions& opt = {});

struct PTSimOptions {
    bool noise = true;
    // Adds the mean output field sqrt(2 gamma) a(t) to the fluctuations.
    bool include_carrier = false;
    // Real eps modulation, one value per step; empty for none.
    std::vector<double> delta_eps;
};

void simulate_pt_markovian(const PTParams& p, const MeanField& mean, const SimConfig& cfg, const SampleSink& sink,
                           const PTSimOptions& opt = {});
TimeSeries simulate_pt_markovian(const PTParams& p, const MeanField& mean, const SimConfig& cfg,
                                 const PTSimOptions& opt = {});

// State of the loop after the couplers, per quadrature: (a, b).
struct LoopState {
    Eigen::Vector2d q = Eigen::Vector2d::Zero();
    Eigen::Vector2d p = Eigen::Vector2d::Zero();
};

struct LoopSimOptions {
    bool noise = true;
    LoopState initial;
};

// One output sample per round trip; the number of passes is round(duration / tau).
// Per-pass noise has variance (1/2 + n)/tau per quadrature per port.
LoopState simulate_loop(const LoopParams& p, const SimConfig& cfg, const SampleSink& sink,
                        const LoopSimOptions& opt = {});
LoopState simulate_loop(const PSLoopParams& p, const SimConfig& cfg, const SampleSink& sink,
                        const LoopSimOptions& opt = {});
TimeSeries simulate_loop(const LoopParams& p, const SimConfig& cfg, const LoopSimOptions& opt = {});
TimeSeries simulate_loop(const PSLoopParams& p, const SimConfig& cfg, const LoopSimOptions& opt = {});

// Segment-averaged periodogram fed one sample at a time. Non-overlapping segments,
// S = |X|^2 dt / sum(w^2); bin k sits at omega = 2 pi k / (L dt) for a component e^{-i omega t}.
class WelchAccumulator {
public:
    WelchAccumulator(std::size_t segment_length, double dt, Window window);
    ~WelchAccumulator();
    WelchAccumulator(const WelchAccumulator&) = delete;
    WelchAccumulator& operator=(const WelchAccumulator&) = delete;

    void push(cd z);
    int segments() const { return segments_; }
    std::size_t segment_length() const { return length_; }
    // Grid sorted over [-pi/dt, pi/dt).
    Spectrum spectrum() const;

private:
    void flush();

    std::size_t length_;
    double dt_;
    std::vector<double> window_;
    double window_power_;
    std::vector<double> acc_;
    std::size_t fill_ = 0;
    int segments_ = 0;
    void* buffer_;
    void* plan_;
};

Spectrum welch_psd(const std::vector<cd>& z, double dt, int segments, Window window = Window::hann);
Spectrum welch_psd(const std::vector<double>& x, double dt, int segments, Window window = Window::hann);
// Complex-field PSD of the series.
Spectrum welch_psd(const TimeSeries& series, const SimConfig& cfg);

// Demodulates the field at the carrier offset, takes the quadrature in phase with i*carrier and
// returns delta^2 / (4 gamma |a|^2) S_pp on the offset grid delta.
class FrequencyNoiseExtractor {
public:
    FrequencyNoiseExtractor(double carrier_offset, cd carrier, double gamma, std::size_t segment_length,
                            double dt, Window window);
    void push(cd z);
    int segments() const { return psd_.segments(); }
    Spectrum spectrum() const;

private:
    double offset_;
    cd phase_ref_;
    double scale_;
    double dt_;
    std::size_t k_ = 0;
    WelchAccumulator psd_;
};

Spectrum extract_frequency_noise(const TimeSeries& series, double carrier_offset, cd carrier, double gamma,
                                 const SimConfig& cfg);

}  // namespace eplab
