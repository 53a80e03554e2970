#include "eplab/stochastic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unsupported/Eigen/MatrixFunctions>

#include "eplab/markovian.hpp"
#include "eplab/nonmarkovian.hpp"

namespace eplab {

namespace {

const cd I(0.0, 1.0);

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

std::size_t segment_length_for(std::size_t n, int segments) {
    if (segments < kMinSegments)
        throw StatisticsError("Welch estimate needs at least " + std::to_string(kMinSegments) + " segments (got " +
                              std::to_string(segments) + ")");
    const std::size_t len = n / static_cast<std::size_t>(segments);
    if (len < kMinSegmentLength)
        throw StatisticsError("record of " + std::to_string(n) + " samples is too short for " +
                              std::to_string(segments) + " segments of at least " +
                              std::to_string(kMinSegmentLength) + " samples");
    return len;
}

void require_config(const SimConfig& cfg, double step) {
    auto v = violations(cfg, step);
    if (v.empty()) return;
    for (const auto& s : v)
        if (s.find("segment") != std::string::npos) throw StatisticsError(s);
    throw ValidationError(v);
}

TimeSeries collect(double dt, const std::function<void(const SampleSink&)>& run) {
    TimeSeries ts;
    ts.dt = dt;
    const double r2 = std::sqrt(2.0);
    run([&](cd z) {
        ts.q.push_back(r2 * z.real());
        ts.p.push_back(r2 * z.imag());
    });
    return ts;
}

struct LoopKernel {
    LoopPassMap q, p;
    double tau;
    double n_th;
};

LoopState run_loop(const LoopKernel& k, const SimConfig& cfg, const SampleSink& sink, const LoopSimOptions& opt) {
    require_config(cfg, k.tau);
    const std::size_t passes = cfg.samples(k.tau);
    const double sigma = opt.noise ? std::sqrt((0.5 + k.n_th) / k.tau) : 0.0;
    GaussianSource g(cfg.seed);
    LoopState s = opt.initial;
    const double r2 = std::sqrt(2.0);
    for (std::size_t n = 0; n < passes; ++n) {
        Eigen::Vector2d uq, up;
        uq << sigma * g(), sigma * g();
        up << sigma * g(), sigma * g();
        const double oq = k.q.C.dot(s.q) + k.q.D.dot(uq);
        const double op = k.p.C.dot(s.p) + k.p.D.dot(up);
        s.q = k.q.A * s.q + k.q.B * uq;
        s.p = k.p.A * s.p + k.p.B * up;
        sink(cd(oq, op) / r2);
    }
    return s;
}

}  // namespace

Window parse_window(const std::string& name) {
    if (name == "hann") return Window::hann;
    if (name == "rectangular") return Window::rectangular;
    throw UsageError("unknown window '" + name + "' (expected hann or rectangular)");
}

std::string to_string(Window w) { return w == Window::hann ? "hann" : "rectangular"; }

std::size_t SimConfig::samples(double step) const {
    if (!(step > 0) || !(duration > 0)) return 0;
    return static_cast<std::size_t>(std::llround(duration / step));
}

std::vector<std::string> violations(const SimConfig& c, double step) {
    std::vector<std::string> v;
    if (!(c.dt > 0)) v.push_back("sim.dt must be > 0");
    if (!(c.duration > 0)) v.push_back("sim.duration must be > 0");
    if (c.segments < kMinSegments)
        v.push_back("sim.segments must be >= " + std::to_string(kMinSegments) + " (got " +
                    std::to_string(c.segments) + ")");
    else if (step > 0 && c.samples(step) < static_cast<std::size_t>(c.segments) * kMinSegmentLength)
        v.push_back("sim.duration / step must give at least segments x " + std::to_string(kMinSegmentLength) +
                    " samples (got " + std::to_string(c.samples(step)) + "); increase sim.duration or reduce sim.segments");
    return v;
}

cd TimeSeries::z(std::size_t i) const { return cd(q[i], p[i]) / std::sqrt(2.0); }

std::vector<cd> TimeSeries::field() const {
    std::vector<cd> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = z(i);
    return out;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

GaussianSource::GaussianSource(std::uint64_t seed, std::uint64_t stream) : rng_(mix_seed(seed, stream)) {}

cd GaussianSource::complex(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = s * dist_(rng_);
    const double im = s * dist_(rng_);
    return {re, im};
}

TimeSeries gaussian_quadrature_noise(double n_th, double dt, std::size_t count, std::uint64_t seed) {
    if (!(n_th >= 0)) throw DomainError("gaussian_quadrature_noise: n_th must be >= 0");
    if (!(dt > 0)) throw DomainError("gaussian_quadrature_noise: dt must be > 0");
    GaussianSource g(seed);
    const double sigma = std::sqrt((0.5 + n_th) / dt);
    TimeSeries ts;
    ts.dt = dt;
    ts.q.resize(count);
    ts.p.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        ts.q[i] = sigma * g();
        ts.p[i] = sigma * g();
    }
    return ts;
}

ZohStep zoh_discretize(const Eigen::MatrixXcd& A, double dt) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    M.topLeftCorner(n, n) = A * dt;
    M.topRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n) * dt;
    const Eigen::MatrixXcd E = M.exp();
    return {E.topLeftCorner(n, n), E.topRightCorner(n, n)};
}

void check_resolution(const Eigen::MatrixXcd& A, double dt) {
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
    const double lam = es.eigenvalues().cwiseAbs().maxCoeff();
    if (dt * lam > 0.1)
        throw ResolutionError("step too coarse: dt * max|eigenvalue| = " + std::to_string(dt * lam) +
                              " > 0.1; reduce sim.dt below " + std::to_string(0.1 / lam));
}

void simulate_passive(const PassiveParams& p, const SimConfig& cfg, const SampleSink& sink,
                      const PassiveSimOptions& opt) {
    validate(p);
    require_config(cfg, cfg.dt);
    PassiveParams r = p;
    r.omega0 = 0.0;
    const Eigen::Matrix2cd A = passive_ode_matrix(r);
    check_resolution(A, cfg.dt);
    const auto step = zoh_discretize(A, cfg.dt);
    const Eigen::Matrix2cd Phi = step.Phi, Psi = step.Psi;
    const double ka = std::sqrt(2.0 * p.gamma_a), kb = std::sqrt(2.0 * p.gamma_b);
    const double va = opt.noise ? (0.5 + p.n_a) / cfg.dt : 0.0;
    const double vb = opt.noise ? (0.5 + p.n_b) / cfg.dt : 0.0;
    GaussianSource g(cfg.seed);
    Eigen::Vector2cd x = opt.initial;
    const std::size_t n = cfg.samples();
    for (std::size_t k = 0; k < n; ++k) {
        const cd ua = g.complex(va), ub = g.complex(vb);
        const Eigen::Vector2cd f(ka * ua, kb * ub);
        const Eigen::Vector2cd next = Phi * x + Psi * f;
        sink(ka * 0.5 * (x(0) + next(0)) - ua);
        x = next;
    }
}

TimeSeries simulate_passive(const PassiveParams& p, const SimConfig& cfg, const PassiveSimOptions& opt) {
    return collect(cfg.dt, [&](const SampleSink& s) { simulate_passive(p, cfg, s, opt); });
}

void simulate_pt_markovian(const PTParams& p, const MeanField& mean, const SimConfig& cfg, const SampleSink& sink,
                           const PTSimOptions& opt) {
    validate(p);
    require_config(cfg, cfg.dt);
    const std::size_t n = cfg.samples();
    if (!opt.delta_eps.empty() && opt.delta_eps.size() < n)
        throw ShapeError("delta_eps series is shorter than the simulation");
    PTParams r = p;
    r.omega0 = 0.0;
    const Eigen::Matrix2cd A = pt_ode_matrix(r);
    check_resolution(A, cfg.dt);
    const auto step = zoh_discretize(A, cfg.dt);
    const Eigen::Matrix2cd Phi = step.Phi, Psi = step.Psi;
    const double g = p.gamma, k = std::sqrt(2.0 * g), s = p.splitting_half();
    const double vin = opt.noise ? (0.5 + p.n_in) / cfg.dt : 0.0;
    const double vamp = opt.noise ? (0.5 + p.n_amp) / cfg.dt : 0.0;
    GaussianSource src(cfg.seed);
    Eigen::Vector2cd x = Eigen::Vector2cd::Zero();
    const bool drive = !opt.delta_eps.empty();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (double(i) + 0.5) * cfg.dt;
        const cd ep = std::exp(-I * s * t), em = std::conj(ep);
        const cd ubar = mean.a_plus * ep + mean.a_minus * em;
        const cd bbar = mean.b_plus * ep + mean.b_minus * em;
        const cd uin = src.complex(vin), uamp = src.complex(vamp);
        Eigen::Vector2cd f(k * uin, k * std::conj(uamp));
        if (drive) {
            const double de = opt.delta_eps[i];
            f(0) += g * de * bbar;
            f(1) -= g * de * ubar;
        }
        const Eigen::Vector2cd next = Phi * x + Psi * f;
        cd out = k * 0.5 * (x(0) + next(0)) - uin;
        if (opt.include_carrier) out += k * ubar;
        sink(out);
        x = next;
    }
}

TimeSeries simulate_pt_markovian(const PTParams& p, const MeanField& mean, const SimConfig& cfg,
                                 const PTSimOptions& opt) {
    return collect(cfg.dt, [&](const SampleSink& s) { simulate_pt_markovian(p, mean, cfg, s, opt); });
}

LoopState simulate_loop(const LoopParams& p, const SimConfig& cfg, const SampleSink& sink, const LoopSimOptions& opt) {
    validate(p);
    const auto c = calibrate_loop(p.eta, p.eps);
    const LoopKernel k{loop_pass_map(p.eta, c.mu, c.G, 1.0, +1), loop_pass_map(p.eta, c.mu, c.G, 1.0, -1), p.tau,
                       p.n_th};
    return run_loop(k, cfg, sink, opt);
}

LoopState simulate_loop(const PSLoopParams& p, const SimConfig& cfg, const SampleSink& sink,
                        const LoopSimOptions& opt) {
    validate(p);
    const double G = std::max(p.G(), 0.0);
    const double mu = calibrate_loop(p.eta, p.eps).mu;
    const LoopKernel k{loop_pass_map(p.eta, mu, G, std::exp(p.xi), +1),
                       loop_pass_map(p.eta, mu, G, std::exp(-p.xi), -1), p.tau, p.n_th};
    return run_loop(k, cfg, sink, opt);
}

TimeSeries simulate_loop(const LoopParams& p, const SimConfig& cfg, const LoopSimOptions& opt) {
    return collect(p.tau, [&](const SampleSink& s) { simulate_loop(p, cfg, s, opt); });
}

TimeSeries simulate_loop(const PSLoopParams& p, const SimConfig& cfg, const LoopSimOptions& opt) {
    return collect(p.tau, [&](const SampleSink& s) { simulate_loop(p, cfg, s, opt); });
}

WelchAccumulator::WelchAccumulator(std::size_t segment_length, double dt, Window window)
    : length_(segment_length), dt_(dt), window_(segment_length, 1.0), acc_(segment_length, 0.0) {
    if (segment_length < 2) throw StatisticsError("Welch segment length must be >= 2");
    if (!(dt > 0)) throw DomainError("Welch dt must be > 0");
    if (window == Window::hann)
        for (std::size_t i = 0; i < length_; ++i) window_[i] = 0.5 * (1.0 - std::cos(kTwoPi * double(i) / double(length_)));
    window_power_ = 0.0;
    for (double w : window_) window_power_ += w * w;
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto* buf = fftw_alloc_complex(length_);
    buffer_ = buf;
    plan_ = fftw_plan_dft_1d(static_cast<int>(length_), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

WelchAccumulator::~WelchAccumulator() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(buffer_);
}

void WelchAccumulator::push(cd z) {
    auto* buf = static_cast<fftw_complex*>(buffer_);
    const double w = window_[fill_];
    buf[fill_][0] = w * z.real();
    buf[fill_][1] = w * z.imag();
    if (++fill_ == length_) flush();
}

void WelchAccumulator::flush() {
    fftw_execute(static_cast<fftw_plan>(plan_));
    const auto* buf = static_cast<const fftw_complex*>(buffer_);
    for (std::size_t i = 0; i < length_; ++i) acc_[i] += buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1];
    fill_ = 0;
    ++segments_;
}

Spectrum WelchAccumulator::spectrum() const {
    if (segments_ == 0) throw StatisticsError("Welch accumulator holds no complete segment");
    Spectrum out;
    out.grid.resize(length_);
    out.values.resize(length_);
    const double norm = dt_ / (window_power_ * segments_);
    const double dw = kTwoPi / (double(length_) * dt_);
    // Negative frequencies first: bins L - L/2 ... L - 1, then 0 ... L - L/2 - 1.
    const std::size_t neg = length_ / 2;
    for (std::size_t j = 0; j < length_; ++j) {
        const std::size_t bin = (j + length_ - neg) % length_;
        const long long k = static_cast<long long>(j) - static_cast<long long>(neg);
        out.grid[j] = double(k) * dw;
        out.values[j] = acc_[bin] * norm;
    }
    return out;
}

Spectrum welch_psd(const std::vector<cd>& z, double dt, int segments, Window window) {
    const std::size_t len = segment_length_for(z.size(), segments);
    WelchAccumulator acc(len, dt, window);
    for (std::size_t i = 0; i < len * static_cast<std::size_t>(segments); ++i) acc.push(z[i]);
    return acc.spectrum();
}

Spectrum welch_psd(const std::vector<double>& x, double dt, int segments, Window window) {
    const std::size_t len = segment_length_for(x.size(), segments);
    WelchAccumulator acc(len, dt, window);
    for (std::size_t i = 0; i < len * static_cast<std::size_t>(segments); ++i) acc.push(cd(x[i], 0.0));
    return acc.spectrum();
}

Spectrum welch_psd(const TimeSeries& series, const SimConfig& cfg) {
    return welch_psd(series.field(), series.dt, cfg.segments, cfg.window);
}

FrequencyNoiseExtractor::FrequencyNoiseExtractor(double carrier_offset, cd carrier, double gamma,
                                                 std::size_t segment_length, double dt, Window window)
    : offset_(carrier_offset), dt_(dt), psd_(segment_length, dt, window) {
    if (!(std::abs(carrier) > 0)) throw NoCarrierError("frequency-noise extraction needs a nonzero carrier");
    if (!(gamma > 0)) throw DomainError("frequency-noise extraction needs gamma > 0");
    phase_ref_ = std::conj(carrier) / std::abs(carrier);
    scale_ = 1.0 / (4.0 * gamma * std::norm(carrier));
}

void FrequencyNoiseExtractor::push(cd z) {
    const cd d = z * std::exp(I * (offset_ * double(k_) * dt_)) * phase_ref_;
    ++k_;
    psd_.push(cd(std::sqrt(2.0) * d.imag(), 0.0));
}

Spectrum FrequencyNoiseExtractor::spectrum() const {
    Spectrum s = psd_.spectrum();
    for (std::size_t i = 0; i < s.grid.size(); ++i) s.values[i] *= s.grid[i] * s.grid[i] * scale_;
    return s;
}

Spectrum extract_frequency_noise(const TimeSeries& series, double carrier_offset, cd carrier, double gamma,
                                 const SimConfig& cfg) {
    const std::size_t len = segment_length_for(series.size(), cfg.segments);
    FrequencyNoiseExtractor ex(carrier_offset, carrier, gamma, len, series.dt, cfg.window);
    for (std::size_t i = 0; i < len * static_cast<std::size_t>(cfg.segments); ++i) ex.push(series.z(i));
    return ex.spectrum();
}

}  // namespace eplab
