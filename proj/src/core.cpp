#include "eplab/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eplab {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += "; ";
        out += v[i];
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void require(std::vector<std::string>& out, bool ok, const std::string& msg, double value) {
    if (!ok) out.push_back(msg + " (got " + fmt(value) + ")");
}

bool is_round_trip_multiple(double omega0, double tau) {
    const double turns = omega0 * tau / kTwoPi;
    return std::abs(turns - std::round(turns)) <= 1e-9 * std::max(1.0, std::abs(turns));
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

double PTParams::splitting_half() const { return gamma * std::sqrt(eps_bar * (2.0 + eps_bar)); }

double PassiveParams::coupling() const { return 0.5 * std::abs(gamma_a - gamma_b) * (1.0 + eps); }

double PSLoopParams::G() const { return std::exp(-2.0 * xi) / (1.0 - eta) - 1.0; }

double PSLoopParams::pure_xi(double eta) { return -0.5 * std::log1p(-eta); }

std::vector<std::string> violations(const PTParams& p) {
    std::vector<std::string> v;
    require(v, std::isfinite(p.omega0), "omega0 must be finite", p.omega0);
    require(v, p.gamma > 0, "gamma must be > 0", p.gamma);
    require(v, p.eps_bar > 0, "eps_bar must be > 0", p.eps_bar);
    require(v, p.n_in >= 0, "n_in must be >= 0", p.n_in);
    require(v, p.n_amp >= 0, "n_amp must be >= 0", p.n_amp);
    require(v, p.gamma_reg >= 0, "gamma_reg must be >= 0", p.gamma_reg);
    return v;
}

std::vector<std::string> violations(const PassiveParams& p) {
    std::vector<std::string> v;
    require(v, std::isfinite(p.omega0), "omega0 must be finite", p.omega0);
    require(v, p.gamma_a > 0, "gamma_a must be > 0", p.gamma_a);
    require(v, p.gamma_b > 0, "gamma_b must be > 0", p.gamma_b);
    require(v, std::isfinite(p.eps), "eps must be finite", p.eps);
    require(v, p.n_a >= 0, "n_a must be >= 0", p.n_a);
    require(v, p.n_b >= 0, "n_b must be >= 0", p.n_b);
    return v;
}

std::vector<std::string> violations(const ActiveParams& p) {
    std::vector<std::string> v;
    require(v, std::isfinite(p.omega0), "omega0 must be finite", p.omega0);
    require(v, p.gamma > 0, "gamma must be > 0", p.gamma);
    require(v, p.g >= 0, "g must be >= 0", p.g);
    require(v, p.g <= p.gamma, "g must be <= gamma (stability)", p.g);
    require(v, std::isfinite(p.eps), "eps must be finite", p.eps);
    require(v, p.n_in >= 0, "n_in must be >= 0", p.n_in);
    require(v, p.n_amp >= 0, "n_amp must be >= 0", p.n_amp);
    return v;
}

std::vector<std::string> violations(const LoopParams& p) {
    std::vector<std::string> v;
    require(v, p.eta > 0 && p.eta < 1, "eta must lie in (0, 1)", p.eta);
    require(v, p.tau > 0, "tau must be > 0", p.tau);
    require(v, p.eps >= 0, "eps must be >= 0", p.eps);
    require(v, p.n_th >= 0, "n_th must be >= 0", p.n_th);
    if (p.tau > 0)
        require(v, is_round_trip_multiple(p.omega0, p.tau),
                "omega0*tau must be an integer multiple of 2pi", p.omega0 * p.tau);
    return v;
}

std::vector<std::string> violations(const PhaseSensitiveParams& p) {
    std::vector<std::string> v;
    require(v, std::isfinite(p.omega0), "omega0 must be finite", p.omega0);
    require(v, p.gamma_a > 0, "gamma_a must be > 0", p.gamma_a);
    require(v, p.gamma_b >= 0, "gamma_b must be >= 0", p.gamma_b);
    require(v, p.r >= 0 && p.r <= p.gamma_a + p.gamma_b,
            "r must satisfy 0 <= r <= gamma_a + gamma_b (stability)", p.r);
    require(v, p.eps_bar > 0, "eps_bar must be > 0", p.eps_bar);
    require(v, p.n_th >= 0, "n_th must be >= 0", p.n_th);
    return v;
}

std::vector<std::string> violations(const PSLoopParams& p) {
    std::vector<std::string> v;
    require(v, p.eta > 0 && p.eta < 1, "eta must lie in (0, 1)", p.eta);
    require(v, p.tau > 0, "tau must be > 0", p.tau);
    require(v, p.eps >= 0, "eps must be >= 0", p.eps);
    require(v, p.n_th >= 0, "n_th must be >= 0", p.n_th);
    require(v, std::isfinite(p.xi), "xi must be finite", p.xi);
    if (p.eta > 0 && p.eta < 1)
        require(v, p.xi <= PSLoopParams::pure_xi(p.eta) * (1 + 1e-12),
                "xi must satisfy xi <= -ln(1-eta)/2 so that the amplifier gain G >= 0", p.xi);
    if (p.tau > 0)
        require(v, is_round_trip_multiple(p.omega0, p.tau),
                "omega0*tau must be an integer multiple of 2pi", p.omega0 * p.tau);
    return v;
}

cd carrier_factor(double eps_bar, int sign) {
    const double root = std::sqrt(eps_bar * (2.0 + eps_bar));
    return cd(1.0, -sign * root) / (1.0 + eps_bar);
}

MeanField mean_field_solution(const PTParams& params, cd a_plus, cd a_minus) {
    validate(params);
    MeanField m;
    m.a_plus = a_plus;
    m.a_minus = a_minus;
    m.b_plus = carrier_factor(params.eps_bar, +1) * a_plus;
    m.b_minus = carrier_factor(params.eps_bar, -1) * a_minus;
    m.flux_plus = 2.0 * params.gamma * std::norm(a_plus);
    m.flux_minus = 2.0 * params.gamma * std::norm(a_minus);
    return m;
}

QuadratureComponents quadrature_components(cd x_plus, cd x_minus) {
    const double r2 = std::sqrt(2.0);
    const cd i(0.0, 1.0);
    QuadratureComponents c;
    c.q_plus = (x_plus + std::conj(x_minus)) / r2;
    c.q_minus = (x_minus + std::conj(x_plus)) / r2;
    c.p_plus = (x_plus - std::conj(x_minus)) / (r2 * i);
    c.p_minus = (x_minus - std::conj(x_plus)) / (r2 * i);
    return c;
}

double thermal_occupation(double omega, double temperature) {
    if (!(omega > 0)) throw DomainError("thermal_occupation: omega must be > 0");
    if (!(temperature >= 0)) throw DomainError("thermal_occupation: temperature must be >= 0");
    if (temperature == 0) return 0.0;
    const double x = kHbar * omega / (kBoltzmann * temperature);
    return 1.0 / std::expm1(x);
}

void Spectrum::check() const {
    if (grid.size() != values.size()) throw ShapeError("spectrum grid and values differ in length");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ShapeError("spectrum grid must be strictly increasing");
    for (double v : values)
        if (!(v >= 0)) throw ShapeError("spectrum values must be nonnegative");
}

double Spectrum::interpolate(double omega) const {
    if (grid.empty() || omega < grid.front() || omega > grid.back())
        throw DomainError("spectrum evaluated outside its grid");
    auto it = std::lower_bound(grid.begin(), grid.end(), omega);
    std::size_t j = static_cast<std::size_t>(it - grid.begin());
    if (grid[j] == omega) return values[j];
    const double t = (omega - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return values[j - 1] + t * (values[j] - values[j - 1]);
}

const std::vector<cd>& TransferFunctionSet::at(const std::string& name) const {
    auto it = channels.find(name);
    if (it == channels.end()) throw UsageError("no transfer-function channel named " + name);
    return it->second;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0 && hi > 0)) throw DomainError("logspace bounds must be > 0");
    auto e = linspace(std::log(lo), std::log(hi), n);
    for (auto& x : e) x = std::exp(x);
    return e;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ShapeError("loglog_slope needs matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace eplab
