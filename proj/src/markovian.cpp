#include "eplab/markovian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace eplab {

namespace {

const cd I(0.0, 1.0);

EigenPair sorted_pair(cd x, cd y) {
    // Real parts within rounding of each other count as equal.
    const double tie = 1e-12 * (std::abs(x) + std::abs(y));
    auto less = [tie](cd a, cd b) {
        if (std::abs(a.real() - b.real()) <= tie) return a.imag() < b.imag();
        return a.real() < b.real();
    };
    if (less(y, x)) std::swap(x, y);
    return {x, y};
}

std::string fmt(double x) { return std::to_string(x); }

void guard_real_poles(double omega, double omega0, double half_split, double scale) {
    const double d = omega - omega0;
    if (std::abs(d - half_split) <= kPoleGuard * scale)
        throw PoleError("evaluation at the resonance Omega_+ = " + fmt(omega0 + half_split), omega0 + half_split);
    if (std::abs(d + half_split) <= kPoleGuard * scale)
        throw PoleError("evaluation at the resonance Omega_- = " + fmt(omega0 - half_split), omega0 - half_split);
}

}  // namespace

EigenPair eigen_numeric(const Eigen::Matrix2cd& K) {
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(K(i).real()) || !std::isfinite(K(i).imag()))
            throw DomainError("eigen_numeric: matrix entries must be finite");
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(K, false);
    return sorted_pair(I * es.eigenvalues()(0), I * es.eigenvalues()(1));
}

Eigen::Matrix2cd pt_ode_matrix(const PTParams& p) {
    const double k = p.gamma * (1.0 + p.eps_bar);
    Eigen::Matrix2cd K;
    K << cd(-p.gamma - p.gamma_reg, -p.omega0), k, -k, cd(p.gamma - p.gamma_reg, -p.omega0);
    return K;
}

Eigen::Matrix2cd passive_ode_matrix(const PassiveParams& p) {
    const double c = p.coupling();
    Eigen::Matrix2cd K;
    K << cd(-p.gamma_a, -p.omega0), c, -c, cd(-p.gamma_b, -p.omega0);
    return K;
}

Eigen::Matrix2cd active_ode_matrix(const ActiveParams& p) {
    const double c = 0.5 * (p.gamma + p.g) * (1.0 + p.eps);
    Eigen::Matrix2cd K;
    K << cd(-p.gamma, -p.omega0), c, -c, cd(p.g, -p.omega0);
    return K;
}

EigenPair pt_eigenfrequencies(const PTParams& p) {
    if (!(p.gamma > 0)) throw ValidationError({"gamma must be > 0"});
    if (!(p.eps_bar >= 0)) throw DomainError("pt_eigenfrequencies: eps_bar must be >= 0");
    const double s = p.splitting_half();
    const cd damp(0.0, -p.gamma_reg);
    return {p.omega0 - s + damp, p.omega0 + s + damp};
}

EigenPair passive_eigenfrequencies(const PassiveParams& p) {
    validate(p);
    const cd centre(p.omega0, -0.5 * (p.gamma_a + p.gamma_b));
    const cd half = 0.5 * std::abs(p.gamma_a - p.gamma_b) * std::sqrt(cd(p.eps * (2.0 + p.eps)));
    return sorted_pair(centre - half, centre + half);
}

EigenPair active_eigenfrequencies(const ActiveParams& p) {
    validate(p);
    const cd centre(p.omega0, -0.5 * (p.gamma - p.g));
    const cd half = 0.5 * (p.gamma + p.g) * std::sqrt(cd(p.eps * (2.0 + p.eps)));
    return sorted_pair(centre - half, centre + half);
}

TransferFunctionSet passive_transfer_functions(const PassiveParams& p, const std::vector<double>& grid) {
    validate(p);
    const double c = p.coupling();
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& ha = tf.channels["a"];
    auto& hb = tf.channels["b"];
    for (double w : grid) {
        const double d = w - p.omega0;
        const cd det = (p.gamma_a - I * d) * (p.gamma_b - I * d) + c * c;
        ha.push_back(2.0 * p.gamma_a * (p.gamma_b - I * d) / det - 1.0);
        hb.push_back(2.0 * c * std::sqrt(p.gamma_a * p.gamma_b) / det);
    }
    return tf;
}

TransferFunctionSet active_transfer_functions(const ActiveParams& p, const std::vector<double>& grid) {
    validate(p);
    const double c = 0.5 * (p.gamma + p.g) * (1.0 + p.eps);
    const bool balanced = p.g == p.gamma;
    if (balanced && p.eps == 0)
        throw PoleError("active sensor with g = gamma and eps = 0 has a pole on the real axis at Omega_0", p.omega0);
    const double s = balanced ? 0.5 * (p.gamma + p.g) * std::sqrt(p.eps * (2.0 + p.eps)) : 0.0;
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& hin = tf.channels["in"];
    auto& hamp = tf.channels["amp"];
    for (double w : grid) {
        if (balanced) guard_real_poles(w, p.omega0, s, p.gamma);
        const double d = w - p.omega0;
        const cd det = (p.gamma - I * d) * (-p.g - I * d) + c * c;
        hin.push_back(2.0 * p.gamma * (-p.g - I * d) / det - 1.0);
        hamp.push_back(2.0 * c * std::sqrt(p.gamma * p.g) / det);
    }
    return tf;
}

Spectrum passive_output_spectrum(const PassiveParams& p, const Spectrum& s_a, const Spectrum& s_b,
                                 const std::vector<cd>& s_ab, const std::vector<double>& grid) {
    if (s_a.grid != grid || s_b.grid != grid || s_ab.size() != grid.size())
        throw ShapeError("passive_output_spectrum: input spectra must share the evaluation grid");
    const auto tf = passive_transfer_functions(p, grid);
    const auto& ha = tf.at("a");
    const auto& hb = tf.at("b");
    Spectrum out;
    out.grid = grid;
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.values[i] = std::norm(ha[i]) * s_a.values[i] + std::norm(hb[i]) * s_b.values[i] +
                        2.0 * std::real(ha[i] * std::conj(hb[i]) * s_ab[i]);
    return out;
}

Spectrum passive_output_spectrum(const PassiveParams& p, const std::vector<double>& grid) {
    Spectrum sa{grid, std::vector<double>(grid.size(), 0.5 + p.n_a)};
    Spectrum sb{grid, std::vector<double>(grid.size(), 0.5 + p.n_b)};
    return passive_output_spectrum(p, sa, sb, std::vector<cd>(grid.size()), grid);
}

Spectrum active_output_spectrum(const ActiveParams& p, const std::vector<double>& grid) {
    const auto tf = active_transfer_functions(p, grid);
    Spectrum out;
    out.grid = grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.values.push_back(std::norm(tf.at("in")[i]) * (0.5 + p.n_in) + std::norm(tf.at("amp")[i]) * (0.5 + p.n_amp));
    return out;
}

PTGains pt_gains(const PTParams& p, const MeanField* mean, double omega, Quadrature x) {
    const double g = p.gamma;
    const double s = p.splitting_half();
    if (p.gamma_reg == 0) guard_real_poles(omega, p.omega0, s, g);
    const double d = omega - p.omega0;
    // Rotating-frame resolvent of [[u+g, -g(1+e)], [g(1+e), u-g]], u = gamma_reg - i d.
    const cd u(p.gamma_reg, -d);
    const cd det = (s + d + I * p.gamma_reg) * (s - d - I * p.gamma_reg);
    const double k = g * (1.0 + p.eps_bar);
    PTGains out;
    out.in = 2.0 * g * (u - g) / det - 1.0;
    const double amp_sign = x == Quadrature::p ? -1.0 : 1.0;
    out.amp = amp_sign * 2.0 * g * k / det;
    if (mean) {
        const auto qa = quadrature_components(mean->a_plus, mean->a_minus);
        const auto qb = quadrature_components(mean->b_plus, mean->b_minus);
        const bool isq = x == Quadrature::q;
        const cd xa_p = isq ? qa.q_plus : qa.p_plus, xa_m = isq ? qa.q_minus : qa.p_minus;
        const cd xb_p = isq ? qb.q_plus : qb.p_plus, xb_m = isq ? qb.q_minus : qb.p_minus;
        const double pre = std::sqrt(2.0 * g) * g;
        out.de_plus = pre * ((u - g) * xb_p - k * xa_p) / det;
        out.de_minus = pre * ((u - g) * xb_m - k * xa_m) / det;
    }
    return out;
}

TransferFunctionSet pt_output_quadrature_relation(const PTParams& p, const MeanField& mean,
                                                  const std::vector<double>& grid, Quadrature x) {
    validate(p);
    TransferFunctionSet tf;
    tf.grid = grid;
    auto& in = tf.channels["in"];
    auto& amp = tf.channels["amp"];
    auto& dm = tf.channels["de_minus"];
    auto& dp = tf.channels["de_plus"];
    for (double w : grid) {
        const auto gsum = pt_gains(p, &mean, w, x);
        in.push_back(gsum.in);
        amp.push_back(gsum.amp);
        dm.push_back(gsum.de_minus);
        dp.push_back(gsum.de_plus);
    }
    return tf;
}

double pt_output_spectrum_exact(const PTParams& p, double omega) {
    const auto g = pt_gains(p, nullptr, omega, Quadrature::p);
    return std::norm(g.in) * (0.5 + p.n_in) + std::norm(g.amp) * (0.5 + p.n_amp);
}

Spectrum pt_output_spectrum_exact(const PTParams& p, const std::vector<double>& grid, Quadrature x) {
    validate(p);
    Spectrum out;
    out.grid = grid;
    for (double w : grid) {
        const auto g = pt_gains(p, nullptr, w, x);
        out.values.push_back(std::norm(g.in) * (0.5 + p.n_in) + std::norm(g.amp) * (0.5 + p.n_amp));
    }
    return out;
}

double pt_output_spectrum_near_resonance(const PTParams& p, double delta_omega) {
    validate(p);
    if (delta_omega == 0) throw DomainError("near-resonance spectrum diverges at zero offset");
    return p.gamma * p.gamma * (1.0 + 2.0 * p.n_th()) / (2.0 * p.eps_bar * delta_omega * delta_omega);
}

double frequency_noise_spectrum(double s_pp, double delta_omega, double gamma, double a_amp) {
    if (!(a_amp > 0)) throw NoCarrierError("frequency noise needs a nonzero carrier amplitude");
    return delta_omega * delta_omega / (4.0 * gamma * a_amp * a_amp) * s_pp;
}

Spectrum weak_force_output_spectrum(const PTParams& p, const MeanField& mean, const Spectrum& s_epseps,
                                    const std::vector<double>& grid, Quadrature x) {
    validate(p);
    const auto qa = quadrature_components(mean.a_plus, mean.a_minus);
    const double weight = x == Quadrature::q ? std::norm(qa.q_minus) + std::norm(qa.q_plus)
                                             : std::norm(qa.p_minus) + std::norm(qa.p_plus);
    const double g = p.gamma;
    const double s = p.splitting_half();
    Spectrum out;
    out.grid = grid;
    for (double w : grid) {
        if (p.gamma_reg == 0) guard_real_poles(w, p.omega0, s, g);
        const double d = w - p.omega0;
        const double det2 = std::norm((s + d + I * p.gamma_reg) * (s - d - I * p.gamma_reg));
        const double signal = 2.0 * g * weight * s_epseps.interpolate(d);
        out.values.push_back(4.0 * std::pow(g, 4) * ((1.0 + 2.0 * p.n_th()) + signal) / det2);
    }
    return out;
}

DiagonalKind parse_diagonal_kind(const std::string& name) {
    if (name == "common_frequency") return DiagonalKind::common_frequency;
    if (name == "differential_frequency") return DiagonalKind::differential_frequency;
    if (name == "differential_gainloss") return DiagonalKind::differential_gainloss;
    if (name == "common_gainloss") return DiagonalKind::common_gainloss;
    throw UsageError("unknown diagonal perturbation kind: " + name);
}

std::string to_string(DiagonalKind kind) {
    switch (kind) {
        case DiagonalKind::common_frequency: return "common_frequency";
        case DiagonalKind::differential_frequency: return "differential_frequency";
        case DiagonalKind::differential_gainloss: return "differential_gainloss";
        case DiagonalKind::common_gainloss: return "common_gainloss";
    }
    return "";
}

std::string to_string(DiagonalClass c) {
    switch (c) {
        case DiagonalClass::degeneracy_not_lifted: return "degeneracy_not_lifted";
        case DiagonalClass::linear_response: return "linear_response";
        case DiagonalClass::reverts_below_threshold: return "reverts_below_threshold";
        case DiagonalClass::equivalent_to_coupling_perturbation: return "equivalent_to_coupling_perturbation";
    }
    return "";
}

Eigen::Matrix2cd diagonal_perturbation_matrix(DiagonalKind kind, double gamma, double omega0, double eps) {
    Eigen::Matrix2cd K;
    switch (kind) {
        case DiagonalKind::common_frequency:
            K << cd(-gamma, -omega0 * (1 + eps)), gamma, -gamma, cd(gamma, -omega0 * (1 + eps));
            break;
        case DiagonalKind::differential_frequency:
            K << cd(-gamma, -omega0 * (1 + eps)), gamma, -gamma, cd(gamma, -omega0 * (1 - eps));
            break;
        case DiagonalKind::differential_gainloss:
            K << cd(-gamma * (1 - eps), -omega0), gamma, -gamma, cd(gamma * (1 + eps), -omega0);
            break;
        case DiagonalKind::common_gainloss:
            K << cd(-gamma * (1 - eps), -omega0), gamma, -gamma, cd(gamma * (1 - eps), -omega0);
            break;
    }
    return K;
}

DiagonalPerturbationResult diagonal_perturbation_eigen(DiagonalKind kind, double gamma, double omega0, double eps) {
    EigenPair e{};
    switch (kind) {
        case DiagonalKind::common_frequency:
            e = {omega0 * (1 + eps), omega0 * (1 + eps)};
            break;
        case DiagonalKind::differential_frequency: {
            const cd root = std::sqrt(2.0 * I * gamma * omega0 * eps - eps * eps * omega0 * omega0);
            e = sorted_pair(omega0 + I * root, omega0 - I * root);
            break;
        }
        case DiagonalKind::differential_gainloss:
            e = {cd(omega0, gamma * eps), cd(omega0, gamma * eps)};
            break;
        case DiagonalKind::common_gainloss: {
            const cd root = gamma * std::sqrt(cd(eps * (2.0 - eps)));
            e = sorted_pair(omega0 - root, omega0 + root);
            break;
        }
    }
    const double scale = std::max({1.0, std::abs(omega0), std::abs(gamma)});
    const double tol = 1e-12 * scale;
    DiagonalPerturbationResult r{kind, e, std::abs(e.omega_plus - e.omega_minus) <= tol, {}};
    const double max_im = std::max(e.omega_minus.imag(), e.omega_plus.imag());
    if (r.degenerate)
        r.classification = std::abs(e.omega_plus.imag()) <= tol ? DiagonalClass::degeneracy_not_lifted
                                                                : DiagonalClass::linear_response;
    else
        r.classification = max_im > tol ? DiagonalClass::reverts_below_threshold
                                        : DiagonalClass::equivalent_to_coupling_perturbation;
    return r;
}

}  // namespace eplab
