#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <optional>
#include <set>
#include <thread>

#include "eplab/core.hpp"
#include "eplab/estimation.hpp"
#include "eplab/markovian.hpp"
#include "eplab/nonmarkovian.hpp"
#include "eplab/phase_sensitive.hpp"
#include "eplab/stochastic.hpp"

namespace eplab::cli {

namespace {

using Row = std::vector<std::string>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string f(double x) { return format_double(x); }

// Eigenfrequencies are defined at the exceptional point itself, so eigen skips the stability check.
PTParams pt_params(const RunConfig& c, bool check = true) {
    PTParams p;
    p.omega0 = c.real("pt.omega0");
    p.gamma = c.real("pt.gamma");
    p.eps_bar = c.real("pt.eps_bar");
    p.n_in = c.real("pt.n_in");
    p.n_amp = c.real("pt.n_amp");
    p.gamma_reg = c.real("pt.gamma_reg");
    return check ? validate(p) : p;
}

PassiveParams passive_params(const RunConfig& c) {
    PassiveParams p;
    p.omega0 = c.real("passive.omega0");
    p.gamma_a = c.real("passive.gamma_a");
    p.gamma_b = c.real("passive.gamma_b");
    p.eps = c.real("passive.eps");
    p.n_a = c.real("passive.n_a");
    p.n_b = c.real("passive.n_b");
    return validate(p);
}

ActiveParams active_params(const RunConfig& c) {
    ActiveParams p;
    p.omega0 = c.real("active.omega0");
    p.gamma = c.real("active.gamma");
    p.g = c.real("active.g");
    p.eps = c.real("active.eps");
    p.n_in = c.real("active.n_in");
    p.n_amp = c.real("active.n_amp");
    return validate(p);
}

LoopParams loop_params(const RunConfig& c) {
    LoopParams p;
    p.eta = c.real("loop.eta");
    p.tau = c.real("loop.tau");
    p.eps = c.real("loop.eps");
    p.omega0 = c.real("loop.omega0");
    p.n_th = c.real("loop.n_th");
    return validate(p);
}

PhaseSensitiveParams ps_params(const RunConfig& c) {
    PhaseSensitiveParams p;
    p.omega0 = c.real("phase_sensitive.omega0");
    p.gamma_a = c.real("phase_sensitive.gamma_a");
    p.gamma_b = c.real("phase_sensitive.gamma_b");
    p.r = c.real("phase_sensitive.r");
    p.eps_bar = c.real("phase_sensitive.eps_bar");
    p.n_th = c.real("phase_sensitive.n_th");
    return validate(p);
}

PSLoopParams ps_loop_params(const RunConfig& c) {
    PSLoopParams p;
    p.eta = c.real("ps_loop.eta");
    p.tau = c.real("ps_loop.tau");
    p.eps = c.real("ps_loop.eps");
    p.xi = c.real("ps_loop.xi");
    p.omega0 = c.real("ps_loop.omega0");
    p.n_th = c.real("ps_loop.n_th");
    return validate(p);
}

LoopParams as_loop(const PSLoopParams& q) {
    LoopParams l;
    l.eta = q.eta;
    l.tau = q.tau;
    l.eps = q.eps;
    l.omega0 = q.omega0;
    l.n_th = q.n_th;
    return l;
}

[[noreturn]] void unsupported(const std::string& command, const std::string& model) {
    throw UsageError(command + " is not available for model " + model);
}

std::vector<std::string> formulas(const RunConfig& c) {
    const auto& f = c.text("formula");
    if (f == "both") return {"exact", "near_resonance"};
    return {f};
}

double nearest(const std::vector<double>& res, double w) {
    double best = res.front();
    for (double r : res)
        if (std::abs(w - r) < std::abs(w - best)) best = r;
    return best;
}

struct PointResult {
    std::vector<std::string> columns;
    std::vector<Row> rows;
    std::vector<std::string> summary_columns;
    std::vector<Row> summary_rows;
    std::set<std::string> formula_ids;
    std::size_t excluded = 0;
    std::vector<nlohmann::json> meta;
};

struct Point {
    RunConfig cfg;
    Row sweep_cells;
    std::size_t index;
};

// Drops grid points within the guard of a real resonance, or throws PoleError when the guard is off.
std::vector<double> guard_grid(const std::vector<double>& grid, const std::vector<double>& res, double scale,
                               bool guard, std::size_t& excluded) {
    std::vector<double> out;
    const double tol = kCliPoleGuard * scale;
    for (double w : grid) {
        const auto hit = std::find_if(res.begin(), res.end(), [&](double r) { return std::abs(w - r) <= tol; });
        if (hit == res.end()) {
            out.push_back(w);
        } else if (guard) {
            ++excluded;
        } else {
            throw PoleError("grid point " + f(w) + " rad/s lies within " + f(tol) + " rad/s of the resonance " +
                                f(*hit) + " rad/s; drop --no-pole-guard or move the grid",
                            *hit);
        }
    }
    return out;
}

double quad_sum(const TransferFunctionSet& t, const std::vector<std::string>& names, std::size_t i, double level) {
    double s = 0;
    for (const auto& n : names) s += std::norm(t.at(n)[i]) * level;
    return s;
}

// ---- eigen ----

PointResult eigen(const RunConfig& c, const RunOptions&) {
    PointResult r;
    r.formula_ids.insert("eigen." + c.model);
    r.columns = {"model", "block"};
    Row params;
    for (const auto& k : schema(c.model))
        if (k.key.rfind(c.model + ".", 0) == 0 && k.kind == Kind::real) {
            r.columns.push_back(k.key.substr(c.model.size() + 1));
            params.push_back(f(c.real(k.key)));
        }
    for (const char* col : {"re_omega_minus", "im_omega_minus", "re_omega_plus", "im_omega_plus", "splitting"})
        r.columns.push_back(col);
    auto add = [&](const std::string& block, cd lo, cd hi) {
        Row row = {c.model, block};
        row.insert(row.end(), params.begin(), params.end());
        for (double v : {lo.real(), lo.imag(), hi.real(), hi.imag(), hi.real() - lo.real()}) row.push_back(f(v));
        r.rows.push_back(row);
    };
    const cd I(0, 1);
    if (c.model == "pt") {
        const auto e = pt_eigenfrequencies(pt_params(c, false));
        add("modes", e.omega_minus, e.omega_plus);
    } else if (c.model == "passive") {
        const auto e = passive_eigenfrequencies(passive_params(c));
        add("modes", e.omega_minus, e.omega_plus);
    } else if (c.model == "active") {
        const auto e = active_eigenfrequencies(active_params(c));
        add("modes", e.omega_minus, e.omega_plus);
    } else if (c.model == "loop") {
        const auto [lo, hi] = loop_resonances(loop_params(c));
        add("modes", lo, hi);
    } else if (c.model == "phase_sensitive") {
        const auto p = ps_params(c);
        const auto e = ps_quadrature_eigenvalues(p);
        auto pair = [&](std::pair<cd, cd> l) {
            cd a = p.omega0 + I * l.first, b = p.omega0 + I * l.second;
            if (b.real() < a.real()) std::swap(a, b);
            return std::pair<cd, cd>{a, b};
        };
        const auto amp = pair(e.amplitude_pair), ph = pair(e.phase_pair);
        add("amplitude", amp.first, amp.second);
        add("phase", ph.first, ph.second);
    } else {
        const auto [lo, hi] = loop_resonances(as_loop(ps_loop_params(c)));
        add("amplitude", lo, hi);
    }
    return r;
}

// ---- tf ----

PointResult tf(const RunConfig& c, const RunOptions& opt) {
    PointResult r;
    r.formula_ids.insert("tf." + c.model);
    const auto grid = guard_grid(c.grid(), real_resonances(c), pole_scale(c), opt.pole_guard, r.excluded);
    std::vector<std::pair<std::string, const TransferFunctionSet*>> sets;
    TransferFunctionSet a, b;
    if (c.model == "pt") {
        const auto p = pt_params(c);
        a = pt_output_quadrature_relation(p, mean_field_solution(p, c.complex("carrier.a_plus"), c.complex("carrier.a_minus")),
                                          grid, Quadrature::p);
        sets.push_back({"", &a});
    } else if (c.model == "passive") {
        a = passive_transfer_functions(passive_params(c), grid);
        sets.push_back({"", &a});
    } else if (c.model == "active") {
        a = active_transfer_functions(active_params(c), grid);
        sets.push_back({"", &a});
    } else if (c.model == "loop") {
        a = loop_transfer_functions(loop_params(c), grid);
        sets.push_back({"", &a});
    } else if (c.model == "phase_sensitive") {
        const auto p = ps_params(c);
        a = ps_amplitude_transfer_functions(p, grid);
        b = ps_phase_transfer_functions(p, grid);
        sets.push_back({"q_", &a});
        sets.push_back({"p_", &b});
    } else {
        a = ps_nonmarkovian_quadrature_tfs(ps_loop_params(c), grid);
        sets.push_back({"", &a});
    }
    r.columns = {"omega"};
    for (const auto& [prefix, set] : sets)
        for (const auto& [name, v] : set->channels) {
            r.columns.push_back("re_" + prefix + name);
            r.columns.push_back("im_" + prefix + name);
        }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Row row = {f(grid[i])};
        for (const auto& [prefix, set] : sets)
            for (const auto& [name, v] : set->channels) {
                row.push_back(f(v[i].real()));
                row.push_back(f(v[i].imag()));
            }
        r.rows.push_back(row);
    }
    return r;
}

// ---- spectrum ----

PointResult spectrum(const RunConfig& c, const RunOptions& opt) {
    PointResult r;
    r.columns = {"formula", "omega", "S_qq", "S_pp"};
    const auto res = real_resonances(c);
    const auto grid = guard_grid(c.grid(), res, pole_scale(c), opt.pole_guard, r.excluded);
    for (const auto& form : formulas(c)) {
        const bool exact = form == "exact";
        const std::string id = "spectrum." + c.model + "." + form;
        r.formula_ids.insert(id);
        std::vector<double> sq(grid.size()), sp(grid.size());
        if (c.model == "pt") {
            const auto p = pt_params(c);
            if (exact) {
                sq = pt_output_spectrum_exact(p, grid, Quadrature::q).values;
                sp = pt_output_spectrum_exact(p, grid, Quadrature::p).values;
            } else {
                const double s = p.splitting_half();
                const std::vector<double> rr = {p.omega0 - s, p.omega0 + s};
                for (std::size_t i = 0; i < grid.size(); ++i)
                    sq[i] = sp[i] = pt_output_spectrum_near_resonance(p, grid[i] - nearest(rr, grid[i]));
            }
        } else if (c.model == "passive" || c.model == "active") {
            if (!exact) unsupported("spectrum --formula near_resonance", c.model);
            sp = c.model == "passive" ? passive_output_spectrum(passive_params(c), grid).values
                                      : active_output_spectrum(active_params(c), grid).values;
            sq = sp;
        } else if (c.model == "loop") {
            const auto l = loop_params(c);
            if (exact) {
                sp = loop_output_spectrum(l, grid).values;
            } else {
                const auto [lo, hi] = loop_resonances(l);
                for (std::size_t i = 0; i < grid.size(); ++i)
                    sp[i] = loop_spectrum_near_resonance(l, grid[i] - nearest({lo, hi}, grid[i]));
            }
            sq = sp;
        } else if (c.model == "phase_sensitive") {
            const auto p = ps_params(c);
            if (exact) {
                sp = ps_output_phase_spectrum(p, grid).values;
                const auto t = ps_amplitude_transfer_functions(p, grid);
                for (std::size_t i = 0; i < grid.size(); ++i) sq[i] = quad_sum(t, {"a_in", "amp", "b_in"}, i, 0.5 + p.n_th);
            } else {
                std::fill(sp.begin(), sp.end(), ps_spectrum_near_resonance(p));
                std::fill(sq.begin(), sq.end(), kNaN);
            }
        } else {
            const auto q = ps_loop_params(c);
            if (exact) {
                sp = ps_nonmarkovian_phase_spectrum(q, grid).values;
                const auto t = ps_nonmarkovian_quadrature_tfs(q, grid);
                for (std::size_t i = 0; i < grid.size(); ++i) sq[i] = quad_sum(t, {"q_in", "q_amp"}, i, 0.5 + q.n_th);
            } else {
                std::fill(sp.begin(), sp.end(), ps_nonmarkovian_near_resonance(q));
                std::fill(sq.begin(), sq.end(), kNaN);
            }
        }
        for (std::size_t i = 0; i < grid.size(); ++i) r.rows.push_back({id, f(grid[i]), f(sq[i]), f(sp[i])});
    }
    return r;
}

// ---- freqnoise ----

PointResult freqnoise(const RunConfig& c, const RunOptions& opt) {
    PointResult r;
    r.columns = {"formula", "delta", "S_plus", "S_minus", "S_reference_plus", "S_reference_minus"};
    const auto grid = guard_grid(c.grid(), {0.0}, pole_scale(c), opt.pole_guard, r.excluded);
    for (const auto& form : formulas(c)) {
        const bool exact = form == "exact";
        const std::string id = "freqnoise." + c.model + "." + form;
        r.formula_ids.insert(id);
        if (c.model == "pt") {
            const auto p = pt_params(c);
            const double ap = std::abs(c.complex("carrier.a_plus")), am = std::abs(c.complex("carrier.a_minus"));
            if (ap == 0 || am == 0) throw NoCarrierError("carrier.a_plus and carrier.a_minus must be nonzero");
            const double s = p.splitting_half();
            const double ref_p = fundamental_frequency_noise(p.gamma, p.eps_bar, ap, p.n_th());
            const double ref_m = fundamental_frequency_noise(p.gamma, p.eps_bar, am, p.n_th());
            for (double d : grid) {
                const double sp = exact ? pt_output_spectrum_exact(p, p.omega0 + s + d) : pt_output_spectrum_near_resonance(p, d);
                const double sm = exact ? pt_output_spectrum_exact(p, p.omega0 - s + d) : pt_output_spectrum_near_resonance(p, d);
                r.rows.push_back({id, f(d), f(frequency_noise_spectrum(sp, d, p.gamma, ap)),
                                  f(frequency_noise_spectrum(sm, d, p.gamma, am)), f(ref_p), f(ref_m)});
            }
        } else if (c.model == "loop") {
            const auto l = loop_params(c);
            const double a = std::abs(c.complex("carrier.alpha"));
            if (a == 0) throw NoCarrierError("carrier.alpha must be nonzero");
            const auto [lo, hi] = loop_resonances(l);
            const double ref = freq_noise_nonmarkovian(l, a);
            for (double d : grid) {
                const double sp = exact ? loop_output_spectrum(l, hi + d) : loop_spectrum_near_resonance(l, d);
                const double sm = exact ? loop_output_spectrum(l, lo + d) : loop_spectrum_near_resonance(l, d);
                const double k = d * d / (2.0 * a * a);
                r.rows.push_back({id, f(d), f(k * sp), f(k * sm), f(ref), f(ref)});
            }
        } else {
            unsupported("freqnoise", c.model);
        }
    }
    return r;
}

// ---- imprecision ----

PointResult imprecision_cmd(const RunConfig& c, const RunOptions&) {
    PointResult r;
    r.columns = {"formula_id", "eps", "sensitivity", "noise", "imprecision", "closed_form", "delta_omega_meas"};
    const double dw = c.real("estimation.delta_omega_meas");
    auto add = [&](double eps, const ImprecisionReport& rep) {
        r.formula_ids.insert(rep.formula_id);
        r.rows.push_back({rep.formula_id, f(eps), f(rep.sensitivity), f(rep.noise), f(rep.imprecision),
                          f(rep.closed_form), f(rep.delta_omega_meas)});
    };
    if (c.model == "pt") {
        const auto p = pt_params(c);
        const auto mean = mean_field_solution(p, c.complex("carrier.a_plus"), c.complex("carrier.a_minus"));
        for (const auto& form : formulas(c))
            add(p.eps_bar, form == "exact" ? imprecision(p, mean, dw) : imprecision_near_resonance(p, mean, dw));
    } else if (c.model == "phase_sensitive") {
        const auto p = ps_params(c);
        add(p.eps_bar, ps_imprecision(p, c.complex("carrier.q0"), dw));
    } else {
        unsupported("imprecision", c.model);
    }
    return r;
}

// ---- simulate ----

PointResult simulate(const RunConfig& c, const RunOptions& opt, std::size_t index) {
    PointResult r;
    if (c.model == "active" || c.model == "phase_sensitive") unsupported("simulate", c.model);

    SimConfig sc;
    sc.dt = c.real("sim.dt");
    sc.duration = c.real("sim.duration");
    sc.seed = mix_seed(std::uint64_t(c.integer("seed")), index);
    sc.segments = int(c.integer("sim.segments"));
    sc.window = parse_window(c.text("sim.window"));
    double step = sc.dt, omega0 = 0;
    if (c.model == "loop") step = sc.dt = loop_params(c).tau;
    if (c.model == "ps_loop") step = sc.dt = ps_loop_params(c).tau;

    if (sc.segments < kMinSegments)
        throw StatisticsError("sim.segments = " + std::to_string(sc.segments) + " is below the minimum of " +
                              std::to_string(kMinSegments) + "; raise sim.segments");
    if (!(sc.dt > 0) || !(sc.duration > 0)) throw ValidationError({"sim.dt and sim.duration must be > 0"});
    const std::size_t n = sc.samples(step);
    const std::size_t L = n / std::size_t(sc.segments);
    if (L < kMinSegmentLength)
        throw StatisticsError("segment length " + std::to_string(L) + " is below " + std::to_string(kMinSegmentLength) +
                              " samples; raise sim.duration to at least " +
                              f(double(kMinSegmentLength) * sc.segments * step) + " s or lower sim.segments");
    if (auto v = violations(sc, step); !v.empty()) throw ValidationError(v);

    WelchAccumulator acc(L, step, sc.window);
    double sq = 0, sp = 0, mq = 0, mp = 0;
    std::size_t count = 0;
    // The phase-sensitive loop is compared in its phase quadrature; the others as a complex field.
    const bool phase_only = c.model == "ps_loop";
    const SampleSink sink = [&](cd z) {
        if (count < L * std::size_t(sc.segments)) acc.push(phase_only ? cd(std::sqrt(2.0) * z.imag(), 0.0) : z);
        const double q = std::sqrt(2.0) * z.real(), p = std::sqrt(2.0) * z.imag();
        mq += q;
        mp += p;
        sq += q * q;
        sp += p * p;
        ++count;
    };
    std::function<double(double)> analytic;
    if (c.model == "passive") {
        const auto p = passive_params(c);
        omega0 = p.omega0;
        simulate_passive(p, sc, sink);
        analytic = [p](double w) { return passive_output_spectrum(p, std::vector<double>{w}).values[0]; };
    } else if (c.model == "pt") {
        const auto p = pt_params(c);
        omega0 = p.omega0;
        simulate_pt_markovian(p, mean_field_solution(p, c.complex("carrier.a_plus"), c.complex("carrier.a_minus")), sc,
                              sink);
        analytic = [p](double w) { return pt_output_spectrum_exact(p, w); };
    } else if (c.model == "loop") {
        const auto l = loop_params(c);
        omega0 = l.omega0;
        simulate_loop(l, sc, sink);
        analytic = [l](double w) { return loop_output_spectrum(l, w); };
    } else {
        const auto q = ps_loop_params(c);
        omega0 = q.omega0;
        simulate_loop(q, sc, sink);
        analytic = [q](double w) { return ps_nonmarkovian_phase_spectrum(q, w); };
    }
    r.formula_ids.insert("simulate." + c.model + (phase_only ? ".phase_quadrature" : ".field"));
    r.formula_ids.insert("spectrum." + c.model + ".exact");

    const auto S = acc.spectrum();
    std::vector<double> res;
    for (double w : real_resonances(c)) res.push_back(w - omega0);
    const double lo = c.real("grid.min"), hi = c.real("grid.max");
    std::vector<double> wanted;
    for (std::size_t i = 0; i < S.grid.size(); ++i)
        if (S.grid[i] >= lo && S.grid[i] <= hi) wanted.push_back(S.grid[i]);
    const auto kept = guard_grid(wanted, res, pole_scale(c), opt.pole_guard, r.excluded);
    r.columns = {"omega", "S_estimate", "S_analytic"};
    const double dw = kTwoPi / (double(L) * step);
    const auto bin = [&](double d) {
        const long k = long(L / 2) + std::lround(d / dw);
        return std::size_t(std::clamp(k, 0L, long(L) - 1));
    };
    for (double d : kept) r.rows.push_back({f(d), f(S.values[bin(d)]), f(analytic(omega0 + d))});

    const double nn = double(count);
    r.summary_columns = {"quantity", "value"};
    r.summary_rows = {{"samples", std::to_string(count)},
                      {"segments", std::to_string(acc.segments())},
                      {"segment_length", std::to_string(L)},
                      {"dt", f(step)},
                      {"seed", std::to_string(sc.seed)},
                      {"mean_q", f(mq / nn)},
                      {"mean_p", f(mp / nn)},
                      {"var_q", f(sq / nn - (mq / nn) * (mq / nn))},
                      {"var_p", f(sp / nn - (mp / nn) * (mp / nn))}};

    nlohmann::json refs = nlohmann::json::array();
    if (c.has("sim.offsets"))
        for (double d : c.list("sim.offsets")) {
            nlohmann::json e = {{"offset", d}, {"bin_omega", S.grid[bin(d)]}, {"S_estimate", S.values[bin(d)]}};
            try {
                e["S_analytic"] = analytic(omega0 + d);
            } catch (const PoleError&) {
                e["S_analytic"] = nullptr;
            }
            refs.push_back(e);
        }
    r.meta.push_back({{"command", "simulate"},
                      {"model", c.model},
                      {"point", index},
                      {"seed", sc.seed},
                      {"segments", acc.segments()},
                      {"segment_length", L},
                      {"samples", count},
                      {"dt", step},
                      {"reference", refs}});
    return r;
}

PointResult evaluate(const std::string& command, const Point& pt, const RunOptions& opt) {
    if (command == "eigen") return eigen(pt.cfg, opt);
    if (command == "tf") return tf(pt.cfg, opt);
    if (command == "spectrum") return spectrum(pt.cfg, opt);
    if (command == "freqnoise") return freqnoise(pt.cfg, opt);
    if (command == "imprecision") return imprecision_cmd(pt.cfg, opt);
    if (command == "simulate") return simulate(pt.cfg, opt, pt.index);
    throw UsageError("unknown command '" + command + "'");
}

std::vector<Point> sweep_points(const RunConfig& cfg) {
    const auto axes = cfg.sweep_axes();
    std::vector<Point> pts;
    std::vector<std::vector<double>> values;
    for (const auto& a : axes) {
        if (a.points < 1) throw ValidationError({a.key + " sweep needs at least 1 point"});
        if (a.log && !(a.min > 0 && a.max > 0)) throw ValidationError({a.key + " log sweep needs positive bounds"});
        values.push_back(a.values());
    }
    std::size_t total = 1;
    for (const auto& v : values) total *= v.size();
    for (std::size_t i = 0; i < total; ++i) {
        Point p{cfg, {}, i};
        std::size_t rem = i;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const double v = values[a][rem % values[a].size()];
            rem /= values[a].size();
            p.cfg.set_real(axes[a].key, v);
            p.sweep_cells.insert(p.sweep_cells.begin(), f(v));
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

std::string units_for(const std::string& command) {
    if (command == "eigen") return "omega and rates rad/s, tau s, others dimensionless";
    if (command == "tf") return "omega rad/s, gains dimensionless";
    if (command == "freqnoise") return "delta rad/s, S rad^2/s";
    if (command == "imprecision") return "sensitivity rad/s, noise rad/s, delta_omega_meas rad/s, imprecision dimensionless";
    return "omega rad/s, spectra per unit angular bandwidth with vacuum level 1/2";
}

}  // namespace

double pole_scale(const RunConfig& c) {
    if (c.model == "pt") return c.real("pt.gamma");
    if (c.model == "passive") return c.real("passive.gamma_a");
    if (c.model == "active") return c.real("active.gamma");
    if (c.model == "phase_sensitive") return c.real("phase_sensitive.gamma_a");
    if (c.model == "loop") return 1.0 / c.real("loop.tau");
    return 1.0 / c.real("ps_loop.tau");
}

std::vector<double> real_resonances(const RunConfig& c) {
    const double scale = pole_scale(c);
    std::vector<double> out;
    auto keep = [&](cd w) {
        if (std::abs(w.imag()) <= 1e-12 * scale) out.push_back(w.real());
    };
    const cd I(0, 1);
    if (c.model == "pt") {
        const auto e = pt_eigenfrequencies(pt_params(c));
        keep(e.omega_minus);
        keep(e.omega_plus);
    } else if (c.model == "passive") {
        const auto e = passive_eigenfrequencies(passive_params(c));
        keep(e.omega_minus);
        keep(e.omega_plus);
    } else if (c.model == "active") {
        const auto e = active_eigenfrequencies(active_params(c));
        keep(e.omega_minus);
        keep(e.omega_plus);
    } else if (c.model == "phase_sensitive") {
        const auto p = ps_params(c);
        const auto e = ps_quadrature_eigenvalues(p);
        for (cd l : {e.amplitude_pair.first, e.amplitude_pair.second, e.phase_pair.first, e.phase_pair.second})
            keep(p.omega0 + I * l);
    } else {
        const auto l = c.model == "loop" ? loop_params(c) : as_loop(ps_loop_params(c));
        const auto [lo, hi] = loop_resonances(l);
        out = {lo, hi};
    }
    return out;
}

CommandOutput run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opt) {
    std::string target = command;
    if (command == "sweep") {
        target = cfg.text("sweep.command");
        if (cfg.sweep_axes().empty()) throw UsageError("sweep needs sweep.axis1.key (and optionally sweep.axis2.key)");
    }
    const auto points = sweep_points(cfg);
    std::vector<std::optional<PointResult>> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
            try {
                results[i] = evaluate(target, points[i], opt);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(opt.workers, int(points.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    const auto axes = cfg.sweep_axes();
    CommandOutput out;
    std::set<std::string> ids;
    std::size_t excluded = 0;
    for (const auto& a : axes) {
        out.table.columns.push_back(a.key);
        out.summary.columns.push_back(a.key);
    }
    const auto& first = *results.front();
    out.table.columns.insert(out.table.columns.end(), first.columns.begin(), first.columns.end());
    out.summary.columns.insert(out.summary.columns.end(), first.summary_columns.begin(), first.summary_columns.end());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& r = *results[i];
        ids.insert(r.formula_ids.begin(), r.formula_ids.end());
        excluded += r.excluded;
        for (auto& row : r.rows) {
            Row full = points[i].sweep_cells;
            full.insert(full.end(), row.begin(), row.end());
            out.table.rows.push_back(std::move(full));
        }
        for (auto& row : r.summary_rows) {
            Row full = points[i].sweep_cells;
            full.insert(full.end(), row.begin(), row.end());
            out.summary.rows.push_back(std::move(full));
        }
        for (auto& m : r.meta) out.meta.push_back(std::move(m));
    }

    std::string id_list;
    for (const auto& id : ids) id_list += (id_list.empty() ? "" : " ") + id;
    const std::string hash = cfg.hash();
    std::vector<std::string> header = {std::string("tool: ") + kToolVersion,
                                       "command: " + command,
                                       "model: " + cfg.model,
                                       "formula_ids: " + id_list,
                                       "units: " + units_for(target),
                                       "config_hash: fnv1a64:" + hash,
                                       "points: " + std::to_string(points.size()),
                                       "pole_guard: " + std::string(opt.pole_guard ? "exclude" : "off") +
                                           " within " + f(kCliPoleGuard) + " x " + f(pole_scale(cfg)) + " rad/s",
                                       "excluded_bins: " + std::to_string(excluded)};
    std::string serialized = cfg.serialize();
    for (std::size_t b = 0, e; (e = serialized.find('\n', b)) != std::string::npos; b = e + 1)
        header.push_back("config: " + serialized.substr(b, e - b));
    out.table.comments = header;
    out.summary.comments = header;
    out.meta.insert(out.meta.begin(), nlohmann::json{{"tool", kToolVersion},
                                                     {"command", command},
                                                     {"model", cfg.model},
                                                     {"config_hash", hash},
                                                     {"formula_ids", ids},
                                                     {"points", points.size()},
                                                     {"rows", out.table.rows.size()},
                                                     {"excluded_bins", excluded},
                                                     {"seed", cfg.integer("seed")}});
    return out;
}

std::string run_and_write(const std::string& command, const RunConfig& cfg, const RunOptions& opt) {
    const auto out = run_command(command, cfg, opt);
    const std::filesystem::path dir = cfg.text("output.dir");
    const std::string csv = (dir / (command + ".csv")).string();
    write_text(csv, render_csv(out.table));
    if (!out.summary.rows.empty()) write_text((dir / (command + "_summary.csv")).string(), render_csv(out.summary));
    write_jsonl((dir / (command + ".meta.jsonl")).string(), out.meta);
    return csv;
}

}  // namespace eplab::cli
