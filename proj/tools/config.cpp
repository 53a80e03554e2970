#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "eplab/core.hpp"

namespace eplab::cli {

namespace {

KeySpec freq(std::string key, std::string fallback) { return {std::move(key), Kind::real, Dimension::frequency, std::move(fallback), {}}; }
KeySpec time(std::string key, std::string fallback) { return {std::move(key), Kind::real, Dimension::time, std::move(fallback), {}}; }
KeySpec plain(std::string key, std::string fallback) { return {std::move(key), Kind::real, Dimension::none, std::move(fallback), {}}; }
KeySpec cplx(std::string key) { return {std::move(key), Kind::complex, Dimension::none, "1", {}}; }
KeySpec word(std::string key, std::string fallback, std::vector<std::string> choices) {
    return {std::move(key), Kind::text, Dimension::none, std::move(fallback), std::move(choices)};
}
KeySpec count(std::string key, std::string fallback) { return {std::move(key), Kind::integer, Dimension::none, std::move(fallback), {}}; }

std::vector<KeySpec> common_keys() {
    std::vector<KeySpec> k = {
        word("model", "", kModels),
        count("seed", "1"),
        word("formula", "exact", {"exact", "near_resonance", "both"}),
        word("output.dir", "out", {}),
        freq("grid.min", "-1"),
        freq("grid.max", "1"),
        count("grid.points", "201"),
        word("grid.scale", "linear", {"linear", "log"}),
        word("sweep.command", "spectrum", {"eigen", "tf", "spectrum", "freqnoise", "simulate", "imprecision"}),
        time("sim.dt", "0.01"),
        time("sim.duration", "0"),
        count("sim.segments", "64"),
        word("sim.window", "hann", {"hann", "rectangular"}),
        {"sim.offsets", Kind::real_list, Dimension::frequency, "", {}},
        freq("estimation.delta_omega_meas", "50.26548245743669"),
    };
    for (const char* axis : {"sweep.axis1", "sweep.axis2"}) {
        const std::string a = axis;
        k.push_back(word(a + ".key", "", {}));
        // Units of min and max follow the swept key.
        k.push_back(plain(a + ".min", ""));
        k.push_back(plain(a + ".max", ""));
        k.push_back(count(a + ".points", ""));
        k.push_back(word(a + ".scale", "", {"linear", "log"}));
    }
    return k;
}

std::vector<KeySpec> model_keys(const std::string& m) {
    if (m == "pt")
        return {freq("pt.omega0", "0"),  freq("pt.gamma", "1"),    plain("pt.eps_bar", "0.01"),
                plain("pt.n_in", "0"),   plain("pt.n_amp", "0"),   freq("pt.gamma_reg", "0"),
                cplx("carrier.a_plus"),  cplx("carrier.a_minus")};
    if (m == "passive")
        return {freq("passive.omega0", "0"), freq("passive.gamma_a", "1"), freq("passive.gamma_b", "0.5"),
                plain("passive.eps", "0"),   plain("passive.n_a", "0"),    plain("passive.n_b", "0")};
    if (m == "active")
        return {freq("active.omega0", "0"), freq("active.gamma", "1"), freq("active.g", "0.5"),
                plain("active.eps", "0"),   plain("active.n_in", "0"), plain("active.n_amp", "0")};
    if (m == "loop")
        return {plain("loop.eta", "0.01"), time("loop.tau", "0.005"), plain("loop.eps", "0.01"),
                freq("loop.omega0", "0"),  plain("loop.n_th", "0"),   cplx("carrier.alpha")};
    if (m == "phase_sensitive")
        return {freq("phase_sensitive.omega0", "0"),   freq("phase_sensitive.gamma_a", "1"),
                freq("phase_sensitive.gamma_b", "0"),  freq("phase_sensitive.r", "1"),
                plain("phase_sensitive.eps_bar", "0.01"), plain("phase_sensitive.n_th", "0"), cplx("carrier.q0")};
    if (m == "ps_loop")
        return {plain("ps_loop.eta", "0.01"), time("ps_loop.tau", "0.005"), plain("ps_loop.eps", "0.01"),
                plain("ps_loop.xi", "0"),     freq("ps_loop.omega0", "0"),  plain("ps_loop.n_th", "0"),
                cplx("carrier.alpha")};
    return {};
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& s) {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
    return v;
}

std::optional<std::complex<double>> parse_complex_text(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s.back() != 'i') {
        const auto r = parse_number(s);
        if (!r) return std::nullopt;
        return std::complex<double>(*r, 0.0);
    }
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    auto imag = [](const std::string& t) -> std::optional<double> {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_number(t);
    };
    if (split == std::string::npos) {
        const auto im = imag(body);
        if (!im) return std::nullopt;
        return std::complex<double>(0.0, *im);
    }
    const auto re = parse_number(body.substr(0, split));
    const auto im = imag(body.substr(split));
    if (!re || !im) return std::nullopt;
    return std::complex<double>(*re, *im);
}

// Scale factor to canonical units, or nullopt for an unknown unit.
std::optional<double> unit_scale(Dimension d, const std::string& unit) {
    if (d == Dimension::frequency) {
        if (unit == "rad/s") return 1.0;
        if (unit == "Hz") return kTwoPi;
        if (unit == "kHz") return kTwoPi * 1e3;
        if (unit == "MHz") return kTwoPi * 1e6;
    } else if (d == Dimension::time) {
        if (unit == "s") return 1.0;
        if (unit == "ms") return 1e-3;
        if (unit == "us") return 1e-6;
        if (unit == "ns") return 1e-9;
    }
    return std::nullopt;
}

std::vector<std::string> tokens(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream in(t);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

// Parses the raw text of one entry; appends a message to errs on failure.
std::optional<Value> parse_value(const KeySpec& spec, Dimension dim, const std::string& raw, std::vector<std::string>& errs,
                                 const std::string& where) {
    auto toks = tokens(raw);
    if (spec.kind == Kind::text) {
        const std::string v = trim(raw);
        if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end()) {
            std::string allowed;
            for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : "|") + c;
            errs.push_back(where + ": '" + v + "' is not one of " + allowed);
            return std::nullopt;
        }
        return Value(v);
    }
    if (spec.kind == Kind::complex) {
        if (toks.size() != 1) {
            errs.push_back(where + ": expected one complex number like 1+0.5i");
            return std::nullopt;
        }
        const auto z = parse_complex_text(toks[0]);
        if (!z) {
            errs.push_back(where + ": cannot parse complex number '" + toks[0] + "'");
            return std::nullopt;
        }
        return Value(*z);
    }
    if (spec.kind == Kind::integer) {
        std::int64_t v = 0;
        const std::string t = toks.size() == 1 ? toks[0] : "";
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
            errs.push_back(where + ": expected an integer");
            return std::nullopt;
        }
        return Value(v);
    }
    double scale = 1.0;
    if (!toks.empty() && !parse_number(toks.back())) {
        const std::string unit = toks.back();
        toks.pop_back();
        if (dim == Dimension::none) {
            errs.push_back(where + ": dimensionless value takes no unit (got '" + unit + "')");
            return std::nullopt;
        }
        const auto f = unit_scale(dim, unit);
        if (!f) {
            errs.push_back(where + ": unknown " + std::string(dim == Dimension::time ? "time" : "frequency") +
                           " unit '" + unit + "'");
            return std::nullopt;
        }
        scale = *f;
    } else if (dim != Dimension::none && !toks.empty()) {
        errs.push_back(where + ": missing unit (expected " + unit_name(dim) + ")");
        return std::nullopt;
    }
    std::vector<double> nums;
    for (const auto& t : toks) {
        const auto v = parse_number(t);
        if (!v) {
            errs.push_back(where + ": cannot parse number '" + t + "'");
            return std::nullopt;
        }
        nums.push_back(*v * scale);
    }
    if (spec.kind == Kind::real_list) return Value(nums);
    if (nums.size() != 1) {
        errs.push_back(where + ": expected one number");
        return std::nullopt;
    }
    return Value(nums[0]);
}

const Value& get(const RunConfig& c, const std::string& key) {
    const auto it = c.values.find(key);
    if (it == c.values.end()) throw UsageError("config key '" + key + "' is not set");
    return it->second;
}

template <class T>
const T& typed(const RunConfig& c, const std::string& key) {
    const auto* v = std::get_if<T>(&get(c, key));
    if (!v) throw UsageError("config key '" + key + "' has the wrong type");
    return *v;
}

Dimension axis_dimension(const std::string& model, const std::string& target) {
    const auto* s = find_key(model, target);
    return s ? s->dim : Dimension::none;
}

}  // namespace

std::string unit_name(Dimension d) {
    switch (d) {
        case Dimension::frequency: return "rad/s";
        case Dimension::time: return "s";
        default: return "";
    }
}

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string format_complex(std::complex<double> z) {
    return format_double(z.real()) + (std::signbit(z.imag()) || std::isnan(z.imag()) ? "" : "+") +
           format_double(z.imag()) + "i";
}

const std::vector<KeySpec>& schema(const std::string& model) {
    static std::map<std::string, std::vector<KeySpec>> cache = [] {
        std::map<std::string, std::vector<KeySpec>> m;
        for (const auto& name : kModels) {
            auto k = common_keys();
            for (auto& s : model_keys(name)) k.push_back(std::move(s));
            m[name] = std::move(k);
        }
        return m;
    }();
    const auto it = cache.find(model);
    if (it == cache.end()) throw UsageError("unknown model '" + model + "'");
    return it->second;
}

const KeySpec* find_key(const std::string& model, const std::string& key) {
    for (const auto& s : schema(model))
        if (s.key == key) return &s;
    return nullptr;
}

std::vector<double> SweepAxis::values() const { return log ? logspace(min, max, points) : linspace(min, max, points); }

double RunConfig::real(const std::string& key) const { return typed<double>(*this, key); }
std::int64_t RunConfig::integer(const std::string& key) const { return typed<std::int64_t>(*this, key); }
std::complex<double> RunConfig::complex(const std::string& key) const { return typed<std::complex<double>>(*this, key); }
const std::string& RunConfig::text(const std::string& key) const { return typed<std::string>(*this, key); }
const std::vector<double>& RunConfig::list(const std::string& key) const { return typed<std::vector<double>>(*this, key); }

void RunConfig::set_real(const std::string& key, double v) { values[key] = v; }
void RunConfig::set_text(const std::string& key, const std::string& v) { values[key] = v; }
void RunConfig::set_integer(const std::string& key, std::int64_t v) { values[key] = v; }

std::vector<double> RunConfig::grid() const {
    const double lo = real("grid.min"), hi = real("grid.max");
    const auto n = integer("grid.points");
    if (n < 1) throw ValidationError({"grid.points must be >= 1"});
    if (text("grid.scale") == "log") {
        if (!(lo > 0 && hi > 0)) throw ValidationError({"grid.scale = log needs grid.min > 0 and grid.max > 0"});
        return logspace(lo, hi, std::size_t(n));
    }
    return linspace(lo, hi, std::size_t(n));
}

std::vector<SweepAxis> RunConfig::sweep_axes() const {
    std::vector<SweepAxis> axes;
    for (const char* axis : {"sweep.axis1", "sweep.axis2"}) {
        const std::string a = axis;
        if (!has(a + ".key")) continue;
        SweepAxis s;
        s.key = text(a + ".key");
        s.min = real(a + ".min");
        s.max = real(a + ".max");
        s.points = int(integer(a + ".points"));
        s.log = text(a + ".scale") == "log";
        axes.push_back(s);
    }
    return axes;
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    for (const auto& [key, value] : values) {
        const auto* spec = find_key(model, key);
        Dimension dim = spec ? spec->dim : Dimension::none;
        if (key.rfind("sweep.axis", 0) == 0 && (key.ends_with(".min") || key.ends_with(".max"))) {
            const auto k = values.find(key.substr(0, key.rfind('.')) + ".key");
            if (k != values.end()) dim = axis_dimension(model, std::get<std::string>(k->second));
        }
        out << key << " = ";
        if (const auto* d = std::get_if<double>(&value)) out << format_double(*d);
        else if (const auto* i = std::get_if<std::int64_t>(&value)) out << *i;
        else if (const auto* z = std::get_if<std::complex<double>>(&value)) out << format_complex(*z);
        else if (const auto* s = std::get_if<std::string>(&value)) out << *s;
        else {
            const auto& l = std::get<std::vector<double>>(value);
            for (std::size_t j = 0; j < l.size(); ++j) out << (j ? ", " : "") << format_double(l[j]);
        }
        if (dim != Dimension::none && !std::holds_alternative<std::string>(value)) out << ' ' << unit_name(dim);
        out << '\n';
    }
    return out.str();
}

std::string RunConfig::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : serialize()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::string& text) {
    std::vector<std::string> errs;
    std::vector<std::tuple<int, std::string, std::string>> entries;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        if (seen.count(key)) {
            errs.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                           std::to_string(seen[key]) + ")");
            continue;
        }
        seen[key] = lineno;
        entries.emplace_back(lineno, key, trim(line.substr(eq + 1)));
    }

    RunConfig cfg;
    for (const auto& [n, key, raw] : entries)
        if (key == "model") cfg.model = raw;
    if (cfg.model.empty()) errs.push_back("missing required key 'model'");
    else if (std::find(kModels.begin(), kModels.end(), cfg.model) == kModels.end()) {
        errs.push_back("unknown model '" + cfg.model + "'");
        cfg.model.clear();
    }
    if (cfg.model.empty()) throw ValidationError(errs);

    std::map<std::string, std::string> axis_target;
    for (const auto& [n, key, raw] : entries)
        if (key == "sweep.axis1.key" || key == "sweep.axis2.key") axis_target[key.substr(0, 11)] = raw;

    for (const auto& [n, key, raw] : entries) {
        const std::string where = "line " + std::to_string(n) + " (" + key + ")";
        const auto* spec = find_key(cfg.model, key);
        if (!spec) {
            errs.push_back(where + ": unknown key for model " + cfg.model);
            continue;
        }
        Dimension dim = spec->dim;
        if (key.rfind("sweep.axis", 0) == 0 && (key.ends_with(".min") || key.ends_with(".max"))) {
            const auto t = axis_target.find(key.substr(0, 11));
            dim = t == axis_target.end() ? Dimension::none : axis_dimension(cfg.model, t->second);
        }
        if (auto v = parse_value(*spec, dim, raw, errs, where)) cfg.values[key] = std::move(*v);
    }

    for (const auto& spec : schema(cfg.model)) {
        if (cfg.values.count(spec.key) || spec.fallback.empty()) continue;
        std::vector<std::string> ignore;
        cfg.values[spec.key] = *parse_value(spec, Dimension::none, spec.fallback, ignore, spec.key);
    }

    for (const auto& [prefix, target] : axis_target) {
        const auto* t = find_key(cfg.model, target);
        if (!t || t->kind != Kind::real || target.rfind("grid.", 0) == 0 || target.rfind("sim.", 0) == 0 ||
            target.rfind("estimation.", 0) == 0)
            errs.push_back(prefix + ".key: '" + target + "' is not a model parameter of " + cfg.model);
        for (const char* f : {".min", ".max", ".points"})
            if (!cfg.values.count(prefix + f)) errs.push_back(prefix + f + " is required when " + prefix + ".key is set");
        if (!cfg.values.count(prefix + ".scale")) cfg.values[prefix + ".scale"] = std::string("linear");
    }
    for (const auto& [key, v] : cfg.values)
        if (key.rfind("sweep.axis", 0) == 0 && !axis_target.count(key.substr(0, 11)))
            errs.push_back(key + " is set but " + key.substr(0, 11) + ".key is not");
    if (!errs.empty()) throw ValidationError(errs);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return parse_config(s.str());
}

}  // namespace eplab::cli
