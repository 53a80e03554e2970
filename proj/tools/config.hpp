#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace eplab::cli {

enum class Dimension { none, frequency, time };

enum class Kind { real, integer, complex, text, real_list };

// Schema row: key, value kind, physical dimension, default in canonical units and allowed words.
struct KeySpec {
    std::string key;
    Kind kind;
    Dimension dim = Dimension::none;
    std::string fallback;
    std::vector<std::string> choices;
};

using Value = std::variant<double, std::int64_t, std::complex<double>, std::string, std::vector<double>>;

inline const std::vector<std::string> kModels = {"pt", "passive", "active", "loop", "phase_sensitive", "ps_loop"};

// Keys accepted for a model, including grid, sweep, sim and output keys.
const std::vector<KeySpec>& schema(const std::string& model);
const KeySpec* find_key(const std::string& model, const std::string& key);

struct SweepAxis {
    std::string key;
    double min = 0, max = 0;
    int points = 0;
    bool log = false;

    std::vector<double> values() const;
};

struct RunConfig {
    std::string model;
    std::map<std::string, Value> values;

    double real(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::complex<double> complex(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    const std::vector<double>& list(const std::string& key) const;
    bool has(const std::string& key) const { return values.count(key) != 0; }

    void set_real(const std::string& key, double v);
    void set_text(const std::string& key, const std::string& v);
    void set_integer(const std::string& key, std::int64_t v);

    std::vector<double> grid() const;
    std::vector<SweepAxis> sweep_axes() const;

    // Sorted keys, shortest round-trip numbers, canonical units.
    std::string serialize() const;
    // FNV-1a 64 of serialize(), as 16 hex digits.
    std::string hash() const;
};

// Throws ValidationError naming every bad line or key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string format_double(double x);
std::string format_complex(std::complex<double> z);
std::string unit_name(Dimension d);

}  // namespace eplab::cli
