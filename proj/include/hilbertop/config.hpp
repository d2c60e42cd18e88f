#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hilbertop {

// Every numerical default shared by the command-line tools lives here, so one
// run is reproducible from its flags plus at most one configuration file.
// Flags override file entries, which override these shipped values.
struct Config {
    std::size_t trunc = 2048;  // truncation length for sections and test vectors
    double eps = 1e-2;         // single-shot extremal-sequence epsilon
    std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3};  // bracket schedule
    int grid_density = 64;     // coarse resolution of the Schur parameter search
    std::size_t iters = 1000;  // power iteration cap (the stop rule exits earlier)
    std::vector<double> z_schedule = {1, 10, 100, 1000};  // half-line cutoffs
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double parse_positive(const std::string& v, const std::string& key) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || !(x > 0.0))
        throw std::invalid_argument("config: " + key + " needs a positive number, got '" + v +
                                    "'");
    return x;
}

inline std::vector<double> parse_schedule(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream iss(v);
    std::string item;
    while (std::getline(iss, item, ',')) out.push_back(parse_positive(trim(item), key));
    if (out.empty()) throw std::invalid_argument("config: " + key + " must not be empty");
    return out;
}

}  // namespace detail

// One `key = value` assignment.  Unknown keys are rejected so that a typo in a
// configuration file cannot silently fall back to a default.
inline void apply_config_entry(Config& cfg, const std::string& key, const std::string& value) {
    if (key == "trunc")
        cfg.trunc = static_cast<std::size_t>(detail::parse_positive(value, key));
    else if (key == "eps")
        cfg.eps = detail::parse_positive(value, key);
    else if (key == "eps_schedule")
        cfg.eps_schedule = detail::parse_schedule(value, key);
    else if (key == "grid_density") {
        cfg.grid_density = static_cast<int>(detail::parse_positive(value, key));
        if (cfg.grid_density < 2)
            throw std::invalid_argument("config: grid_density must be >= 2");
    } else if (key == "iters")
        cfg.iters = static_cast<std::size_t>(detail::parse_positive(value, key));
    else if (key == "z_schedule")
        cfg.z_schedule = detail::parse_schedule(value, key);
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

// Reads `key = value` lines; blank lines and lines starting with '#' are
// skipped.  Returns `base` updated with the file's entries.
inline Config load_config_file(const std::string& path, Config base = {}) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not of the form key = value");
        apply_config_entry(base, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return base;
}

}  // namespace hilbertop
