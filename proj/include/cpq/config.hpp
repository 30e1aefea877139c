#pragma once
#include <optional>
#include <string>

#include "cpq/energy.hpp"

namespace cpq {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value run configuration. File first, then --set overrides (flags
// win). Unknown or malformed keys are hard errors.
struct RunConfig {
    std::optional<double> k0, mu1, mu2;
    std::optional<double> r;
    std::optional<double> r_min, r_max;
    int n_r = 16;

    CutoffScheme cutoff;
    QuadratureConfig quad;
    Branch branch = Branch::Plus;
    ShellGridSpec grid;

    std::string order = "4th";   // "4th" | "all"
    std::string format = "csv";  // "csv" | "json"
    std::string out;             // empty -> stdout

    // Applies one key=value assignment; throws ConfigError on unknown key or
    // malformed value.
    void set(const std::string& key, const std::string& value);

    // Parses a config file (one key=value per line, '#' comments, blank lines).
    void load_file(const std::string& path);

    OscillatorPair pair() const;  // requires k0, mu1, mu2 (and r if set)
    std::vector<double> r_samples() const;  // from r or r_min/r_max/n_r

    void validate() const;
};

} // namespace cpq
