#include "cpq/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cpq {

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has malformed numeric value '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has malformed integer value '" + v + "'");
    }
}

double parse_positive(const std::string& key, const std::string& v) {
    double x = parse_double(key, v);
    if (!(x > 0)) throw ConfigError("config: key '" + key + "' must be positive");
    return x;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "k0") k0 = parse_positive(key, value);
    else if (key == "mu1") mu1 = parse_double(key, value);
    else if (key == "mu2") mu2 = parse_double(key, value);
    else if (key == "r") r = parse_positive(key, value);
    else if (key == "r_min") r_min = parse_positive(key, value);
    else if (key == "r_max") r_max = parse_positive(key, value);
    else if (key == "n_r") n_r = parse_int(key, value);
    else if (key == "cutoff_kind") {
        if (value == "exponential") cutoff.kind = CutoffKind::Exponential;
        else if (value == "sharp") cutoff.kind = CutoffKind::Sharp;
        else throw ConfigError("config: cutoff_kind must be 'exponential' or 'sharp'");
    } else if (key == "cutoff_lambda") cutoff.lambda = parse_positive(key, value);
    else if (key == "quad_rel_tol") quad.rel_tol = parse_positive(key, value);
    else if (key == "quad_abs_tol") quad.abs_tol = parse_positive(key, value);
    else if (key == "quad_max_subdivisions") quad.max_subdivisions = parse_int(key, value);
    else if (key == "damping_ladder") {
        std::stringstream ss(value);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(parse_positive(key, trim(tok)));
        if (vals.size() != quad.damping_ladder.size())
            throw ConfigError("config: damping_ladder needs exactly 3 comma-separated values");
        std::copy(vals.begin(), vals.end(), quad.damping_ladder.begin());
    } else if (key == "grid_shells") grid.n_shells = parse_int(key, value);
    else if (key == "grid_k_min") grid.k_min = parse_positive(key, value);
    else if (key == "grid_k_max") grid.k_max = parse_positive(key, value);
    else if (key == "grid_ladder") {
        if (value == "uniform") grid.ladder = ShellGridSpec::Ladder::Uniform;
        else if (value == "geometric") grid.ladder = ShellGridSpec::Ladder::Geometric;
        else throw ConfigError("config: grid_ladder must be 'uniform' or 'geometric'");
    } else if (key == "grid_directions") grid.directions = parse_int(key, value);
    else if (key == "grid_seed") grid.seed = static_cast<unsigned>(parse_int(key, value));
    else if (key == "branch") {
        if (value == "plus") branch = Branch::Plus;
        else if (value == "minus") branch = Branch::Minus;
        else throw ConfigError("config: branch must be 'plus' or 'minus'");
    } else if (key == "order") {
        if (value != "4th" && value != "all")
            throw ConfigError("config: order must be '4th' or 'all'");
        order = value;
    } else if (key == "format") {
        if (value != "csv" && value != "json")
            throw ConfigError("config: format must be 'csv' or 'json'");
        format = value;
    } else if (key == "out") out = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not key=value: '" + s + "'");
        set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

OscillatorPair RunConfig::pair() const {
    if (!k0) throw ConfigError("config: missing required key 'k0'");
    if (!mu1) throw ConfigError("config: missing required key 'mu1'");
    if (!mu2) throw ConfigError("config: missing required key 'mu2'");
    OscillatorPair p;
    p.k0 = *k0;
    p.mu1 = *mu1;
    p.mu2 = *mu2;
    p.r = r.value_or(r_min.value_or(1.0));
    p.validate();
    return p;
}

std::vector<double> RunConfig::r_samples() const {
    if (r) return {*r};
    if (!r_min || !r_max)
        throw ConfigError("config: need either key 'r' or keys 'r_min' and 'r_max'");
    if (!(*r_min < *r_max)) throw ConfigError("config: r_min must be < r_max");
    if (n_r < 2) throw ConfigError("config: n_r must be >= 2 for an r range");
    std::vector<double> out(n_r);
    // log-spaced: potentials are power laws
    double q = std::log(*r_max / *r_min) / (n_r - 1);
    for (int i = 0; i < n_r; ++i) out[i] = *r_min * std::exp(q * i);
    out.back() = *r_max;
    return out;
}

void RunConfig::validate() const {
    if (mu1 && *mu1 < 0) throw ConfigError("config: mu1 must be >= 0");
    if (mu2 && *mu2 < 0) throw ConfigError("config: mu2 must be >= 0");
    if (quad.max_subdivisions < 1) throw ConfigError("config: quad_max_subdivisions must be >= 1");
    if (grid.n_shells < 1) throw ConfigError("config: grid_shells must be >= 1");
    if (!(grid.k_min < grid.k_max) && grid.n_shells > 1)
        throw ConfigError("config: grid_k_min must be < grid_k_max");
    if (r_min && r_max && !(*r_min < *r_max))
        throw ConfigError("config: r_min must be < r_max");
}

} // namespace cpq
