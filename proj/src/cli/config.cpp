#include "subweibull/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "subweibull/errors.hpp"

namespace subweibull::cli {

const std::vector<std::string>& registered_experiments() {
    static const std::vector<std::string> names = {"norms", "tailcheck", "covariance", "rip",
                                                   "re",    "lasso",     "clt",        "bootstrap"};
    return names;
}

namespace {

// Grid keys: every value must be positive.
const std::set<std::string> kGridKeys = {"n", "p", "k", "q", "alpha", "t"};

const std::set<std::string> kKeys = {
    "experiment", "seed",    "reps",    "n",       "p",         "k",        "q",          "alpha",
    "t",          "law",     "rho",     "scale",   "noise",     "noise_sigma", "noise_shape", "policy",
    "lambda",     "lambda_factor", "tol", "max_iter", "draws",  "nominal",  "levels",     "trials",
    "delta",      "r_max",   "grid_step", "norm_tol", "gbo_l",  "pilot",    "grid",       "beta",
    "B",          "cap",     "synthetic", "sigma_np", "k_np",   "gamma",    "poly_r",     "poly_l",
    "k_eps", "tail_gamma", "out"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& where) {
    const std::string v = trim(s);
    if (v.empty()) throw ConfigError(where + ": empty value");
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d))
        throw ConfigError(where + ": malformed number '" + v + "'");
    return d;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    const auto constant_names = BoundConstants{}.as_map();
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        const std::string kw = where + ": " + key;
        const bool is_constant = constant_names.count(key) != 0;
        if (!kKeys.count(key) && !is_constant) throw ConfigError(where + ": unknown key '" + key + "'");
        if (cfg.values.count(key)) throw ConfigError(kw + ": duplicate key");
        std::vector<std::string> items;
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) items.push_back(trim(item));
        if (items.empty() || std::any_of(items.begin(), items.end(), [](auto& s) { return s.empty(); }))
            throw ConfigError(kw + ": empty value");
        if (key == "experiment") {
            const auto& reg = registered_experiments();
            if (items.size() != 1 || std::find(reg.begin(), reg.end(), items[0]) == reg.end())
                throw ConfigError(kw + ": unknown experiment '" + raw + "'");
            cfg.experiment = items[0];
        } else if (key == "seed") {
            const double s = parse_number(raw, kw);
            if (s < 0 || s != std::floor(s) || s > 9.007199254740992e15)
                throw ConfigError(kw + ": seed must be a nonnegative integer");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (is_constant) {
            const double v = parse_number(raw, kw);
            if (!(v > 0.0)) throw ConfigError(kw + ": constants must be positive");
            cfg.constants.set(key, v);
        } else if (key != "law" && key != "noise" && key != "policy") {
            for (const auto& it : items) {
                const double v = parse_number(it, kw);
                if (kGridKeys.count(key) && !(v > 0.0)) throw ConfigError(kw + ": grid values must be positive");
            }
        }
        cfg.values[key] = items;
        cfg.echo.emplace_back(key, raw);
    }
    if (cfg.experiment.empty()) throw ConfigError("experiment missing");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<double> ExperimentConfig::list(const std::string& key, std::vector<double> fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::vector<double> out;
    for (const auto& s : it->second) out.push_back(parse_number(s, key));
    return out;
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    if (it->second.size() != 1) throw ConfigError(key + ": expected a single value");
    return parse_number(it->second[0], key);
}

long ExperimentConfig::integer(const std::string& key, long fallback) const {
    const double v = number(key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw ConfigError(key + ": expected an integer");
    return static_cast<long>(v);
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    if (it->second.size() != 1) throw ConfigError(key + ": expected a single value");
    return it->second[0];
}

}  // namespace subweibull::cli
