#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subweibull/constants.hpp"

namespace subweibull::cli {

const std::vector<std::string>& registered_experiments();

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    BoundConstants constants;
    // Every key as written (constants included), values split on commas.
    std::map<std::string, std::vector<std::string>> values;
    // (key, raw value) in file order, for the manifest echo.
    std::vector<std::pair<std::string, std::string>> echo;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::vector<double> list(const std::string& key, std::vector<double> fallback) const;
    double number(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
};

// Throws ConfigError with the offending line number and key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace subweibull::cli
