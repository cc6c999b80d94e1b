#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subweibull/cli/config.hpp"
#include "subweibull/cli/csv.hpp"
#include "subweibull/cli/manifest.hpp"

namespace subweibull::cli {

inline constexpr const char* kArtifactVersion = "0.3.0";

struct InvariantTally {
    std::string name;
    long checked = 0;
    long violated = 0;
    std::string first_violation;
};

struct ExperimentResult {
    std::string experiment;
    CsvTable results;
    CsvTable summary;
    std::string metric;                  // summary column that plots show
    std::vector<std::string> scanned;    // summary columns with more than one grid value
    std::vector<std::string> rate_axes;  // scanned columns plotted log-log
    std::vector<InvariantTally> invariants;

    const InvariantTally* first_violation() const;
    const InvariantTally* invariant(const std::string& name) const;
};

// Runs the grid in memory. Invariant violations are tallied, not thrown.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned workers);

struct RunOptions {
    std::optional<std::string> out_dir;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> seed;
};

// Writes results.csv, summary.csv, plot_<axis>.svg and manifest.json.
// Throws InvariantViolation (after writing the tables) if any invariant failed.
RunManifest run(ExperimentConfig cfg, const RunOptions& options);

}  // namespace subweibull::cli
