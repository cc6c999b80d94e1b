#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subweibull/cli/config.hpp"

namespace subweibull::cli {

struct ManifestFile {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct InvariantRecord {
    std::string name;
    long checked = 0;
    long violated = 0;
};

struct RunManifest {
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::string experiment;
    std::string version;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string started_at;
    std::string finished_at;
    std::map<std::string, double> constants;
    std::vector<InvariantRecord> invariants;
    std::vector<ManifestFile> files;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);
std::string utc_timestamp();
std::string manifest_json(const RunManifest& m);
// Digests every file in names (relative to dir), then writes dir/manifest.json.
RunManifest write_manifest(RunManifest m, const std::string& dir, const std::vector<std::string>& names);

}  // namespace subweibull::cli
