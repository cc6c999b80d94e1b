#include "subweibull/cli/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include "json.hpp"
#include <sstream>

#include "subweibull/cli/csv.hpp"
#include "subweibull/errors.hpp"

namespace subweibull::cli {

std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) out += hex[md[i] >> 4], out += hex[md[i] & 15];
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["artifact_version"] = m.version;
    j["experiment"] = m.experiment;
    j["seed"] = m.seed;
    j["workers"] = m.workers;
    j["started_at"] = m.started_at;
    j["finished_at"] = m.finished_at;
    auto& cfg = j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.config_echo) cfg[k] = v;
    auto& c = j["constants"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.constants) c[k] = v;
    auto& inv = j["invariants"] = nlohmann::ordered_json::array();
    for (const auto& r : m.invariants) inv.push_back({{"name", r.name}, {"checked", r.checked}, {"violated", r.violated}});
    auto& files = j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : m.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return j.dump(2) + "\n";
}

RunManifest write_manifest(RunManifest m, const std::string& dir, const std::vector<std::string>& names) {
    namespace fs = std::filesystem;
    m.files.clear();
    for (const auto& name : names) {
        const fs::path p = fs::path(dir) / name;
        std::error_code ec;
        const auto size = fs::file_size(p, ec);
        if (ec) throw IoError("cannot stat " + p.string());
        m.files.push_back({name, sha256_file(p.string()), size});
    }
    write_text_file((fs::path(dir) / "manifest.json").string(), manifest_json(m));
    return m;
}

}  // namespace subweibull::cli
