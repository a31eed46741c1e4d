#include "g3ad/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "g3ad/errors.hpp"

namespace g3ad {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot digest missing file " + path);
    std::uint64_t hash = 1469598103934665603ull;  // FNV offset basis
    char buf[16384];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;  // FNV prime
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config"] = nlohmann::json::parse(manifest.config_json);
    j["seeds"] = manifest.seeds;
    j["inputs"] = manifest.input_digests;
    j["outputs"] = manifest.outputs;
    j["tool_version"] = kToolVersion;

    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["timestamp"] = stamp;

    std::ofstream out(path);
    if (!out) throw FormatError("cannot write manifest " + path);
    out << j.dump(2) << '\n';
}

}  // namespace g3ad
