#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace g3ad {

inline constexpr const char* kToolVersion = "g3ad 0.1.0";

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

/// Provenance record written next to every command's outputs: what ran,
/// with which configuration and inputs, and what it produced.
struct RunManifest {
    std::string command;
    std::string config_json;  // full flag/config snapshot, JSON text
    std::vector<std::uint64_t> seeds;
    std::map<std::string, std::string> input_digests;  // path -> digest
    std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace g3ad
