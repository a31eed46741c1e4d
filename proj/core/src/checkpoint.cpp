#include "g3ad/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "g3ad/errors.hpp"

namespace g3ad {

namespace {

constexpr char kMagic[8] = {'G', '3', 'A', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw FormatError("checkpoint truncated");
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    const std::uint32_t len = read_u32(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw FormatError("checkpoint truncated");
    return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params, const G3adConfig& cfg, int n, int d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write checkpoint " + path);
    out.write(kMagic, sizeof(kMagic));
    write_u32(out, kVersion);
    write_string(out, config_to_json_string(cfg));
    write_u32(out, static_cast<std::uint32_t>(n));
    write_u32(out, static_cast<std::uint32_t>(d));
    const auto named = params.named();
    write_u32(out, static_cast<std::uint32_t>(named.size()));
    for (const auto& [name, tensor] : named) {
        write_string(out, name);
        write_u32(out, static_cast<std::uint32_t>(tensor->rows()));
        write_u32(out, static_cast<std::uint32_t>(tensor->cols()));
        out.write(reinterpret_cast<const char*>(tensor->value.data()),
                  static_cast<std::streamsize>(tensor->value.size() * sizeof(double)));
    }
    if (!out) throw FormatError("write failed for checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open checkpoint " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw FormatError(path + " is not a checkpoint file");
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw FormatError("unsupported checkpoint version " + std::to_string(version));

    Checkpoint ckpt;
    ckpt.config = config_from_json_string(read_string(in));
    ckpt.n = static_cast<int>(read_u32(in));
    ckpt.d = static_cast<int>(read_u32(in));
    // Allocate the same parameter tree, then overwrite values from the file.
    ckpt.params = init_params(ckpt.n, ckpt.d, ckpt.config, /*seed=*/0);
    auto named = ckpt.params.named();
    const std::uint32_t count = read_u32(in);
    if (count != named.size())
        throw FormatError("checkpoint parameter count " + std::to_string(count) + " does not match the config's " +
                          std::to_string(named.size()));
    for (auto& [name, tensor] : named) {
        const std::string stored_name = read_string(in);
        if (stored_name != name)
            throw FormatError("checkpoint parameter '" + stored_name + "' where '" + name + "' was expected");
        const int rows = static_cast<int>(read_u32(in));
        const int cols = static_cast<int>(read_u32(in));
        if (rows != tensor->rows() || cols != tensor->cols())
            throw FormatError("checkpoint parameter '" + name + "' has shape " + std::to_string(rows) + "x" +
                              std::to_string(cols) + ", expected " + tensor->value.shape_str());
        in.read(reinterpret_cast<char*>(tensor->value.data()),
                static_cast<std::streamsize>(tensor->value.size() * sizeof(double)));
        if (!in) throw FormatError("checkpoint truncated in parameter '" + name + "'");
    }
    return ckpt;
}

}  // namespace g3ad
