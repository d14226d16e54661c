#include "support/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace zrfcli {

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                   nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& out_path) {
    std::filesystem::path p = out_path;
    p.replace_extension();
    p += ".manifest.json";
    return p;
}

std::string render_manifest(const Manifest& manifest) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["artifact_version"] = "0.1.0";
    j["command_line"] = manifest.command_line;
    j["subcommand"] = manifest.subcommand;
    j["parameters"] = manifest.parameters;
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const OutputRecord& rec : manifest.outputs) {
        nlohmann::ordered_json o;
        o["path"] = rec.path.string();
        o["bytes"] = rec.bytes;
        o["sha256"] = rec.sha256;
        outs.push_back(std::move(o));
    }
    j["outputs"] = std::move(outs);
    j["wall_time_seconds"] = manifest.wall_time_seconds;
    return j.dump(2) + "\n";
}

void write_output_file(Manifest& manifest, const std::filesystem::path& path,
                       std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
    manifest.outputs.push_back({path, bytes.size(), sha256_hex(bytes)});
}

void write_manifest_file(const Manifest& manifest,
                         const std::filesystem::path& path) {
    const std::string bytes = render_manifest(manifest);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string join_command_line(int argc, const char* const* argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) out += ' ';
        const std::string arg = argv[i];
        if (arg.find(' ') != std::string::npos) {
            out += '"';
            out += arg;
            out += '"';
        } else {
            out += arg;
        }
    }
    return out;
}

}  // namespace zrfcli
