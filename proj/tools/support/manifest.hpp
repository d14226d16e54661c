// Run manifests: enough to re-run an experiment bit-identically and to
// check the emitted files against their recorded digests.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace zrfcli {

std::string sha256_hex(std::string_view bytes);

struct OutputRecord {
    std::filesystem::path path;
    std::uint64_t bytes = 0;
    std::string sha256;
};

struct Manifest {
    std::string command_line;
    std::string subcommand;
    nlohmann::ordered_json parameters;  // flag name -> value, insertion order
    std::vector<OutputRecord> outputs;
    double wall_time_seconds = 0.0;
};

// gap.csv -> gap.manifest.json (same directory).
std::filesystem::path manifest_path_for(const std::filesystem::path& out_path);

std::string render_manifest(const Manifest& manifest);

// Writes `bytes` to `path`, records it in `manifest.outputs`.
void write_output_file(Manifest& manifest, const std::filesystem::path& path,
                       std::string_view bytes);

void write_manifest_file(const Manifest& manifest,
                         const std::filesystem::path& path);

std::string join_command_line(int argc, const char* const* argv);

}  // namespace zrfcli
