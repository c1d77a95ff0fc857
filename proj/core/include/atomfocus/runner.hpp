#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "atomfocus/config.hpp"

namespace atomfocus::io {

inline constexpr const char* code_version = "1.0.0";

struct OutputRecord {
    std::string path;  // relative to the run's output directory
    std::uint64_t bytes = 0;
    std::string checksum;  // "fnv1a64:" + 16 hex digits over the file bytes
};

struct RunManifest {
    std::string mode;
    std::string config_text;  // resolved config, serialize_config form
    std::string version;
    double wall_seconds = 0;
    std::vector<OutputRecord> outputs;
    std::vector<std::string> warnings;

    std::string to_json() const;  // pretty-printed
};

std::uint64_t fnv1a64_file(const std::string& path);

// Verifies every manifest output against the directory it was written to.
// Returns the mismatches (empty = all good).
std::vector<std::string> verify_manifest(const RunManifest& m, const std::string& dir);

// Executes cfg.mode, writes the run's CSV/JSON outputs plus manifest.json
// into cfg.output_dir, and returns the manifest. verbosity >= 1 prints
// progress to stderr. Module errors propagate as exceptions after being
// wrapped with the run mode for context.
RunManifest run(const ExperimentConfig& cfg, int verbosity = 0);

} // namespace atomfocus::io
