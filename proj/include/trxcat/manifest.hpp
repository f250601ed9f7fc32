#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace trxcat {

// FNV-1a over the byte content; manifests use it to tell inputs apart,
// nothing security-grade.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::uint64_t fnv1a64(const std::string& text);
std::string hash_file(const std::string& path);  // 16 hex chars
std::string hash_text(const std::string& text);

// Every run writes `<output>.manifest.json`: the subcommand, the resolved
// seed, and a content hash per input/config/output file. No timestamps, so
// reruns are byte-identical.
struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;   // path -> hash
    std::vector<std::pair<std::string, std::string>> configs;  // path -> hash
    std::vector<std::string> outputs;

    void add_input(const std::string& path);
    void add_config(const std::string& path);
    nlohmann::ordered_json to_json() const;
    void write_for(const std::string& primary_output) const;
};

// Seed precedence: explicit flag > TRXCAT_SEED env > config value.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                           std::uint64_t config_seed);

}  // namespace trxcat
