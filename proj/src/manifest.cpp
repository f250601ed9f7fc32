#include "trxcat/manifest.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "trxcat/error.hpp"

namespace trxcat {

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fnv1a64(const std::string& text) {
    return fnv1a64(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

std::string to_hex(std::uint64_t value) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace

std::string hash_text(const std::string& text) { return to_hex(fnv1a64(text)); }

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open '" + path + "' for hashing");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<std::uint8_t>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return to_hex(hash);
}

void RunManifest::add_input(const std::string& path) {
    inputs.emplace_back(path, hash_file(path));
}

void RunManifest::add_config(const std::string& path) {
    configs.emplace_back(path, hash_file(path));
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json doc;
    doc["tool"] = "trxcat";
    doc["version"] = "0.1.0";
    doc["command"] = command;
    doc["seed"] = seed;
    auto pairs_to_json = [](const std::vector<std::pair<std::string, std::string>>& pairs) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [path, hash] : pairs) {
            arr.push_back({{"path", path}, {"fnv1a64", hash}});
        }
        return arr;
    };
    doc["inputs"] = pairs_to_json(inputs);
    doc["configs"] = pairs_to_json(configs);
    nlohmann::ordered_json outs = nlohmann::ordered_json::array();
    for (const auto& path : outputs) {
        outs.push_back({{"path", path}, {"fnv1a64", hash_file(path)}});
    }
    doc["outputs"] = outs;
    return doc;
}

void RunManifest::write_for(const std::string& primary_output) const {
    const std::string path = primary_output + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write manifest '" + path + "'");
    out << to_json().dump(2) << "\n";
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                           std::uint64_t config_seed) {
    if (flag_seed.has_value()) return *flag_seed;
    if (const char* env = std::getenv("TRXCAT_SEED")) {
        char* end = nullptr;
        const unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            throw_config("TRXCAT_SEED is not an unsigned integer: '" + std::string(env) + "'");
        }
        return parsed;
    }
    return config_seed;
}

}  // namespace trxcat
