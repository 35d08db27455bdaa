#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace photonlab {

/// Sectioned key-value configuration (`[section]` headers, `key = value`
/// lines, `#` comments). Values read once at startup; flag overrides go
/// through set(). hash() digests the effective section/key/value state so a
/// changed override changes every emitted file header.
class Config {
public:
    Config() = default;

    static Config from_file(const std::filesystem::path& path);
    static Config from_string(const std::string& text,
                              const std::filesystem::path& base_dir = ".");

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    /// Paths in config files are resolved relative to the file's directory.
    std::filesystem::path resolve_path(const std::string& value) const;

    /// FNV-1a over the sorted effective entries.
    std::uint64_t hash() const;
    std::string hash_hex() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::filesystem::path base_dir_ = ".";
};

}  // namespace photonlab
