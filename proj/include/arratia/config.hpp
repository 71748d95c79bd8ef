#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace arratia {

/// Flat key=value configuration. Text form: one pair per line, '#' starts a
/// comment, blank lines ignored, surrounding whitespace trimmed.
class RunConfig {
public:
    static RunConfig parse(std::string_view text, std::string_view origin = "<string>");
    static RunConfig load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const; ///< throws if missing
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_real(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void erase(const std::string& key);
    /// Entries of `overrides` replace ours.
    void merge(const RunConfig& overrides);

    /// Sorted key=value lines; parse(serialize()) == *this.
    std::string serialize() const;
    /// FNV-1a 64 of the serialization without the keys that cannot change
    /// results (threads, output paths, timing), as 16 hex digits.
    std::string digest() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    bool operator==(const RunConfig&) const = default;

private:
    std::map<std::string, std::string> entries_;
};

std::uint64_t fnv1a64(std::string_view bytes);

/// Keys ignored by RunConfig::digest.
bool is_presentation_key(std::string_view key);

/// ARRATIA_SEED, when set to an unsigned integer.
std::optional<std::uint64_t> seed_from_env();

} // namespace arratia
