#include "arratia/config.hpp"

#include "arratia/drift.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arratia {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + text + "'");
    return value;
}

constexpr std::array<std::string_view, 6> kPresentationKeys{"threads", "out", "plot", "timing", "dump-field",
                                                              "samples-out"};

} // namespace

bool is_presentation_key(std::string_view key)
{
    for (auto k : kPresentationKeys)
        if (k == key)
            return true;
    return false;
}

RunConfig RunConfig::parse(std::string_view text, std::string_view origin)
{
    RunConfig cfg;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) +
                                        ": expected key=value");
        const auto key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
        cfg.entries_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string RunConfig::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw std::invalid_argument("config: missing '" + key + "'");
    return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double RunConfig::get_real(const std::string& key, double fallback) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_number<double>(key, it->second);
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_number<std::int64_t>(key, it->second);
}

std::uint64_t RunConfig::get_uint(const std::string& key, std::uint64_t fallback) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_number<std::uint64_t>(key, it->second);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end())
        return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw std::invalid_argument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    if (key.empty() || key.find_first_of("=#\n") != std::string::npos)
        throw std::invalid_argument("config: invalid key '" + key + "'");
    if (value.find_first_of("#\n") != std::string::npos)
        throw std::invalid_argument("config: value of '" + key + "' may not contain '#' or newlines");
    entries_[key] = std::string(trim(value));
}

void RunConfig::set(const std::string& key, double value) { set(key, format_real(value)); }

void RunConfig::erase(const std::string& key) { entries_.erase(key); }

void RunConfig::merge(const RunConfig& overrides)
{
    for (const auto& [k, v] : overrides.entries_)
        entries_[k] = v;
}

std::string RunConfig::serialize() const
{
    std::string out;
    for (const auto& [k, v] : entries_)
        out += k + "=" + v + "\n";
    return out;
}

std::string RunConfig::digest() const
{
    std::string canonical;
    for (const auto& [k, v] : entries_)
        if (!is_presentation_key(k))
            canonical += k + "=" + v + "\n";
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::optional<std::uint64_t> seed_from_env()
{
    const char* s = std::getenv("ARRATIA_SEED");
    if (s == nullptr || *s == '\0')
        return std::nullopt;
    return parse_number<std::uint64_t>("ARRATIA_SEED", s);
}

} // namespace arratia
