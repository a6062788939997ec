#include "twoscale/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "twoscale/error.hpp"

namespace twoscale {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (item.empty()) throw ConfigError("empty item in list '" + std::string(text) + "'");
        out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view text) {
    const std::string s(trim(text));
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ConfigError("expected a number, got '" + s + "'");
    }
    return v;
}

std::uint64_t parse_uint(std::string_view text) {
    const auto s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& source) {
    KeyValueConfig cfg;
    cfg.source_ = source;
    std::istringstream in{std::string(text)};
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        const auto body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!cfg.values_.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open config file", path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::vector<std::string> KeyValueConfig::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

const std::string& KeyValueConfig::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(source_ + ": missing key '" + key + "'");
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const { return raw(key); }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return contains(key) ? raw(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
    try {
        return parse_double(raw(key));
    } catch (const ConfigError& e) {
        throw ConfigError(source_ + ": " + key + ": " + e.what());
    }
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return contains(key) ? get_double(key) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key) const {
    try {
        return parse_uint(raw(key));
    } catch (const ConfigError& e) {
        throw ConfigError(source_ + ": " + key + ": " + e.what());
    }
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
    return contains(key) ? get_uint(key) : fallback;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : get_strings(key)) out.push_back(parse_double(item));
    return out;
}

std::vector<std::size_t> KeyValueConfig::get_sizes(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& item : get_strings(key)) out.push_back(static_cast<std::size_t>(parse_uint(item)));
    return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key) const {
    try {
        return split_list(raw(key));
    } catch (const ConfigError& e) {
        throw ConfigError(source_ + ": " + key + ": " + e.what());
    }
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const {
    for (const auto& [k, v] : values_) {
        if (!known.contains(k)) throw ConfigError(source_ + ": unknown key '" + k + "'");
    }
}

}  // namespace twoscale
