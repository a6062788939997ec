#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace twoscale {

/*!
 * Flat key-value configuration with dotted keys:
 *
 *     # comment
 *     model.tag = ou
 *     sweep.strides = 1,2,4,8
 *
 * Keys are unique; values are raw strings converted on access.
 */
class KeyValueConfig {
  public:
    static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>");
    static KeyValueConfig load(const std::string& path);

    bool contains(const std::string& key) const { return values_.contains(key); }
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    std::vector<std::string> keys() const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<std::size_t> get_sizes(const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& key) const;

    /// Throws ConfigError naming the first key not in known.
    void reject_unknown(const std::set<std::string>& known) const;

  private:
    const std::string& raw(const std::string& key) const;

    std::string source_;
    std::map<std::string, std::string> values_;
};

/// Comma-separated list parsing shared with the CLI.
std::vector<std::string> split_list(std::string_view text);
double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

}  // namespace twoscale
