#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "heleshaw/errors.hpp"

namespace heleshaw {

/// Flat `key = value` text with `#` comments and dotted section keys.
/// Values keep their raw text; typed getters parse on demand.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_real(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_reals(const std::string& key,
                                  const std::vector<double>& fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma separated

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
    std::string origin_;

    [[noreturn]] void fail(const std::string& key, const std::string& why) const;
};

}  // namespace heleshaw
