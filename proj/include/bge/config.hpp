#pragma once

#include <map>
#include <string>
#include <vector>

#include "bge/core.hpp"

namespace bge {

// Flat key = value configuration, one assignment per line, '#' comments.
// Values: numbers, bare or quoted strings, booleans, and [a, b, c] lists.
class FlatConfig {
public:
    static FlatConfig parse_text(const std::string& text, const std::string& origin = "<config>");
    static FlatConfig parse_file(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;

    // keys that were never read; lets the CLI flag typos
    std::vector<std::string> unused_keys() const;

private:
    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, bool> used_;
    std::string origin_;
};

}  // namespace bge
