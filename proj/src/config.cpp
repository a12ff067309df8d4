#include "bge/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace bge {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

FlatConfig FlatConfig::parse_text(const std::string& text, const std::string& origin) {
    FlatConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("bad-config",
                        origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error("bad-config",
                        origin + ":" + std::to_string(lineno) + ": empty key or value");
        if (cfg.kv_.count(key))
            throw Error("bad-config", origin + ":" + std::to_string(lineno) +
                                          ": duplicate key '" + key + "'");
        cfg.kv_[key] = value;
    }
    return cfg;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("io-error", "cannot open config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_text(buf.str(), path);
}

std::string FlatConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_[key] = true;
    return unquote(it->second);
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_[key] = true;
    try {
        size_t pos;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw Error("bad-config", origin_ + ": key '" + key + "' is not a number: " + it->second);
    }
}

int FlatConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw Error("bad-config", origin_ + ": key '" + key + "' must be an integer");
    return i;
}

uint64_t FlatConfig::get_u64(const std::string& key, uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_[key] = true;
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw Error("bad-config", origin_ + ": key '" + key + "' is not an unsigned integer");
    }
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_[key] = true;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("bad-config", origin_ + ": key '" + key + "' is not a boolean: " + it->second);
}

std::vector<int> FlatConfig::get_int_list(const std::string& key,
                                          std::vector<int> fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_[key] = true;
    std::string v = trim(it->second);
    if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
    std::vector<int> out;
    std::istringstream ls(v);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        try {
            out.push_back(std::stoi(cell));
        } catch (const std::exception&) {
            throw Error("bad-config",
                        origin_ + ": key '" + key + "' has a non-integer entry: " + cell);
        }
    }
    if (out.empty())
        throw Error("bad-config", origin_ + ": key '" + key + "' must hold at least one integer");
    return out;
}

std::vector<std::string> FlatConfig::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (!used_.count(k)) out.push_back(k);
    return out;
}

}  // namespace bge
