#include "wpl/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wpl {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
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
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value': " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        }
        cfg.kv_[key] = value;
    }
    return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ExperimentConfig::get_string(const std::string& key, const std::string& def) const {
    auto it = kv_.find(key);
    const std::string v = it == kv_.end() ? def : it->second;
    effective_[key] = v;
    return v;
}

double ExperimentConfig::get_double(const std::string& key, double def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
        effective_[key] = std::to_string(def);
        return def;
    }
    try {
        double v = std::stod(it->second);
        effective_[key] = it->second;
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not a number: " + it->second);
    }
}

int ExperimentConfig::get_int(const std::string& key, int def) const {
    return static_cast<int>(get_double(key, def));
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key, std::uint64_t def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
        effective_[key] = std::to_string(def);
        return def;
    }
    try {
        std::uint64_t v = std::stoull(it->second);
        effective_[key] = it->second;
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not an integer: " + it->second);
    }
}

bool ExperimentConfig::get_bool(const std::string& key, bool def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
        effective_[key] = def ? "true" : "false";
        return def;
    }
    const std::string& v = it->second;
    effective_[key] = v;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' is not a boolean: " + v);
}

std::vector<double> ExperimentConfig::get_double_list(const std::string& key,
                                                      const std::vector<double>& def) const {
    auto it = kv_.find(key);
    std::vector<double> out;
    if (it == kv_.end()) {
        out = def;
    } else {
        std::istringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw std::invalid_argument("config: key '" + key +
                                            "' has a non-numeric list entry: " + item);
            }
        }
    }
    std::string echo;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i) echo += ", ";
        std::ostringstream os;
        os << out[i];
        echo += os.str();
    }
    effective_[key] = echo;
    return out;
}

}  // namespace wpl
