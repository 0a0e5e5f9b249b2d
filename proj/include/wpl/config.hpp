#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wpl {

// Flat key = value configuration, one pair per line, '#' comments, lists as
// comma-separated values. Typed getters record the effective value (explicit
// or default) so a run can echo its full configuration.
class ExperimentConfig {
public:
    ExperimentConfig() = default;
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& def) const;

    // key -> value actually used, accumulated across getter calls
    const std::map<std::string, std::string>& effective() const { return effective_; }

private:
    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, std::string> effective_;
};

}  // namespace wpl
