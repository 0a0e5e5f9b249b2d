#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpl/config.hpp"
#include "wpl/report.hpp"

namespace wpl {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    int workers = 0;  // 0 = hardware concurrency
    bool check = false;
};

const std::vector<std::string>& experiment_names();

// Dispatches to the named experiment: overlap-scan, linf-scan, disjointness,
// reduceA3, dispersive-sweep, strichartz-sweep, picard-run, stability,
// energy-check. Throws std::invalid_argument on an unknown name or any
// precondition failure, naming the offending key.
ScalingReport run_experiment(const std::string& experiment, const ExperimentConfig& cfg,
                             const RunOptions& opts);

// Records every key the named experiment reads, with its default, without
// running anything heavy.
std::map<std::string, std::string> experiment_defaults(const std::string& experiment);

}  // namespace wpl
