#pragma once

#include <utility>
#include <vector>

namespace wpl {

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;  // intercept of ln y vs ln x
    double residual = 0.0;   // rms residual in ln y
    std::size_t n = 0;
};

// Least squares on (ln x, ln y). Requires >= 3 points with positive coordinates.
LogLogFit loglog_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace wpl
