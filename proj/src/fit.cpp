#include "wpl/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace wpl {

LogLogFit loglog_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) {
        throw std::invalid_argument("loglog_fit: need at least 3 points, got " +
                                    std::to_string(points.size()));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            throw std::invalid_argument("loglog_fit: coordinates must be positive");
        }
        double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (std::fabs(denom) <= 1e-12 * (n * std::fabs(sxx) + sx * sx + 1e-300)) {
        throw std::invalid_argument("loglog_fit: degenerate abscissa (all x equal)");
    }
    LogLogFit fit;
    fit.n = points.size();
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (const auto& [x, y] : points) {
        double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace wpl
