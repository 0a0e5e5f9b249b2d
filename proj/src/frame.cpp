#include "wpl/frame.hpp"

#include <sstream>
#include <stdexcept>

namespace wpl {

FrameParams make_frame(double lambda, double eps0, double c_small) {
    if (!(lambda >= 64.0)) {
        throw std::invalid_argument("make_frame: lambda must be >= 64, got " +
                                    std::to_string(lambda));
    }
    if (!(eps0 > 0.0 && eps0 <= 0.25)) {
        throw std::invalid_argument("make_frame: eps0 must lie in (0, 1/4], got " +
                                    std::to_string(eps0));
    }
    if (!(eps0 * lambda >= 16.0)) {
        throw std::invalid_argument("make_frame: eps0*lambda must be >= 16, got " +
                                    std::to_string(eps0 * lambda));
    }
    FrameParams p;
    p.lambda = lambda;
    p.eps0 = eps0;
    p.theta = std::sqrt(eps0 / lambda);
    p.dir_count = static_cast<int>(std::ceil(2.0 * M_PI / p.theta));
    p.c_small = c_small;
    p.sigma = 1.0 / std::sqrt(eps0 * lambda);
    p.j_window = static_cast<int>(std::floor(4.0 * std::sqrt(eps0 * lambda)));
    p.k_window = static_cast<int>(std::floor(4.0 * lambda));
    return p;
}

std::string frame_to_config(const FrameParams& p) {
    std::ostringstream os;
    os << "lambda = " << p.lambda << "\n";
    os << "eps0 = " << p.eps0 << "\n";
    os << "c_small = " << p.c_small << "\n";
    return os.str();
}

bool tube_contains(const FrameParams& p, const PacketIndex& idx, const SpacetimePoint& pt) {
    if (std::fabs(pt.t) > 2.0) return false;
    const Vec2 w = p.direction(idx.l);
    const double xw = dot(pt.x, w);
    const double xp = dot(pt.x, perp(w));
    const double inv_lambda = 1.0 / p.lambda;
    if (std::fabs(xw - pt.t - idx.k * inv_lambda) > inv_lambda) return false;
    if (std::fabs(xp - idx.j * p.sigma) > p.sigma) return false;
    return true;
}

bool enlarged_tube_contains(const FrameParams& p, const PacketIndex& idx,
                            const SpacetimePoint& pt) {
    if (std::fabs(pt.t) > 2.0) return false;
    const Vec2 w = p.direction(idx.l);
    const double xw = dot(pt.x, w);
    const double xp = dot(pt.x, perp(w));
    const double inv_lambda = 1.0 / p.lambda;
    if (std::fabs(xw - pt.t - idx.k * inv_lambda) > 2.0 * inv_lambda) return false;
    if (std::fabs(xp - idx.j * p.sigma) > p.sigma + inv_lambda) return false;
    return true;
}

namespace {

// 2*pi * int_0^1 psi_r2(r^2) r dr = pi * int_0^1 exp(-1/(1-u)) du, midpoint rule;
// the integrand is smooth and flat at both ends.
double psi_unit_const() {
    const int n = 1 << 16;
    const double h = 1.0 / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = (i + 0.5) * h;
        s += std::exp(-1.0 / (1.0 - u));
    }
    return 1.0 / (M_PI * s * h);
}

// The integration variable runs over the narrow mollifier support (width
// 1/lambda), sampling the wide transverse profile where it is smooth; a fixed
// grid over the wide support would skip the mollifier bump entirely once
// sigma/steps exceeds the bump width.
double unnormalized_core(const FrameParams& p, const BumpProfiles& prof, double a, double beta) {
    const double inv_lambda = 1.0 / p.lambda;
    if (std::fabs(a) > inv_lambda) return 0.0;
    if (std::fabs(beta) > p.sigma + inv_lambda) return 0.0;
    const int n = 2 * prof.steps_per_width;
    const double h = inv_lambda / prof.steps_per_width;
    const double l2 = p.lambda * p.lambda;
    const double a2 = a * a * l2;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double y = -inv_lambda + i * h;
        const double r2 = a2 + y * y * l2;
        if (r2 >= 1.0) continue;
        double term = BumpProfiles::psi_r2(r2) * BumpProfiles::w0((beta - y) / p.sigma);
        if (i == 0 || i == n) term *= 0.5;
        sum += term;
    }
    // psi_lambda = lambda^2 * psi_const * psi(lambda x)
    return sum * h * l2 * prof.psi_const;
}

}  // namespace

BumpProfiles make_profiles(const FrameParams& p) {
    static const double c_psi = psi_unit_const();
    BumpProfiles prof;
    prof.psi_const = c_psi;
    prof.norm_const = 1.0;
    // Sup over the tube center line; the maximizer is the tube center, the
    // dense scan guards against quadrature asymmetries.
    double mx = 0.0;
    const int grid = 512;
    for (int i = 0; i <= grid; ++i) {
        double a = (static_cast<double>(i) / (grid / 2) - 1.0) / p.lambda;
        mx = std::fmax(mx, unnormalized_core(p, prof, a, 0.0));
    }
    if (!(mx > 0.0)) throw std::runtime_error("make_profiles: degenerate packet profile");
    prof.norm_const = 1.0 / mx;
    return prof;
}

double packet_core(const FrameParams& p, const BumpProfiles& prof, double a, double beta) {
    return prof.norm_const * unnormalized_core(p, prof, a, beta);
}

double packet_eval(const FrameParams& p, const BumpProfiles& prof, const PacketIndex& idx,
                   const SpacetimePoint& pt) {
    if (std::fabs(pt.t) > 2.0) return 0.0;
    const Vec2 w = p.direction(idx.l);
    const double a = dot(pt.x, w) - pt.t - idx.k / p.lambda;
    const double beta = dot(pt.x, perp(w)) - idx.j * p.sigma;
    return packet_core(p, prof, a, beta);
}

double radial_packet_eval(const FrameParams& p, const BumpProfiles& prof, int j, int k,
                          const SpacetimePoint& pt, bool prune) {
    if (std::fabs(pt.t) > 2.0) return 0.0;
    const double inv_lambda = 1.0 / p.lambda;
    const double kc = pt.t + k * inv_lambda;
    const double jc = j * p.sigma;
    double sum = 0.0;
    for (int l = 0; l < p.dir_count; ++l) {
        const Vec2 w = p.direction(l);
        const double a = dot(pt.x, w) - kc;
        if (prune && std::fabs(a) > 2.0 * inv_lambda) continue;
        const double beta = dot(pt.x, perp(w)) - jc;
        if (prune && std::fabs(beta) > p.sigma + inv_lambda) continue;
        sum += packet_core(p, prof, a, beta);
    }
    return sum;
}

}  // namespace wpl
