#include "wpl/packet_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpl {

namespace {

double jbracket(double y) { return std::sqrt(1.0 + y * y); }

}  // namespace

EnvelopeRegime envelope_regime(const FrameParams& p, int j, int k) {
    const double ak = std::fabs(static_cast<double>(k));
    if (std::abs(j) <= 1) {
        if (ak <= p.lambda) return EnvelopeRegime::small_jk;
        if (ak <= 1.0 / (p.theta * p.theta)) return EnvelopeRegime::mid_k;
    }
    return EnvelopeRegime::other;
}

double envelope_eval(const FrameParams& p, int j, int k, const SpacetimePoint& pt) {
    switch (envelope_regime(p, j, k)) {
        case EnvelopeRegime::mid_k:
            return 1.0 / p.eps0;
        case EnvelopeRegime::other:
            return 1.0;
        case EnvelopeRegime::small_jk:
            break;
    }
    const double lx = p.lambda * norm(pt.x);
    const double arg = lx + 1.0 - std::fabs(k + p.lambda * pt.t);
    if (arg < 0.0) return 0.0;  // H(arg) with H(0) = 1
    return 1.0 / (p.theta * std::sqrt(jbracket(lx) * jbracket(arg)));
}

LinfScanResult linf_scan(const FrameParams& p, const BumpProfiles& prof, int j, int k, double t,
                         const BoundsGridSpec& grid) {
    if (!(grid.radial_step_factor > 0.0 && grid.radial_step_factor <= 0.25)) {
        throw std::invalid_argument(
            "linf_scan: grid too coarse; radial step must be at most 1/(4*lambda), i.e. "
            "radial_step_factor <= 0.25");
    }
    if (grid.angles_per_sector < 1) {
        throw std::invalid_argument("linf_scan: angles_per_sector must be >= 1");
    }
    const double dr = grid.radial_step_factor / p.lambda;
    const double dphi = p.angular_step() / grid.angles_per_sector;
    // support bound: |x.w| <= |t + k/lambda| + 2/lambda, |x.w_perp| <= (|j|+1) sigma + 1/lambda
    const double rx = std::fabs(t + k / p.lambda) + 2.0 / p.lambda;
    const double ry = (std::abs(j) + 1) * p.sigma + 1.0 / p.lambda;
    const double r_max = std::hypot(rx, ry) + 2.0 * dr;
    const double zero_radius = (k - 1.0) / p.lambda;  // packet vanishes strictly inside

    LinfScanResult out;
    const long nr = static_cast<long>(std::ceil(r_max / dr));
    out.profile.reserve(nr + 1);
    for (long ir = 0; ir <= nr; ++ir) {
        const double r = ir * dr;
        double sup_abs_r = 0.0;
        double sup_ratio_r = 0.0;
        SpacetimePoint argmax_r;
        for (int ia = 0; ia < grid.angles_per_sector; ++ia) {
            const double phi = ia * dphi;
            SpacetimePoint pt{t, {r * std::cos(phi), r * std::sin(phi)}};
            const double v = std::fabs(radial_packet_eval(p, prof, j, k, pt));
            ++out.cells;
            sup_abs_r = std::fmax(sup_abs_r, v);
            const double env = envelope_eval(p, j, k, pt);
            if (env == 0.0) {
                ++out.skipped_cells;
                if (v != 0.0) ++out.zero_violations;
                continue;
            }
            const double ratio = v / env;
            if (ratio > sup_ratio_r) {
                sup_ratio_r = ratio;
                argmax_r = pt;
            }
        }
        if (j == 0 && t == 0.0 && r < zero_radius && sup_abs_r != 0.0) ++out.zero_violations;
        if (sup_ratio_r > out.max_ratio) {
            out.max_ratio = sup_ratio_r;
            out.argmax = argmax_r;
        }
        out.profile.emplace_back(r, sup_abs_r);
    }
    // sup estimate error: gradient scale lambda * sup over one grid diagonal
    double sup_val = 0.0;
    for (auto& [r, v] : out.profile) sup_val = std::fmax(sup_val, v);
    out.lipschitz_error = 2.0 * p.lambda * sup_val * std::hypot(dr, r_max * dphi);
    return out;
}

namespace {

struct Interval {
    double lo = 1.0, hi = 0.0;  // empty when lo > hi
    bool empty() const { return lo > hi; }
};

Interval intersect(Interval a, Interval b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Allowed rho = t + k/lambda for which the two rotated tube rectangles overlap
// along every separating axis; empty means disjoint for all times and shifts.
Interval rho_interval(const FrameParams& p, int M, double j) {
    const double phi = M * p.theta;
    const Vec2 w0{1.0, 0.0}, wp0{0.0, 1.0};
    const Vec2 wm{std::cos(phi), std::sin(phi)};
    const Vec2 wpm = perp(wm);
    const double hl = 1.0 / p.lambda;  // half-length along the direction
    const double hs = p.sigma;         // half-width transverse

    const Vec2 axes[4] = {w0, wp0, wm, wpm};
    const double inf = std::numeric_limits<double>::infinity();
    Interval allowed{-inf, inf};
    for (const Vec2& a : axes) {
        const double A = dot(w0 - wm, a);
        const double B = j * p.sigma * dot(wp0 - wpm, a);
        const double E = hl * (std::fabs(dot(w0, a)) + std::fabs(dot(wm, a))) +
                         hs * (std::fabs(dot(wp0, a)) + std::fabs(dot(wpm, a)));
        if (A == 0.0) {
            if (std::fabs(B) > E) return Interval{};  // separated for every rho
            continue;
        }
        Interval cond{(-E - B) / A, (E - B) / A};
        if (cond.lo > cond.hi) std::swap(cond.lo, cond.hi);
        allowed = intersect(allowed, cond);
        if (allowed.empty()) return Interval{};
    }
    return allowed;
}

}  // namespace

bool tubes_intersect(const FrameParams& p, int M, int j, long k) {
    Interval iv = rho_interval(p, M, j);
    if (iv.empty()) return false;
    const double lo = k / p.lambda - 2.0;
    const double hi = k / p.lambda + 2.0;
    return !(hi < iv.lo || lo > iv.hi);
}

DisjointnessResult disjointness_check(const FrameParams& p, int M) {
    if (!(M >= 1) || !(M * p.theta <= 0.25)) {
        throw std::invalid_argument(
            "disjointness_check: requires M >= 1 and M*theta <= 1/4 (small rotation regime)");
    }
    DisjointnessResult out;
    const int j_cap = std::max(64, 4 * p.j_window);
    int last_hit = -1;
    double sup_rho = -std::numeric_limits<double>::infinity();
    for (int j = -j_cap; j <= j_cap; ++j) {
        Interval iv = rho_interval(p, M, j);
        if (iv.empty()) continue;
        last_hit = std::max(last_hit, std::abs(j));
        sup_rho = std::fmax(sup_rho, iv.hi);
    }
    out.j_star = last_hit + 1;
    // first k with [k/lambda - 2, k/lambda + 2] beyond every allowed rho
    out.k_star = static_cast<long>(std::floor(p.lambda * (sup_rho + 2.0))) + 1;
    if (out.k_star < 0) out.k_star = 0;
    return out;
}

bool find_common_point_by_sampling(const FrameParams& p, int M, int j, long k, int samples) {
    const double phi = M * p.theta;
    const Vec2 w{1.0, 0.0};
    const Vec2 wm{std::cos(phi), std::sin(phi)};
    const double hl = 1.0 / p.lambda;
    for (int it = 0; it <= samples; ++it) {
        const double t = -2.0 + 4.0 * it / samples;
        const double xw = t + k / p.lambda;
        for (int ia = -samples; ia <= samples; ++ia) {
            const double da = hl * ia / samples;
            for (int ib = -samples; ib <= samples; ++ib) {
                const double xb = j * p.sigma + p.sigma * ib / samples;
                Vec2 x = (xw + da) * w + xb * perp(w);
                const double ym = dot(x, wm) - t - k / p.lambda;
                const double ypm = dot(x, perp(wm)) - j * p.sigma;
                if (std::fabs(ym) <= hl && std::fabs(ypm) <= p.sigma) return true;
            }
        }
    }
    return false;
}

}  // namespace wpl
