#pragma once

#include <utility>
#include <vector>

#include "wpl/frame.hpp"

namespace wpl {

enum class EnvelopeRegime { small_jk, mid_k, other };

// small_jk: |j| <= 1 and |k| <= lambda; mid_k: |j| <= 1 and lambda < |k| <= theta^{-2}.
EnvelopeRegime envelope_regime(const FrameParams& p, int j, int k);

// Pointwise bound for the radial packet:
//   small_jk: theta^{-1} <lam |x|>^{-1/2} <lam |x| + 1 - |k + lam t|>^{-1/2} H(...)
//   mid_k:    eps0^{-1}
//   other:    1
// with <y> = sqrt(1+y^2) and H the Heaviside step, H(0) = 1.
double envelope_eval(const FrameParams& p, int j, int k, const SpacetimePoint& pt);

struct BoundsGridSpec {
    double radial_step_factor = 0.25;  // radial step = factor / lambda, must be <= 1/4
    int angles_per_sector = 4;         // angular step = 2 pi / (angles * dir_count)
};

struct LinfScanResult {
    double max_ratio = 0.0;          // max |chi| / envelope over the grid
    SpacetimePoint argmax;
    long cells = 0;                  // grid cells evaluated
    long skipped_cells = 0;          // cells in the vanishing (Heaviside) region
    long zero_violations = 0;        // nonzero packet inside the vanishing region
    double lipschitz_error = 0.0;    // grid-resolution bound on the sup estimate
    std::vector<std::pair<double, double>> profile;  // (r, sup over angles of |chi|)
};

// Scans radial_packet_eval over a polar grid against envelope_eval. Also
// verifies |chi_{0,k}(0,x)| = 0 whenever |x| < (k-1)/lambda.
LinfScanResult linf_scan(const FrameParams& p, const BumpProfiles& prof, int j, int k, double t,
                         const BoundsGridSpec& grid = {});

struct DisjointnessResult {
    int j_star = 0;   // tubes with |j| >= j_star are disjoint from their M-theta rotation
    long k_star = 0;  // tubes with k >= k_star likewise, for every j
};

// Exact rotated-rectangle geometry: separating-axis intervals in the shared
// shift variable rho = t + k/lambda, intersected with the |t| <= 2 range.
DisjointnessResult disjointness_check(const FrameParams& p, int M);

// True when T_{j,k,0} and T_{j,k,M theta} share a point (exact test).
bool tubes_intersect(const FrameParams& p, int M, int j, long k);

// Samples the boundary and interior of T_{j,k,0} on an (na x nk x nt) grid and
// reports whether any sampled point also lies in T_{j,k,M theta}.
bool find_common_point_by_sampling(const FrameParams& p, int M, int j, long k, int samples);

}  // namespace wpl
