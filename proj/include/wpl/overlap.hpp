#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wpl/fit.hpp"
#include "wpl/frame.hpp"

namespace wpl {

enum class ClassTag { A1, A2, A3 };

const char* to_string(ClassTag tag);

// Executable replacements for the asymptotic class boundaries. The band
// q in [q_lo, q_hi) is split by |j|: large |j| joins A2, the rest joins A1,
// which carries the weaker claimed bound.
struct ClassThresholds {
    double q_hi = 4.0;
    double q_lo = 1.0 / 16.0;
    int j_thr = 8;
};

inline double index_q(const FrameParams& p, int j, int k) {
    return static_cast<double>(j) * j / (p.eps0 * p.lambda) +
           static_cast<double>(k) * k / (p.lambda * p.lambda);
}

// Total classification: every (j,k) gets exactly one tag.
ClassTag classify_index(const FrameParams& p, const ClassThresholds& th, int j, int k);

struct OverlapQuery {
    SpacetimePoint p1;
    SpacetimePoint p2;
    double dt() const { return p2.t - p1.t; }
    double separation() const { return norm(p2.x - p1.x); }
    double m() const { return separation() - dt(); }
};

// |{(j,k,l) : both points lie in the enlarged tube T_{j,k,l}}|, by exact
// interval intersection per direction.
long n_lambda(const FrameParams& p, const OverlapQuery& q);

struct ClassCounts {
    long n1 = 0;
    long n2 = 0;
    long n3 = 0;
    long total() const { return n1 + n2 + n3; }
    long of(ClassTag tag) const {
        return tag == ClassTag::A1 ? n1 : (tag == ClassTag::A2 ? n2 : n3);
    }
};

// |{(j,k) in A_i : some enlarged tube through P1 and some through P2 share the
// index (j,k)}| for each class; the directions at the two points may differ.
ClassCounts count_class(const FrameParams& p, const ClassThresholds& th, const OverlapQuery& q);

long count_class(const FrameParams& p, const ClassThresholds& th, const OverlapQuery& q,
                 ClassTag tag);

struct ALambdaSet {
    std::vector<int> dirs;  // direction indices on the grid
    double measure = 0.0;   // |dirs| * angular step
    double c0 = 4.0;        // explicit constant replacing the comparability signs
};

// Grid directions w with |(x2-x1).w - (t2-t1)| <= c0/lambda and
// |x2-x1-(t2-t1) w| <= c0*sigma. Rejects queries with t2-t1 < 1/lambda.
ALambdaSet a_lambda_set(const FrameParams& p, const OverlapQuery& q, double c0 = 4.0);

// Scan of m_k = sqrt((r2-r1)^2 + 2 r1 r2 (1-cos(k theta))) - t over k*theta in
// [0, pi]; m_k is nondecreasing, crossings located by bisection.
struct RotationScan {
    double r1 = 0.0, r2 = 0.0, t = 0.0;
    double theta = 0.0;
    long k_end = 0;  // floor(pi/theta)
    double m0 = 0.0;
    double m_end = 0.0;
    std::optional<long> k1;  // first k with m_k >= c*(eps0*lambda*t)^{-1}
    std::optional<long> k2;  // first k with m_k >= max(-4/lambda, r2-r1-t)
    std::optional<long> k1_minus_k2;

    double m_at(long k) const;
};

RotationScan rotation_scan(const FrameParams& p, double r1, double r2, double t);

// One sampled point pair with its counts.
struct OverlapPairRow {
    double lambda = 0, eps0 = 0;
    double t = 0, m = 0;
    long n1 = 0, n2 = 0, n3 = 0, nlambda = 0;
};

struct OverlapCellStats {
    double lambda = 0, eps0 = 0;
    double max_n1_normalized = 0;  // max N1 * eps0^{3/2} * t^{1/2}
    double max_n2_normalized = 0;  // max N2 * eps0 * t
    std::optional<LogLogFit> slope_n1_vs_t;  // of per-bin max N1
    std::optional<LogLogFit> slope_n2_vs_t;
    bool a2_populated = false;  // whether the A2 class is nonempty at this scale
};

struct OverlapScalingReport {
    std::vector<OverlapPairRow> rows;
    std::vector<OverlapCellStats> cells;
};

using PairSampler = std::function<OverlapQuery(const FrameParams&, std::uint64_t pair_id)>;

// Default sampler used by the experiments; deterministic in (seed, pair_id).
PairSampler default_pair_sampler(std::uint64_t seed);

// Runs the counting sweep over every parameter cell: records per-pair rows,
// per-cell normalized maxima and dyadic-bin slopes of max N_i versus t.
OverlapScalingReport overlap_scaling_experiment(const std::vector<FrameParams>& cells,
                                                const ClassThresholds& th,
                                                const PairSampler& sampler, int pairs_per_cell,
                                                int workers);

// True when A2 contains at least one index at this scale; with the default
// thresholds this requires eps0*lambda > j_thr^2 / q_hi.
bool a2_nonempty(const FrameParams& p, const ClassThresholds& th);

}  // namespace wpl
