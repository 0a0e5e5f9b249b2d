#include "wpl/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "wpl/parallel.hpp"

namespace wpl {

const char* to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::A1: return "A1";
        case ClassTag::A2: return "A2";
        default: return "A3";
    }
}

ClassTag classify_index(const FrameParams& p, const ClassThresholds& th, int j, int k) {
    const double q = index_q(p, j, k);
    if (q >= th.q_hi) return ClassTag::A1;
    if (q < th.q_lo) return std::abs(j) >= th.j_thr ? ClassTag::A2 : ClassTag::A3;
    return std::abs(j) >= th.j_thr ? ClassTag::A2 : ClassTag::A1;
}

bool a2_nonempty(const FrameParams& p, const ClassThresholds& th) {
    // smallest admissible |j| is j_thr; need q(j_thr, 0) < q_hi
    const double q = static_cast<double>(th.j_thr) * th.j_thr / (p.eps0 * p.lambda);
    return q < th.q_hi && th.j_thr <= p.j_window;
}

namespace {

struct IndexInterval {
    int lo = 1, hi = 0;  // empty when lo > hi
    int count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

IndexInterval intersect(IndexInterval a, IndexInterval b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Integer slots whose enlarged tube along this direction contains the point:
// k in lambda*(xw - t) +- 2 and j in (xp +- (sigma + 1/lambda))/sigma.
struct SlotRect {
    IndexInterval j, k;
};

SlotRect slot_rect(const FrameParams& p, const SpacetimePoint& pt, const Vec2& w) {
    SlotRect r;
    const double xw = dot(pt.x, w);
    const double xp = dot(pt.x, perp(w));
    const double kc = p.lambda * (xw - pt.t);
    r.k.lo = static_cast<int>(std::ceil(kc - 2.0));
    r.k.hi = static_cast<int>(std::floor(kc + 2.0));
    const double half = 1.0 + 1.0 / (p.lambda * p.sigma);
    const double jc = xp / p.sigma;
    r.j.lo = static_cast<int>(std::ceil(jc - half));
    r.j.hi = static_cast<int>(std::floor(jc + half));
    r.k = intersect(r.k, {-p.k_window, p.k_window});
    r.j = intersect(r.j, {-p.j_window, p.j_window});
    return r;
}

// Reusable mark grid over the (j,k) window, epoch-stamped so clearing is O(1).
struct MarkGrid {
    std::vector<std::uint32_t> stamp1, stamp2;
    std::vector<std::pair<int, int>> marked;  // cells marked for point 1
    std::uint32_t epoch = 0;
    int jw = -1, kw = -1;

    void reset(const FrameParams& p) {
        if (jw != p.j_window || kw != p.k_window) {
            jw = p.j_window;
            kw = p.k_window;
            std::size_t n = static_cast<std::size_t>(2 * jw + 1) * (2 * kw + 1);
            stamp1.assign(n, 0);
            stamp2.assign(n, 0);
            epoch = 0;
        }
        ++epoch;
        marked.clear();
    }
    std::size_t cell(int j, int k) const {
        return static_cast<std::size_t>(j + jw) * (2 * kw + 1) + (k + kw);
    }
};

thread_local MarkGrid tl_grid;

}  // namespace

long n_lambda(const FrameParams& p, const OverlapQuery& q) {
    if (std::fabs(q.p1.t) > 2.0 || std::fabs(q.p2.t) > 2.0) return 0;
    long count = 0;
    for (int l = 0; l < p.dir_count; ++l) {
        const Vec2 w = p.direction(l);
        const SlotRect r1 = slot_rect(p, q.p1, w);
        if (r1.k.count() == 0 || r1.j.count() == 0) continue;
        const SlotRect r2 = slot_rect(p, q.p2, w);
        count += static_cast<long>(intersect(r1.k, r2.k).count()) *
                 intersect(r1.j, r2.j).count();
    }
    return count;
}

ClassCounts count_class(const FrameParams& p, const ClassThresholds& th, const OverlapQuery& q) {
    ClassCounts out;
    if (std::fabs(q.p1.t) > 2.0 || std::fabs(q.p2.t) > 2.0) return out;
    MarkGrid& g = tl_grid;
    g.reset(p);
    for (int l = 0; l < p.dir_count; ++l) {
        const Vec2 w = p.direction(l);
        const SlotRect r1 = slot_rect(p, q.p1, w);
        for (int j = r1.j.lo; j <= r1.j.hi; ++j) {
            for (int k = r1.k.lo; k <= r1.k.hi; ++k) {
                auto c = g.cell(j, k);
                if (g.stamp1[c] != g.epoch) {
                    g.stamp1[c] = g.epoch;
                    g.marked.emplace_back(j, k);
                }
            }
        }
        const SlotRect r2 = slot_rect(p, q.p2, w);
        for (int j = r2.j.lo; j <= r2.j.hi; ++j) {
            for (int k = r2.k.lo; k <= r2.k.hi; ++k) {
                g.stamp2[g.cell(j, k)] = g.epoch;
            }
        }
    }
    for (const auto& [j, k] : g.marked) {
        if (g.stamp2[g.cell(j, k)] != g.epoch) continue;
        switch (classify_index(p, th, j, k)) {
            case ClassTag::A1: ++out.n1; break;
            case ClassTag::A2: ++out.n2; break;
            case ClassTag::A3: ++out.n3; break;
        }
    }
    return out;
}

long count_class(const FrameParams& p, const ClassThresholds& th, const OverlapQuery& q,
                 ClassTag tag) {
    return count_class(p, th, q).of(tag);
}

ALambdaSet a_lambda_set(const FrameParams& p, const OverlapQuery& q, double c0) {
    const double t = q.dt();
    if (!(t >= 1.0 / p.lambda)) {
        throw std::domain_error("a_lambda_set: requires t2 - t1 >= 1/lambda, got t = " +
                                std::to_string(t));
    }
    ALambdaSet out;
    out.c0 = c0;
    const Vec2 d = q.p2.x - q.p1.x;
    const double tol_long = c0 / p.lambda;
    const double tol_trans = c0 * p.sigma;
    for (int l = 0; l < p.dir_count; ++l) {
        const Vec2 w = p.direction(l);
        if (std::fabs(dot(d, w) - t) > tol_long) continue;
        if (norm(d - t * w) > tol_trans) continue;
        out.dirs.push_back(l);
    }
    out.measure = out.dirs.size() * p.angular_step();
    return out;
}

double RotationScan::m_at(long k) const {
    const double s = std::sin(0.5 * k * theta);
    const double d = r2 - r1;
    return std::sqrt(d * d + 4.0 * r1 * r2 * s * s) - t;
}

RotationScan rotation_scan(const FrameParams& p, double r1, double r2, double t) {
    if (!(r2 >= r1 && r1 >= 0.0) || !(t >= 0.0)) {
        throw std::invalid_argument("rotation_scan: requires r2 >= r1 >= 0 and t >= 0");
    }
    RotationScan s;
    s.r1 = r1;
    s.r2 = r2;
    s.t = t;
    s.theta = p.theta;
    s.k_end = static_cast<long>(std::floor(M_PI / p.theta));
    s.m0 = s.m_at(0);
    s.m_end = s.m_at(s.k_end);

    // first k with m_k >= target on the nondecreasing sequence
    auto cross = [&](double target) -> std::optional<long> {
        if (target < s.m0 || target > s.m_end) return std::nullopt;
        long lo = 0, hi = s.k_end;
        while (lo < hi) {
            long mid = lo + (hi - lo) / 2;
            if (s.m_at(mid) >= target) hi = mid;
            else lo = mid + 1;
        }
        return lo;
    };

    if (t > 0.0) {
        s.k1 = cross(p.c_small / (p.eps0 * p.lambda * t));
    }
    s.k2 = cross(std::max(-4.0 / p.lambda, s.m0));
    if (s.k1 && s.k2) s.k1_minus_k2 = *s.k1 - *s.k2;
    return s;
}

PairSampler default_pair_sampler(std::uint64_t seed) {
    return [seed](const FrameParams& p, std::uint64_t pair_id) {
        Rng rng(seed, 0x706169ULL * (pair_id + 1) +
                          static_cast<std::uint64_t>(p.lambda) * 131 +
                          static_cast<std::uint64_t>(1.0 / p.eps0));
        const double t = rng.log_uniform(1.0 / p.lambda, 2.0);
        // far pairs exercise the large-offset class, mid pairs the small-q ones
        double r1;
        if (rng.uniform() < 0.5) {
            r1 = rng.uniform(2.2, 3.2);
        } else {
            r1 = rng.uniform(0.8, 1.9);
        }
        // radial gap r2 - r1 = t + m with m swept across the support regimes
        double m;
        const double u = rng.uniform();
        const double m_cap = p.c_small * p.sigma;
        if (u < 0.4) {
            m = rng.uniform(-4.0 / p.lambda, 4.0 / p.lambda);
        } else if (u < 0.7) {
            m = rng.log_uniform(4.0 / p.lambda, std::max(m_cap, 8.0 / p.lambda));
        } else {
            m = -rng.log_uniform(4.0 / p.lambda, std::max(0.25 * t, 8.0 / p.lambda));
        }
        double r2 = std::clamp(r1 + t + m, 0.01, 3.9);
        // small angular offset half the time; 0 hits the aligned extremal case
        double beta = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.0, 0.1);
        double gamma = rng.uniform(0.0, 2.0 * M_PI);
        OverlapQuery q;
        q.p1 = {-0.5 * t, {r1 * std::cos(gamma), r1 * std::sin(gamma)}};
        q.p2 = {0.5 * t, {r2 * std::cos(gamma + beta), r2 * std::sin(gamma + beta)}};
        return q;
    };
}

OverlapScalingReport overlap_scaling_experiment(const std::vector<FrameParams>& cells,
                                                const ClassThresholds& th,
                                                const PairSampler& sampler, int pairs_per_cell,
                                                int workers) {
    if (cells.empty() || pairs_per_cell <= 0) {
        throw std::invalid_argument("overlap_scaling_experiment: empty parameter grid");
    }
    OverlapScalingReport report;
    report.rows.resize(cells.size() * static_cast<std::size_t>(pairs_per_cell));
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const FrameParams& p = cells[ci];
        OverlapPairRow* rows = report.rows.data() + ci * pairs_per_cell;
        parallel_for(static_cast<std::size_t>(pairs_per_cell), workers, [&](std::size_t i) {
            const OverlapQuery q = sampler(p, i);
            const ClassCounts c = count_class(p, th, q);
            OverlapPairRow& r = rows[i];
            r.lambda = p.lambda;
            r.eps0 = p.eps0;
            r.t = q.dt();
            r.m = q.m();
            r.n1 = c.n1;
            r.n2 = c.n2;
            r.n3 = c.n3;
            r.nlambda = n_lambda(p, q);
        });

        OverlapCellStats st;
        st.lambda = p.lambda;
        st.eps0 = p.eps0;
        st.a2_populated = a2_nonempty(p, th);
        // dyadic t-bins; per-bin maxima feed the log-log slope fits
        std::map<int, std::pair<long, long>> bins;  // bin -> (max n1, max n2)
        for (int i = 0; i < pairs_per_cell; ++i) {
            const OverlapPairRow& r = rows[i];
            st.max_n1_normalized =
                std::fmax(st.max_n1_normalized, r.n1 * std::pow(p.eps0, 1.5) * std::sqrt(r.t));
            st.max_n2_normalized = std::fmax(st.max_n2_normalized, r.n2 * p.eps0 * r.t);
            int bin = static_cast<int>(std::floor(std::log2(r.t)));
            auto& b = bins[bin];
            b.first = std::max(b.first, r.n1);
            b.second = std::max(b.second, r.n2);
        }
        std::vector<std::pair<double, double>> pts1, pts2;
        for (const auto& [bin, mx] : bins) {
            const double tc = std::pow(2.0, bin + 0.5);
            if (mx.first > 0) pts1.emplace_back(tc, static_cast<double>(mx.first));
            if (mx.second > 0) pts2.emplace_back(tc, static_cast<double>(mx.second));
        }
        if (pts1.size() >= 3) st.slope_n1_vs_t = loglog_fit(pts1);
        if (pts2.size() >= 3) st.slope_n2_vs_t = loglog_fit(pts2);
        report.cells.push_back(st);
    }
    return report;
}

}  // namespace wpl
