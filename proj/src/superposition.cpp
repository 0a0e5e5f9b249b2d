#include "wpl/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "wpl/parallel.hpp"

namespace wpl {

namespace {

double inv_sqrt_bracket(double y) {  // <y>^{-1/2}
    return 1.0 / std::sqrt(std::sqrt(1.0 + y * y));
}

}  // namespace

double f_k_eval(int k, double t, double m, double lambda) {
    const double d = m + 1.0 - std::fabs(k + t * lambda);
    if (d < 0.0) return 0.0;
    return inv_sqrt_bracket(m) * inv_sqrt_bracket(d);
}

FkSplit split_fk(int k, double t, double m, double lambda) {
    FkSplit s;
    const double f = f_k_eval(k, t, m, lambda);
    const double u = k + t * lambda;
    if (u - 2.0 >= 0.0) s.fplus = f;
    if (-u - 2.0 >= 0.0) s.fminus = f;
    s.f0 = f - s.fplus - s.fminus;
    return s;
}

double ModelCoefficients::l2_norm() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

namespace {

// l^2-in-t of per-interval sups; each sampled time is t*lambda = i + frac with
// frac in (0,1), so the bracket arguments land on two shifted integer grids:
//   u = k + i >= 0:  d = (m - u) + (1 - frac)
//   u         <= -1: d = (m + 1 + u) + frac
// which two per-slice tables cover without any per-term powers.
double model_norm_at_resolution(const ModelCoefficients& a, double lambda, int per_interval,
                                int workers) {
    const int li = static_cast<int>(lambda);
    const int m_max = 4 * li;
    const int kh = a.k_half;
    std::vector<double> bm(m_max + 1);
    for (int m = 0; m <= m_max; ++m) bm[m] = inv_sqrt_bracket(m);

    const std::size_t n_slices = static_cast<std::size_t>(4 * li) * per_interval;
    std::vector<double> sup2(n_slices, 0.0);
    parallel_for(n_slices, workers, [&](std::size_t s) {
        const int i = static_cast<int>(s) / per_interval - 2 * li;
        const int sub = static_cast<int>(s) % per_interval;
        const double frac = (2.0 * sub + 1.0) / (2.0 * per_interval);
        std::vector<double> bp(m_max + 2), bq(m_max + 2);
        for (int n = 0; n <= m_max + 1; ++n) {
            bp[n] = inv_sqrt_bracket(n + 1.0 - frac);
            bq[n] = inv_sqrt_bracket(n + frac);
        }
        const double* ak = a.a.data() + (kh - i);
        double sup = 0.0;
        for (int m = 0; m <= m_max; ++m) {
            double acc = 0.0;
            const int u_lo = std::max(-m - 1, i - kh);
            const int u_hi = std::min(m, i + kh);
            for (int u = u_lo; u <= u_hi; ++u) {
                acc += ak[u] * (u >= 0 ? bp[m - u] : bq[m + 1 + u]);
            }
            sup = std::fmax(sup, std::fabs(acc) * bm[m]);
        }
        sup2[s] = sup * sup;
    });
    double total = 0.0;
    for (double v : sup2) total += v;
    return std::sqrt(total / (lambda * per_interval));
}

}  // namespace

NormResult superposed_model_norm(const ModelCoefficients& a, double lambda, int workers) {
    if (a.k_half > static_cast<int>(lambda)) {
        throw std::invalid_argument("superposed_model_norm: coefficient support |k| <= " +
                                    std::to_string(a.k_half) + " exceeds the window lambda = " +
                                    std::to_string(lambda));
    }
    NormResult out;
    out.value = model_norm_at_resolution(a, lambda, 1, workers);
    const double fine = model_norm_at_resolution(a, lambda, 2, workers);
    const double scale = std::fmax(std::fmax(out.value, fine), 1e-300);
    out.resolution_error = std::fabs(fine - out.value) / scale;
    return out;
}

double reduceA3_check(const ModelCoefficients& a, double lambda, int workers) {
    const double l2 = a.l2_norm();
    if (l2 == 0.0) {
        throw std::invalid_argument("reduceA3_check: zero coefficient vector, ratio undefined");
    }
    const double rhs = std::log(lambda) / std::sqrt(lambda) * l2;
    return superposed_model_norm(a, lambda, workers).value / rhs;
}

CoefficientVector CoefficientVector::zeros(const FrameParams& p, int j_half, int k_half) {
    if (j_half < 0 || k_half < 0 || j_half > p.j_window || k_half > p.k_window) {
        throw std::invalid_argument(
            "CoefficientVector: support window exceeds the frame index window (|j| <= " +
            std::to_string(p.j_window) + ", |k| <= " + std::to_string(p.k_window) + ")");
    }
    CoefficientVector cv;
    cv.j_half = j_half;
    cv.k_half = k_half;
    cv.a.assign(static_cast<std::size_t>(2 * j_half + 1) * (2 * k_half + 1), 0.0);
    return cv;
}

double& CoefficientVector::at(int j, int k) {
    if (std::abs(j) > j_half || std::abs(k) > k_half) {
        throw std::out_of_range("CoefficientVector: index (" + std::to_string(j) + "," +
                                std::to_string(k) + ") outside the support window");
    }
    return a[static_cast<std::size_t>(j + j_half) * (2 * k_half + 1) + (k + k_half)];
}

double CoefficientVector::at(int j, int k) const {
    return const_cast<CoefficientVector*>(this)->at(j, k);
}

double CoefficientVector::l2_norm() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

bool CoefficientVector::is_zero() const {
    for (double v : a)
        if (v != 0.0) return false;
    return true;
}

double l2_norm_jkw(const CoefficientVector& a, int dir_count) {
    double sq = 0.0;
    for (double v : a.a) sq += v * v;
    double total = 0.0;
    for (int l = 0; l < dir_count; ++l) total += sq;
    return std::sqrt(total);
}

namespace {

// Shared bilinear table of packet_core over its support, cached per scale.
struct ProfileTable {
    double a_max = 0, b_max = 0;
    double da = 0, db = 0;
    int na = 0, nb = 0;
    std::vector<double> v;

    double eval(double a, double b) const {
        if (std::fabs(a) >= a_max || std::fabs(b) >= b_max) return 0.0;
        double fa = (a + a_max) / da;
        double fb = (b + b_max) / db;
        int ia = std::min(static_cast<int>(fa), na - 2);
        int ib = std::min(static_cast<int>(fb), nb - 2);
        fa -= ia;
        fb -= ib;
        const double* row = v.data() + static_cast<std::size_t>(ia) * nb + ib;
        const double v00 = row[0], v01 = row[1];
        const double v10 = row[nb], v11 = row[nb + 1];
        return (1 - fa) * ((1 - fb) * v00 + fb * v01) + fa * ((1 - fb) * v10 + fb * v11);
    }
};

std::shared_ptr<const ProfileTable> profile_table(const FrameParams& p,
                                                  const BumpProfiles& prof) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, std::shared_ptr<const ProfileTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p.lambda, p.eps0);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto t = std::make_shared<ProfileTable>();
    t->a_max = 1.0 / p.lambda;
    t->b_max = p.sigma + 1.0 / p.lambda;
    t->na = 257;
    t->nb = 641;
    t->da = 2.0 * t->a_max / (t->na - 1);
    t->db = 2.0 * t->b_max / (t->nb - 1);
    t->v.resize(static_cast<std::size_t>(t->na) * t->nb);
    for (int ia = 0; ia < t->na; ++ia) {
        const double a = -t->a_max + ia * t->da;
        for (int ib = 0; ib < t->nb; ++ib) {
            const double b = -t->b_max + ib * t->db;
            t->v[static_cast<std::size_t>(ia) * t->nb + ib] = packet_core(p, prof, a, b);
        }
    }
    cache[key] = t;
    return t;
}

}  // namespace

PacketField::PacketField(const FrameParams& p, const BumpProfiles& prof,
                         const CoefficientVector& cv)
    : params_(p) {
    auto pt = profile_table(p, prof);
    const double inv_lambda = 1.0 / p.lambda;
    p_sup_ = cv.k_half * inv_lambda + pt->a_max;
    q_sup_ = cv.j_half * p.sigma + pt->b_max;
    dp_ = inv_lambda / 16.0;
    dq_ = p.sigma / 16.0;
    np_ = static_cast<int>(std::ceil(2.0 * p_sup_ / dp_)) + 2;
    nq_ = static_cast<int>(std::ceil(2.0 * q_sup_ / dq_)) + 2;
    g_.assign(static_cast<std::size_t>(np_) * nq_, 0.0);
    for (int ip = 0; ip < np_; ++ip) {
        const double pv = -p_sup_ + ip * dp_;
        const int k_lo = std::max(-cv.k_half, static_cast<int>(std::ceil((pv - pt->a_max) * p.lambda)));
        const int k_hi = std::min(cv.k_half, static_cast<int>(std::floor((pv + pt->a_max) * p.lambda)));
        double* row = g_.data() + static_cast<std::size_t>(ip) * nq_;
        for (int iq = 0; iq < nq_; ++iq) {
            const double qv = -q_sup_ + iq * dq_;
            const int j_lo =
                std::max(-cv.j_half, static_cast<int>(std::ceil((qv - pt->b_max) / p.sigma)));
            const int j_hi =
                std::min(cv.j_half, static_cast<int>(std::floor((qv + pt->b_max) / p.sigma)));
            double acc = 0.0;
            for (int j = j_lo; j <= j_hi; ++j) {
                for (int k = k_lo; k <= k_hi; ++k) {
                    const double c = cv.at(j, k);
                    if (c == 0.0) continue;
                    acc += c * pt->eval(pv - k * inv_lambda, qv - j * p.sigma);
                }
            }
            row[iq] = acc;
        }
    }
    cos_.resize(p.dir_count);
    sin_.resize(p.dir_count);
    for (int l = 0; l < p.dir_count; ++l) {
        const double ang = p.angular_step() * l;
        cos_[l] = std::cos(ang);
        sin_[l] = std::sin(ang);
    }
}

double PacketField::eval(double t, Vec2 x) const {
    if (std::fabs(t) > 2.0) return 0.0;
    double sum = 0.0;
    const double inv_dp = 1.0 / dp_, inv_dq = 1.0 / dq_;
    for (int l = 0; l < params_.dir_count; ++l) {
        const double pv = x.x * cos_[l] + x.y * sin_[l] - t;
        if (std::fabs(pv) >= p_sup_) continue;
        const double qv = -x.x * sin_[l] + x.y * cos_[l];
        if (std::fabs(qv) >= q_sup_) continue;
        double fp = (pv + p_sup_) * inv_dp;
        double fq = (qv + q_sup_) * inv_dq;
        int ip = std::min(static_cast<int>(fp), np_ - 2);
        int iq = std::min(static_cast<int>(fq), nq_ - 2);
        fp -= ip;
        fq -= iq;
        const double* row = g_.data() + static_cast<std::size_t>(ip) * nq_ + iq;
        sum += (1 - fp) * ((1 - fq) * row[0] + fq * row[1]) +
               fp * ((1 - fq) * row[nq_] + fq * row[nq_ + 1]);
    }
    return sum;
}

double PacketField::slice_sup(double t, double dr, int angles) const {
    if (std::fabs(t) > 2.0) return 0.0;
    thread_local std::vector<double> buf;
    const double r_hi_total = std::hypot(p_sup_ + std::fabs(t), q_sup_) + dr;
    const long nr = static_cast<long>(std::ceil(r_hi_total / dr));
    buf.resize(nr + 1);
    double sup = 0.0;
    const double inv_dp = 1.0 / dp_, inv_dq = 1.0 / dq_;
    for (int a = 0; a < angles; ++a) {
        std::fill(buf.begin(), buf.end(), 0.0);
        const double phi = params_.angular_step() * a / angles;
        const double ca = std::cos(phi), sa = std::sin(phi);
        for (int l = 0; l < params_.dir_count; ++l) {
            const double c = ca * cos_[l] + sa * sin_[l];   // cos(phi - beta_l)
            const double s = sa * cos_[l] - ca * sin_[l];   // sin(phi - beta_l)
            // radii whose (p, q) coordinates can land inside the table support
            double lo = 0.0, hi = nr * dr;
            if (std::fabs(c) > 1e-12) {
                const double r1 = (t - p_sup_) / c, r2 = (t + p_sup_) / c;
                lo = std::fmax(lo, std::fmin(r1, r2));
                hi = std::fmin(hi, std::fmax(r1, r2));
            } else if (std::fabs(t) >= p_sup_) {
                continue;
            }
            if (std::fabs(s) > 1e-12) hi = std::fmin(hi, q_sup_ / std::fabs(s));
            if (lo > hi) continue;
            const long ir_lo = std::max(0L, static_cast<long>(std::floor(lo / dr)));
            const long ir_hi = std::min(nr, static_cast<long>(std::ceil(hi / dr)));
            for (long ir = ir_lo; ir <= ir_hi; ++ir) {
                const double r = ir * dr;
                const double pv = r * c - t;
                if (std::fabs(pv) >= p_sup_) continue;
                const double qv = r * s;
                if (std::fabs(qv) >= q_sup_) continue;
                double fp = (pv + p_sup_) * inv_dp;
                double fq = (qv + q_sup_) * inv_dq;
                int ip = std::min(static_cast<int>(fp), np_ - 2);
                int iq = std::min(static_cast<int>(fq), nq_ - 2);
                fp -= ip;
                fq -= iq;
                const double* row = g_.data() + static_cast<std::size_t>(ip) * nq_ + iq;
                buf[ir] += (1 - fp) * ((1 - fq) * row[0] + fq * row[1]) +
                           fp * ((1 - fq) * row[nq_] + fq * row[nq_ + 1]);
            }
        }
        for (long ir = 0; ir <= nr; ++ir) sup = std::fmax(sup, std::fabs(buf[ir]));
    }
    return sup;
}

namespace {

double dispersive_norm_at(const PacketField& field, const SupNormGrid& grid, int refine,
                          int workers) {
    const FrameParams& p = field.frame();
    const double dt = grid.t_step_factor / (p.lambda * refine);
    const double dr = grid.radial_step_factor / (p.lambda * refine);
    const int na = grid.angles_per_sector * refine;
    const long nt = static_cast<long>(std::ceil(4.0 / dt));
    std::vector<double> slice(nt + 1, 0.0);
    parallel_for(static_cast<std::size_t>(nt + 1), workers, [&](std::size_t is) {
        const double t = -2.0 + 4.0 * static_cast<double>(is) / nt;
        const double sup = field.slice_sup(t, dr, na);
        const double w = (is == 0 || is == static_cast<std::size_t>(nt)) ? 0.5 : 1.0;
        slice[is] = w * sup * sup * (4.0 / nt);
    });
    double total = 0.0;
    for (double v : slice) total += v;
    return std::sqrt(total);
}

}  // namespace

NormResult dispersive_norm(const FrameParams& p, const BumpProfiles& prof,
                           const CoefficientVector& a, const SupNormGrid& grid, int workers) {
    if (!(grid.radial_step_factor > 0.0 && grid.radial_step_factor <= 0.25)) {
        throw std::invalid_argument(
            "dispersive_norm: grid too coarse; radial_step_factor must be <= 0.25 so the grid "
            "resolves 1/lambda with at least 4 points");
    }
    if (!(grid.t_step_factor > 0.0 && grid.t_step_factor <= 1.0)) {
        throw std::invalid_argument("dispersive_norm: t_step_factor must lie in (0, 1]");
    }
    PacketField field(p, prof, a);
    NormResult out;
    out.value = dispersive_norm_at(field, grid, 1, workers);
    // coarse re-run estimates the grid sensitivity
    SupNormGrid coarse = grid;
    coarse.radial_step_factor *= 2.0;
    coarse.t_step_factor *= 2.0;
    const double cv = dispersive_norm_at(field, coarse, 1, workers);
    const double scale = std::fmax(std::fmax(out.value, cv), 1e-300);
    out.resolution_error = std::fabs(out.value - cv) / scale;
    return out;
}

double dispersive_rhs(const FrameParams& p, double a_l2) {
    const double ll = std::log(p.lambda);
    return std::pow(p.eps0, -1.75) * ll * std::sqrt(ll) * a_l2;
}

double classwise_rhs(const FrameParams& p, ClassTag tag, double a_l2) {
    const double ll = std::log(p.lambda);
    switch (tag) {
        case ClassTag::A1: return std::pow(p.eps0, -1.75) * std::sqrt(ll) * a_l2;
        case ClassTag::A2: return std::pow(p.eps0, -0.5) * ll * std::sqrt(ll) * a_l2;
        default: return std::pow(p.eps0, -0.5) * ll * a_l2;
    }
}

CoefficientVector restrict_to_class(const FrameParams& p, const ClassThresholds& th,
                                    const CoefficientVector& a, ClassTag tag) {
    CoefficientVector out = a;
    for (int j = -a.j_half; j <= a.j_half; ++j) {
        for (int k = -a.k_half; k <= a.k_half; ++k) {
            if (classify_index(p, th, j, k) != tag) out.at(j, k) = 0.0;
        }
    }
    return out;
}

double classwise_dispersive(const FrameParams& p, const BumpProfiles& prof,
                            const CoefficientVector& a, const ClassThresholds& th, ClassTag tag,
                            const SupNormGrid& grid, int workers) {
    CoefficientVector r = restrict_to_class(p, th, a, tag);
    const double l2 = r.l2_norm();
    if (l2 == 0.0) {
        throw std::invalid_argument(std::string("classwise_dispersive: no coefficients in class ") +
                                    to_string(tag));
    }
    return dispersive_norm(p, prof, r, grid, workers).value / classwise_rhs(p, tag, l2);
}

}  // namespace wpl
