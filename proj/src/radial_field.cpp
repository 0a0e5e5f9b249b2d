#include "wpl/radial_field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wpl {

namespace {

// Gauss-Legendre nodes/weights on [0, 1] by Newton iteration on the recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess on [-1, 1]
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 - x);  // map to [0,1]
        // standard weight 2/((1-x^2) P'^2), halved by the interval jacobian
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace

FourierBesselBasis::FourierBesselBasis(double radius, int n_modes)
    : radius_(radius), n_modes_(n_modes) {
    if (!(radius > 0.0) || n_modes < 1) {
        throw std::invalid_argument("FourierBesselBasis: radius must be positive, modes >= 1");
    }
    zeros_.resize(n_modes);
    weights_.resize(n_modes);
    for (int n = 0; n < n_modes; ++n) {
        // McMahon expansion then Newton: alpha <- alpha + J0(alpha)/J1(alpha)
        const double b = (n + 0.75) * M_PI;
        double alpha = b + 1.0 / (8.0 * b) - 31.0 / (384.0 * b * b * b);
        for (int it = 0; it < 50; ++it) {
            const double step = ::j0(alpha) / ::j1(alpha);
            alpha += step;
            if (std::fabs(step) < 1e-14) break;
        }
        zeros_[n] = alpha;
        const double j1v = ::j1(alpha);
        weights_[n] = M_PI * radius * radius * j1v * j1v;
    }
    // quadrature sized for products of two basis modes
    const int m = (5 * n_modes) / 4 + 32;
    std::vector<double> gx, gw;
    gauss_legendre(m, gx, gw);
    quad_r_.resize(m);
    quad_w_.resize(m);
    for (int i = 0; i < m; ++i) {
        quad_r_[i] = radius * gx[i];
        quad_w_[i] = 2.0 * M_PI * radius * gw[i] * quad_r_[i];
    }
    // uniform sup grid: 4 points per shortest wavelength 2 pi / xi_max
    sup_grid_.r_max = std::min(radius, 6.0);
    const double xi_max = zeros_.back() / radius;
    sup_grid_.step = M_PI / (2.0 * xi_max);
    sup_grid_.count = static_cast<int>(std::ceil(sup_grid_.r_max / sup_grid_.step)) + 1;
}

std::shared_ptr<const FourierBesselBasis> FourierBesselBasis::get(double radius, int n_modes) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::shared_ptr<const FourierBesselBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(radius, n_modes);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto b = std::shared_ptr<const FourierBesselBasis>(new FourierBesselBasis(radius, n_modes));
    cache[key] = b;
    return b;
}

void FourierBesselBasis::ensure_quad_matrices() const {
    if (quad_ready_) return;
    const int m = quad_points();
    b0_quad_.resize(static_cast<std::size_t>(m) * n_modes_);
    b1_quad_.resize(static_cast<std::size_t>(m) * n_modes_);
    for (int i = 0; i < m; ++i) {
        const double r = quad_r_[i];
        double* row0 = b0_quad_.data() + static_cast<std::size_t>(i) * n_modes_;
        double* row1 = b1_quad_.data() + static_cast<std::size_t>(i) * n_modes_;
        for (int n = 0; n < n_modes_; ++n) {
            const double x = zeros_[n] * r / radius_;
            row0[n] = ::j0(x);
            row1[n] = ::j1(x);
        }
    }
    quad_ready_ = true;
}

void FourierBesselBasis::ensure_sup_matrices() const {
    if (sup_ready_) return;
    const int m = sup_grid_.count;
    b0_sup_.resize(static_cast<std::size_t>(m) * n_modes_);
    b1_sup_.resize(static_cast<std::size_t>(m) * n_modes_);
    for (int i = 0; i < m; ++i) {
        const double r = i * sup_grid_.step;
        double* row0 = b0_sup_.data() + static_cast<std::size_t>(i) * n_modes_;
        double* row1 = b1_sup_.data() + static_cast<std::size_t>(i) * n_modes_;
        for (int n = 0; n < n_modes_; ++n) {
            const double x = zeros_[n] * r / radius_;
            row0[n] = ::j0(x);
            row1[n] = ::j1(x);
        }
    }
    sup_ready_ = true;
}

std::vector<double> FourierBesselBasis::coeffs_from_samples(
    const std::vector<double>& f_at_quad) const {
    if (static_cast<int>(f_at_quad.size()) != quad_points()) {
        throw std::invalid_argument("coeffs_from_samples: sample count mismatch");
    }
    ensure_quad_matrices();
    std::vector<double> c(n_modes_, 0.0);
    const int m = quad_points();
    for (int i = 0; i < m; ++i) {
        const double g = f_at_quad[i] * quad_w_[i];
        if (g == 0.0) continue;
        const double* row = b0_quad_.data() + static_cast<std::size_t>(i) * n_modes_;
        for (int n = 0; n < n_modes_; ++n) c[n] += g * row[n];
    }
    for (int n = 0; n < n_modes_; ++n) c[n] /= weights_[n];
    return c;
}

std::vector<double> FourierBesselBasis::samples_from_coeffs(const std::vector<double>& c) const {
    ensure_quad_matrices();
    const int m = quad_points();
    std::vector<double> f(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double* row = b0_quad_.data() + static_cast<std::size_t>(i) * n_modes_;
        double acc = 0.0;
        for (int n = 0; n < n_modes_; ++n) acc += row[n] * c[n];
        f[i] = acc;
    }
    return f;
}

std::vector<double> FourierBesselBasis::dr_samples_from_coeffs(
    const std::vector<double>& c) const {
    ensure_quad_matrices();
    const int m = quad_points();
    std::vector<double> f(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double* row = b1_quad_.data() + static_cast<std::size_t>(i) * n_modes_;
        double acc = 0.0;
        for (int n = 0; n < n_modes_; ++n) acc += row[n] * c[n] * (-zeros_[n] / radius_);
        f[i] = acc;
    }
    return f;
}

void FourierBesselBasis::sup_samples(const std::vector<double>& c,
                                     std::vector<double>& out) const {
    ensure_sup_matrices();
    const int m = sup_grid_.count;
    out.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double* row = b0_sup_.data() + static_cast<std::size_t>(i) * n_modes_;
        double acc = 0.0;
        for (int n = 0; n < n_modes_; ++n) acc += row[n] * c[n];
        out[i] = acc;
    }
}

void FourierBesselBasis::sup_dr_samples(const std::vector<double>& c,
                                        std::vector<double>& out) const {
    ensure_sup_matrices();
    const int m = sup_grid_.count;
    out.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double* row = b1_sup_.data() + static_cast<std::size_t>(i) * n_modes_;
        double acc = 0.0;
        for (int n = 0; n < n_modes_; ++n) acc += row[n] * c[n] * (-zeros_[n] / radius_);
        out[i] = acc;
    }
}

RadialField RadialField::zeros(std::shared_ptr<const FourierBesselBasis> basis) {
    RadialField f;
    f.c.assign(basis->modes(), 0.0);
    f.basis = std::move(basis);
    return f;
}

RadialField RadialField::from_coeffs(std::shared_ptr<const FourierBesselBasis> basis,
                                     std::vector<double> coeffs) {
    if (static_cast<int>(coeffs.size()) != basis->modes()) {
        throw std::invalid_argument("RadialField::from_coeffs: coefficient count mismatch");
    }
    RadialField f;
    f.basis = std::move(basis);
    f.c = std::move(coeffs);
    return f;
}

RadialField RadialField::from_function(std::shared_ptr<const FourierBesselBasis> basis,
                                       const std::function<double(double)>& fn) {
    std::vector<double> samples(basis->quad_points());
    for (int i = 0; i < basis->quad_points(); ++i) samples[i] = fn(basis->quad_r(i));
    RadialField f;
    f.c = basis->coeffs_from_samples(samples);
    f.basis = std::move(basis);
    return f;
}

double hs_norm(const RadialField& f, double s) {
    if (!(s >= -2.0 && s <= 4.0)) {
        throw std::invalid_argument("hs_norm: order s must lie in [-2, 4], got " +
                                    std::to_string(s));
    }
    double acc = 0.0;
    for (int n = 0; n < f.basis->modes(); ++n) {
        const double xi = f.basis->xi(n);
        acc += std::pow(1.0 + xi * xi, s) * f.c[n] * f.c[n] * f.basis->weight(n);
    }
    return std::sqrt(acc);
}

double l2_norm(const RadialField& f) {
    double acc = 0.0;
    for (int n = 0; n < f.basis->modes(); ++n) acc += f.c[n] * f.c[n] * f.basis->weight(n);
    return std::sqrt(acc);
}

namespace {

// C^inf step: 1 for x <= 0, 0 for x >= 1.
double smooth_step_down(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return b / (a + b);
}

}  // namespace

double lp_below_multiplier(double xi, double lambda_band) {
    // 1 for xi <= lambda, 0 for xi >= 2 lambda, smooth in log2
    return smooth_step_down(std::log2(std::fmax(xi, 1e-300) / lambda_band));
}

double lp_band_multiplier(double xi, double lambda_band) {
    const double y = std::log2(std::fmax(xi, 1e-300) / lambda_band);
    if (y <= -3.0 || y >= 3.0) return 0.0;
    if (y <= -2.0) return smooth_step_down(-(y + 2.0));  // ramp up over [lambda/8, lambda/4]
    if (y >= 2.0) return smooth_step_down(y - 2.0);      // ramp down over [4 lambda, 8 lambda]
    return 1.0;
}

RadialField lp_project(const RadialField& f, double lambda_band) {
    if (!(lambda_band > 0.0)) throw std::invalid_argument("lp_project: band must be positive");
    RadialField g = f;
    for (int n = 0; n < f.basis->modes(); ++n) g.c[n] *= lp_band_multiplier(f.basis->xi(n), lambda_band);
    return g;
}

RadialField lp_below(const RadialField& f, double lambda_band) {
    if (!(lambda_band > 0.0)) throw std::invalid_argument("lp_below: band must be positive");
    RadialField g = f;
    for (int n = 0; n < f.basis->modes(); ++n) g.c[n] *= lp_below_multiplier(f.basis->xi(n), lambda_band);
    return g;
}

}  // namespace wpl
