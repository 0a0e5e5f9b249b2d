#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace wpl {

// Dirichlet Fourier-Bessel basis J0(alpha_n r / R) on a disk of radius R.
// Transforms use Gauss-Legendre collocation in r; L^inf scans use a uniform
// grid with >= 4 points per shortest wavelength.
class FourierBesselBasis {
public:
    static std::shared_ptr<const FourierBesselBasis> get(double radius, int n_modes);

    double radius() const { return radius_; }
    int modes() const { return n_modes_; }
    double zero(int n) const { return zeros_[n]; }        // alpha_n, n in [0, N)
    double xi(int n) const { return zeros_[n] / radius_; }  // radial frequency
    double weight(int n) const { return weights_[n]; }      // pi R^2 J1(alpha_n)^2

    int quad_points() const { return static_cast<int>(quad_r_.size()); }
    double quad_r(int m) const { return quad_r_[m]; }
    // area-weighted quadrature factor 2 pi w_m r_m
    double quad_w(int m) const { return quad_w_[m]; }

    std::vector<double> coeffs_from_samples(const std::vector<double>& f_at_quad) const;
    std::vector<double> samples_from_coeffs(const std::vector<double>& c) const;
    // radial derivative samples at the quadrature nodes: d/dr J0 = -xi J1
    std::vector<double> dr_samples_from_coeffs(const std::vector<double>& c) const;

    struct SupGrid {
        double r_max = 0.0;
        double step = 0.0;
        int count = 0;
    };
    const SupGrid& sup_grid() const { return sup_grid_; }
    void sup_samples(const std::vector<double>& c, std::vector<double>& out) const;
    void sup_dr_samples(const std::vector<double>& c, std::vector<double>& out) const;

private:
    FourierBesselBasis(double radius, int n_modes);
    void ensure_quad_matrices() const;
    void ensure_sup_matrices() const;

    double radius_ = 0.0;
    int n_modes_ = 0;
    std::vector<double> zeros_;
    std::vector<double> weights_;
    std::vector<double> quad_r_, quad_w_;
    SupGrid sup_grid_;

    mutable std::vector<double> b0_quad_, b1_quad_;  // (quad x modes)
    mutable std::vector<double> b0_sup_, b1_sup_;    // (sup x modes)
    mutable bool quad_ready_ = false, sup_ready_ = false;
};

struct RadialField {
    std::shared_ptr<const FourierBesselBasis> basis;
    std::vector<double> c;

    static RadialField zeros(std::shared_ptr<const FourierBesselBasis> basis);
    static RadialField from_coeffs(std::shared_ptr<const FourierBesselBasis> basis,
                                   std::vector<double> coeffs);
    static RadialField from_function(std::shared_ptr<const FourierBesselBasis> basis,
                                     const std::function<double(double)>& f);
};

// Sobolev norm via the Plancherel weights; s must lie in [-2, 4].
double hs_norm(const RadialField& f, double s);
double l2_norm(const RadialField& f);

// Smooth frequency cutoffs. lp_project keeps the band: multiplier 1 on
// [lambda/4, 4 lambda], supported in [lambda/8, 8 lambda]. lp_below is the
// companion low-pass: 1 below lambda, 0 above 2 lambda; consecutive dyadic
// differences of lp_below tile the line exactly.
RadialField lp_project(const RadialField& f, double lambda_band);
RadialField lp_below(const RadialField& f, double lambda_band);

// scalar multiplier versions used by the solver
double lp_band_multiplier(double xi, double lambda_band);
double lp_below_multiplier(double xi, double lambda_band);

}  // namespace wpl
