#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wpl/radial_field.hpp"

namespace wpl {

struct SolverState {
    std::shared_ptr<const FourierBesselBasis> basis;
    std::vector<double> c;     // displacement coefficients
    std::vector<double> cdot;  // velocity coefficients
    double time = 0.0;
    double support_radius = 0.0;   // estimated data support, grows with |time|
    bool boundary_warning = false;  // support may have reached the disk boundary
};

SolverState make_state(const RadialField& u0, const RadialField& u1);

// Exact spectral flow of the flat wave equation on the disk eigenbasis.
SolverState linear_propagate(const SolverState& s, double dt);

struct Trajectory {
    std::vector<double> times;
    std::vector<SolverState> states;
    const SolverState& at(int i) const { return states[static_cast<std::size_t>(i)]; }
    int steps() const { return static_cast<int>(states.size()) - 1; }
};

// Source supplies coefficients of F(t); trapezoid quadrature in s.
using SourceFn = std::function<std::vector<double>(double t)>;

Trajectory duhamel_solve(const SolverState& data, const SourceFn& source, double T, int nt);

// ||partial u||_{H^ord} = sqrt(||u_t||_{H^ord}^2 + || |D| u ||_{H^ord}^2) via multipliers.
double dpair_norm(const SolverState& s, double ord);
// the same norm of the difference of two states on one basis
double dpair_norm_diff(const SolverState& a, const SolverState& b, double ord);

// sup_x of |(u_t, u_r)| over the uniform sup grid
double dsup_norm(const SolverState& s);

struct StrichartzResult {
    double numerator = 0.0;    // ||partial u||_{L^2_t L^inf_x}
    double denominator = 0.0;  // ||partial u(0)||_{H^{s-1}}
    double ratio = 0.0;
    double resolution_error = 0.0;
};

StrichartzResult strichartz_ratio(const SolverState& data, double s, double T, int nt);

struct Nonlinearity {
    std::function<double(double)> p;
    std::function<double(double)> q;
};

struct PicardTrace {
    std::vector<double> deltas;   // ||partial(u^{m+1} - u^m)||_{L^inf_t H^{s-1}}
    std::vector<double> factors;  // successive ratios
};

class PicardNonConvergence : public std::runtime_error {
public:
    PicardNonConvergence(const std::string& what, PicardTrace trace)
        : std::runtime_error(what), trace(std::move(trace)) {}
    PicardTrace trace;
};

struct PicardResult {
    Trajectory traj;
    PicardTrace trace;
    int iterations = 0;
    double residual = 0.0;        // defect of one extra fixed-point application
    double l2linf_norm = 0.0;     // ||partial u||_{L^2_t L^inf_x} of the solution
    double l2linf_res_err = 0.0;  // change under a half-resolution time grid
    bool converged = false;
};

// Fixed-point iteration u -> solution of Box u = p(u) u_t^2 + q(u) u_r^2 with
// the given data; stops when successive iterates differ by < tol in the
// L^inf_t H^{s-1} metric of partial u.
PicardResult picard_solve(const SolverState& data, const Nonlinearity& nl, double s, double T,
                          double tol, int max_iter, int nt = 0);

struct StabilityResult {
    double lhs = 0.0;        // ||partial(u-v)||_{L^inf_t L^2}
    double data_diff = 0.0;  // ||(u0-v0, u1-v1)||_{H^1 x L^2}
    double b_l1linf = 0.0;   // ||partial u||_{L^1 L^inf} + ||partial v||_{L^1 L^inf}
    double b_res_err = 0.0;  // change of B under a half-resolution time grid
    double fitted_c = 0.0;   // smallest C with lhs <= data_diff * exp(C (T + B))
};

StabilityResult stability_check(const SolverState& u_data, const SolverState& v_data,
                                const Nonlinearity& nl, double s, double T, double tol = 1e-10,
                                int max_iter = 40);

struct EnergyCheckResult {
    double energy_ratio = 0.0;       // sup_t E_r(t) / E_r(0), conserved-energy functional
    double literal_ratio = 0.0;      // sup_t (||v||_{H^r} + ||v_t||_{H^{r-1}}) / data norm
    double striqlw_ratio = 0.0;      // flat case only: ||<D>^rho v||_{L^2 L^inf} / data norm
    double striqlw_res_err = 0.0;    // change under a half-resolution time grid
    bool flat = false;
    int nr = 0;
};

// Frozen-metric energy check for Box_g v = v_tt - g(r) (v_rr + v_r / r) = 0.
// g absent means the flat case, solved spectrally; otherwise second-order
// finite differences in r with RK4 in t on nr cells.
EnergyCheckResult energy_estimate_check(const std::optional<std::function<double(double)>>& g,
                                        const RadialField& v0, const RadialField& v1,
                                        double r_order, double T, int nr = 4000);

// Finite-difference solve exposed for the convergence tests; optional source.
struct FdTrajectory {
    std::vector<double> r;                    // grid incl. endpoints
    std::vector<double> times;                // stored slices
    std::vector<std::vector<double>> v, vt;   // per stored slice
};

// dt = 0 selects the stable step 0.5 h / sqrt(max g); an explicit dt beyond
// that bound is a CFL violation and throws.
FdTrajectory fd_wave_solve(const std::function<double(double)>& g,
                           const std::vector<double>& v0, const std::vector<double>& v1,
                           int nr, double radius, double T, int store_every,
                           const std::function<double(double, double)>& source = nullptr,
                           double dt = 0.0);

}  // namespace wpl
