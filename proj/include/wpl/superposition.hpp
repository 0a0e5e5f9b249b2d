#pragma once

#include <memory>
#include <vector>

#include "wpl/frame.hpp"
#include "wpl/overlap.hpp"

namespace wpl {

// Discrete envelope model on the (t, m) grid, j = 0 slice:
//   f_k(t,m) = <m>^{-1/2} <m + 1 - |k + t lambda|>^{-1/2} H(m + 1 - |k + t lambda|)
// with H(0) = 1.
double f_k_eval(int k, double t, double m, double lambda);

struct FkSplit {
    double fplus = 0.0;   // f * H(k + t lambda - 2)
    double fminus = 0.0;  // f * H(-(k + t lambda) - 2)
    double f0 = 0.0;      // remainder, supported on |k + t lambda| < 2
    double sum() const { return fplus + fminus + f0; }
};

FkSplit split_fk(int k, double t, double m, double lambda);

// Coefficients a_k for the j = 0 model, k in [-k_half, k_half].
struct ModelCoefficients {
    int k_half = 0;
    std::vector<double> a;  // size 2*k_half + 1

    static ModelCoefficients zeros(int k_half) {
        return {k_half, std::vector<double>(2 * k_half + 1, 0.0)};
    }
    double& at(int k) { return a[static_cast<std::size_t>(k + k_half)]; }
    double at(int k) const { return a[static_cast<std::size_t>(k + k_half)]; }
    double l2_norm() const;
};

struct NormResult {
    double value = 0.0;
    double resolution_error = 0.0;  // relative change under a refined time grid
};

// ||sum_k a_k f_k||_{L^2_t L^inf_m}: per interval [i/lambda, (i+1)/lambda] the
// sup over the integer m-grid at the midpoint time, then an l^2 sum with
// weight 1/lambda. Requires k_half <= lambda.
NormResult superposed_model_norm(const ModelCoefficients& a, double lambda, int workers = 1);

// superposed_model_norm / (lambda^{-1/2} ln(lambda) ||a||_2); errors on a = 0.
double reduceA3_check(const ModelCoefficients& a, double lambda, int workers = 1);

// Coefficients a_{j,k} over a rectangular index window inside the frame window.
struct CoefficientVector {
    int j_half = 0;
    int k_half = 0;
    std::vector<double> a;  // (j + j_half) * (2*k_half + 1) + (k + k_half)

    static CoefficientVector zeros(const FrameParams& p, int j_half, int k_half);
    double& at(int j, int k);
    double at(int j, int k) const;
    double l2_norm() const;
    bool is_zero() const;
};

// l^2 over (j,k,omega) when the same a_{j,k} sits on every direction; equals
// sqrt(dir_count) times the (j,k) norm.
double l2_norm_jkw(const CoefficientVector& a, int dir_count);

// Cached fast evaluator for F(t,x) = sum_{j,k} a_{j,k} chi_{j,k}(t,x):
// a bilinear table of the shared packet profile feeds a per-coefficient-set
// table G with F(t,x) = sum_l G(x.w_l - t, x.w_l_perp).
class PacketField {
public:
    PacketField(const FrameParams& p, const BumpProfiles& prof, const CoefficientVector& a);
    double eval(double t, Vec2 x) const;
    // max of |eval| over the polar slice {r = i*dr} x {angles per sector},
    // computed by per-direction radial sweeps; same points, same sums.
    double slice_sup(double t, double dr, int angles) const;
    double p_support() const { return p_sup_; }
    double q_support() const { return q_sup_; }
    const FrameParams& frame() const { return params_; }

private:
    FrameParams params_;
    double p_sup_ = 0, q_sup_ = 0;
    double dp_ = 0, dq_ = 0;
    int np_ = 0, nq_ = 0;
    std::vector<double> g_;  // (np_ x nq_) row-major in p
    std::vector<double> cos_, sin_;
};

struct SupNormGrid {
    double radial_step_factor = 0.25;  // radial step = factor / lambda
    int angles_per_sector = 2;
    double t_step_factor = 1.0;  // time step = factor / lambda
};

// ||sum a_{j,k} chi_{j,k}||_{L^2_t L^inf_x} over t in [-2,2]: per time slice the
// sup over a polar grid covering the support, trapezoid weights in t.
NormResult dispersive_norm(const FrameParams& p, const BumpProfiles& prof,
                           const CoefficientVector& a, const SupNormGrid& grid = {},
                           int workers = 1);

double dispersive_rhs(const FrameParams& p, double a_l2);
double classwise_rhs(const FrameParams& p, ClassTag tag, double a_l2);

// Zeroes the coefficients outside the class.
CoefficientVector restrict_to_class(const FrameParams& p, const ClassThresholds& th,
                                    const CoefficientVector& a, ClassTag tag);

// dispersive_norm of the class restriction divided by the class RHS; errors
// when the restricted vector vanishes.
double classwise_dispersive(const FrameParams& p, const BumpProfiles& prof,
                            const CoefficientVector& a, const ClassThresholds& th, ClassTag tag,
                            const SupNormGrid& grid = {}, int workers = 1);

}  // namespace wpl
