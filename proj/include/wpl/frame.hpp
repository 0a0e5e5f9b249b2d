#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace wpl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

struct SpacetimePoint {
    double t = 0.0;
    Vec2 x;
};

// Scale parameters of the packet frame. theta = sqrt(eps0/lambda) is the
// angular separation of the direction grid, sigma = (eps0*lambda)^{-1/2} the
// transverse tube half-width.
struct FrameParams {
    double lambda = 0.0;
    double eps0 = 0.0;
    double theta = 0.0;
    int dir_count = 0;  // D = ceil(2*pi/theta)
    double c_small = 1.0;
    double sigma = 0.0;
    int j_window = 0;   // |j| <= j_window
    int k_window = 0;   // |k| <= k_window

    double angular_step() const { return 2.0 * M_PI / dir_count; }
    Vec2 direction(int l) const {
        double a = angular_step() * l;
        return {std::cos(a), std::sin(a)};
    }
};

// Validates lambda >= 64, eps0 in (0, 1/4], eps0*lambda >= 16 and derives the
// direction grid and index windows.
FrameParams make_frame(double lambda, double eps0, double c_small = 1.0);

// Serialization into the harness config format (key = value lines).
std::string frame_to_config(const FrameParams& p);

struct PacketIndex {
    int j = 0;  // transverse slot, center j*sigma
    int k = 0;  // longitudinal slot, center k/lambda
    int l = 0;  // direction index in [0, dir_count)
};

// Exact tube membership:
//   |x.w - t - k/lambda| <= 1/lambda,  |x.w_perp - j*sigma| <= sigma,  |t| <= 2.
bool tube_contains(const FrameParams& p, const PacketIndex& idx, const SpacetimePoint& pt);

// Tube enlarged by 1/lambda in both spatial coordinates; outer bound for the
// packet support, used as the nonvanishing proxy by the counting kernels.
bool enlarged_tube_contains(const FrameParams& p, const PacketIndex& idx, const SpacetimePoint& pt);

// Mollifier pair: psi is the radial bump exp(-1/(1-|x|^2)) normalized to unit
// integral on R^2, w0 the even profile exp(-s^2/(1-s^2)) on (-1,1). norm_const
// rescales the reduced convolution so its numerical sup over the tube is 1.
struct BumpProfiles {
    double psi_const = 0.0;
    double norm_const = 0.0;
    int steps_per_width = 32;  // trapezoid nodes per mollifier half-width 1/lambda

    static double w0(double s) {
        double s2 = s * s;
        return s2 < 1.0 ? std::exp(-s2 / (1.0 - s2)) : 0.0;
    }
    // psi as a function of r^2 (unnormalized)
    static double psi_r2(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }
};

BumpProfiles make_profiles(const FrameParams& p);

// Packet value in the tube-adapted coordinates a = x.w - t - k/lambda,
// beta = x.w_perp - j*sigma. Shared by every (j,k,l).
double packet_core(const FrameParams& p, const BumpProfiles& prof, double a, double beta);

// L^inf-normalized packet value at a spacetime point; exactly zero outside the
// enlarged tube and for |t| > 2.
double packet_eval(const FrameParams& p, const BumpProfiles& prof, const PacketIndex& idx,
                   const SpacetimePoint& pt);

// Sum of packet_eval over all dir_count directions. Pruning skips directions
// whose enlarged tube misses the point; it cannot change the value because the
// integrand vanishes there.
double radial_packet_eval(const FrameParams& p, const BumpProfiles& prof, int j, int k,
                          const SpacetimePoint& pt, bool prune = true);

}  // namespace wpl
