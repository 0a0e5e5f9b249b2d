#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpl/frame.hpp"
#include "wpl/parallel.hpp"

using namespace wpl;

namespace {

// Dense-quadrature reference for the packet reduced convolution, written
// independently of packet_core: fresh trapezoid with 256 nodes per half-width.
double dense_core(const FrameParams& p, double a, double beta, double psi_const) {
    const int spw = 256;
    const int n = 2 * spw;
    const double h = p.sigma / spw;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        double u = -p.sigma + i * h;
        double y = u / p.sigma;
        double y2 = y * y;
        double w = y2 < 1.0 ? std::exp(-y2 / (1.0 - y2)) : 0.0;
        double r2 = (a * a + (beta - u) * (beta - u)) * p.lambda * p.lambda;
        double ps = r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
        double term = ps * w;
        if (i == 0 || i == n) term *= 0.5;
        sum += term;
    }
    return sum * h * p.lambda * p.lambda * psi_const;
}

}  // namespace

TEST_CASE("make_frame derives theta and the direction count") {
    auto p = make_frame(64, 0.25);
    CHECK(p.theta == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(p.dir_count == 101);  // ceil(32*pi)
    CHECK(p.sigma == doctest::Approx(0.25));
    CHECK(p.j_window == 16);
    CHECK(p.k_window == 256);

    auto q = make_frame(1024, 1.0 / 16.0);
    CHECK(q.theta == doctest::Approx(1.0 / 128.0).epsilon(1e-15));
    CHECK(q.dir_count == 805);  // ceil(256*pi)
}

TEST_CASE("make_frame rejects out-of-range parameters with named diagnostics") {
    CHECK_THROWS_WITH_AS(make_frame(32, 0.25), doctest::Contains("lambda"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_frame(64, 0.5), doctest::Contains("eps0"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_frame(64, 1.0 / 8.0), doctest::Contains("eps0*lambda"),
                         std::invalid_argument);
    CHECK_THROWS(make_frame(64, 0.0));
}

TEST_CASE("direction grid spans the circle with near-theta spacing") {
    for (auto [lam, eps] : {std::pair{64.0, 0.25}, {256.0, 0.25}, {512.0, 1.0 / 16.0}}) {
        auto p = make_frame(lam, eps);
        CHECK(p.dir_count * p.angular_step() >= 2.0 * M_PI - 1e-12);
        CHECK(p.dir_count >= 2.0 * M_PI / p.theta);
        // ceil rounding makes the realized step at most theta
        CHECK(p.angular_step() <= p.theta + 1e-15);
        CHECK(p.angular_step() >= p.theta * (1.0 - 2.0 / p.dir_count));
    }
}

TEST_CASE("tube_contains matches the three defining inequalities") {
    auto p = make_frame(64, 0.25);
    PacketIndex idx{0, 0, 0};
    CHECK(tube_contains(p, idx, {0.0, {0.0, 0.0}}));
    CHECK_FALSE(tube_contains(p, idx, {0.0, {2.0 / 64.0, 0.0}}));
    CHECK_FALSE(tube_contains(p, idx, {3.0, {3.0, 0.0}}));
    // boundary is inclusive
    CHECK(tube_contains(p, idx, {0.0, {1.0 / 64.0, 0.0}}));
    CHECK(tube_contains(p, idx, {2.0, {2.0, 0.0}}));
    // transverse limit
    CHECK(tube_contains(p, idx, {0.0, {0.0, 0.25}}));
    CHECK_FALSE(tube_contains(p, idx, {0.0, {0.0, 0.26}}));
}

TEST_CASE("packet vanishes outside the enlarged tube: random exterior points") {
    for (auto [lam, eps] : {std::pair{64.0, 0.25}, {256.0, 1.0 / 16.0}}) {
        auto p = make_frame(lam, eps);
        auto prof = make_profiles(p);
        Rng rng(2024);
        int checked = 0;
        for (int trial = 0; trial < 30000 && checked < 10000; ++trial) {
            PacketIndex idx{rng.uniform_int(-p.j_window, p.j_window),
                            rng.uniform_int(-p.k_window, p.k_window),
                            rng.uniform_int(0, p.dir_count - 1)};
            SpacetimePoint pt{rng.uniform(-2.0, 2.0),
                              {rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)}};
            if (enlarged_tube_contains(p, idx, pt)) continue;
            ++checked;
            REQUIRE(packet_eval(p, prof, idx, pt) == 0.0);
        }
        CHECK(checked >= 10000);
    }
}

TEST_CASE("packet center value is normalized and agrees with the dense oracle") {
    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);

    // frozen from the standalone dense-quadrature run (step sigma/256):
    // unit-integral constant and unnormalized center value
    CHECK(prof.psi_const == doctest::Approx(2.14356577579267).epsilon(1e-9));
    const double u_dense = dense_core(p, 0.0, 0.0, prof.psi_const);
    CHECK(u_dense == doctest::Approx(60.8732591923427).epsilon(1e-9));

    // tube center: t=0, x = (k/lambda) w + j sigma w_perp
    PacketIndex idx{1, 3, 0};
    SpacetimePoint center{0.0, {3.0 / 64.0, 0.25}};
    const double v = packet_eval(p, prof, idx, center);
    CHECK(v >= 0.5);
    CHECK(v <= 1.0 + 1e-12);
    // the production quadrature stays within 2% of the dense one
    CHECK(packet_core(p, prof, 0.0, 0.0) ==
          doctest::Approx(prof.norm_const * u_dense).epsilon(0.02));
}

TEST_CASE("packet sup over a fine grid is 1 within 10%") {
    for (auto [lam, eps] : {std::pair{64.0, 0.25}, {128.0, 0.25}}) {
        auto p = make_frame(lam, eps);
        auto prof = make_profiles(p);
        // grid with 4 points per 1/lambda in a, 4 per sigma in beta
        double mx = 0.0;
        const double da = 1.0 / (4.0 * p.lambda);
        for (double a = -1.0 / p.lambda; a <= 1.0 / p.lambda + 1e-15; a += da) {
            for (double b = -p.sigma - 1.0 / p.lambda; b <= p.sigma + 1.0 / p.lambda;
                 b += p.sigma / 4.0) {
                mx = std::fmax(mx, std::fabs(packet_core(p, prof, a, b)));
            }
        }
        CHECK(mx >= 0.9);
        CHECK(mx <= 1.1);
    }
}

TEST_CASE("shift covariance: k and t enter only through x.w - t - k/lambda") {
    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        // dyadic inputs keep the identity exact in floating point
        int k = rng.uniform_int(-64, 64);
        int kp = rng.uniform_int(-64, 64);
        int j = rng.uniform_int(-8, 8);
        int l = rng.uniform_int(0, p.dir_count - 1);
        double t = rng.uniform_int(-64, 64) / 64.0;
        double tp = t + (k - kp) / 64.0;
        if (std::fabs(t) > 2.0 || std::fabs(tp) > 2.0) continue;
        SpacetimePoint pt{t, {rng.uniform_int(-256, 256) / 64.0, rng.uniform_int(-256, 256) / 64.0}};
        SpacetimePoint pt2{tp, pt.x};
        double a = packet_eval(p, prof, PacketIndex{j, k, l}, pt);
        double b = packet_eval(p, prof, PacketIndex{j, kp, l}, pt2);
        REQUIRE(a == b);
    }
}

TEST_CASE("reflection through the transverse center leaves the packet unchanged") {
    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        double a = rng.uniform(-1.5 / p.lambda, 1.5 / p.lambda);
        double beta = rng.uniform(-p.sigma, p.sigma);
        double v1 = packet_core(p, prof, a, beta);
        double v2 = packet_core(p, prof, a, -beta);
        REQUIRE(v1 == doctest::Approx(v2).epsilon(1e-12));
    }
}

TEST_CASE("radial packet: far tubes give zero, grid rotation is a symmetry") {
    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);
    SpacetimePoint origin{0.0, {0.0, 0.0}};
    CHECK(radial_packet_eval(p, prof, 0, 640, origin) == 0.0);

    const double step = p.angular_step();
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        SpacetimePoint pt{rng.uniform(-1.0, 1.0), {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
        SpacetimePoint rot{pt.t,
                           {pt.x.x * std::cos(step) - pt.x.y * std::sin(step),
                            pt.x.x * std::sin(step) + pt.x.y * std::cos(step)}};
        int j = rng.uniform_int(0, 2), k = rng.uniform_int(-32, 32);
        double v1 = radial_packet_eval(p, prof, j, k, pt);
        double v2 = radial_packet_eval(p, prof, j, k, rot);
        REQUIRE(v1 == doctest::Approx(v2).epsilon(1e-12));
    }
}

TEST_CASE("radial packet at the origin is dir_count times any single direction") {
    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);
    SpacetimePoint origin{0.0, {0.0, 0.0}};
    double single = packet_eval(p, prof, PacketIndex{0, 0, 17}, origin);
    double radial = radial_packet_eval(p, prof, 0, 0, origin);
    CHECK(radial == doctest::Approx(p.dir_count * single).epsilon(1e-12));
}

TEST_CASE("pruned and unpruned radial sums agree") {
    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        SpacetimePoint pt{rng.uniform(-1.5, 1.5), {rng.uniform(-3, 3), rng.uniform(-3, 3)}};
        int j = rng.uniform_int(0, 1), k = rng.uniform_int(-64, 64);
        double pruned = radial_packet_eval(p, prof, j, k, pt, true);
        double full = radial_packet_eval(p, prof, j, k, pt, false);
        REQUIRE(pruned == doctest::Approx(full).epsilon(1e-12));
    }
}

TEST_CASE("frame serializes into the config format") {
    auto p = make_frame(128, 0.25);
    auto s = frame_to_config(p);
    CHECK(s.find("lambda = 128") != std::string::npos);
    CHECK(s.find("eps0 = 0.25") != std::string::npos);
}
