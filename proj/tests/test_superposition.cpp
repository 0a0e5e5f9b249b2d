#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpl/parallel.hpp"
#include "wpl/superposition.hpp"

using namespace wpl;

namespace {

// Brute-force model norm: naive loops, no tables, no pruning.
double brute_model_norm(const ModelCoefficients& a, double lambda) {
    const int li = static_cast<int>(lambda);
    const int m_max = 4 * li;
    double acc = 0.0;
    for (int i = -2 * li; i < 2 * li; ++i) {
        const double t = (i + 0.5) / lambda;
        double sup = 0.0;
        for (int m = 0; m <= m_max; ++m) {
            double s = 0.0;
            for (int k = -a.k_half; k <= a.k_half; ++k) {
                s += a.at(k) * f_k_eval(k, t, m, lambda);
            }
            sup = std::fmax(sup, std::fabs(s));
        }
        acc += sup * sup / lambda;
    }
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("f_k point values and bounds") {
    // k=0, t=0, m=0: <0>^{-1/2} <1>^{-1/2} = 2^{-1/4}
    CHECK(f_k_eval(0, 0.0, 0.0, 64) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));
    // Heaviside vanishing
    CHECK(f_k_eval(10, 0.0, 5.0, 64) == 0.0);
    // boundary m = |k + t lambda| - 1 has H(0) = 1, value <m>^{-1/2}
    CHECK(f_k_eval(10, 0.0, 9.0, 64) ==
          doctest::Approx(1.0 / std::sqrt(std::sqrt(1.0 + 81.0))).epsilon(1e-14));

    Rng rng(31);
    for (int trial = 0; trial < 10000; ++trial) {
        int k = rng.uniform_int(-64, 64);
        double t = rng.uniform(-2, 2);
        double m = rng.uniform(0, 256);
        double f = f_k_eval(k, t, m, 64);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
        REQUIRE(f <= 1.0 / std::sqrt(std::sqrt(1.0 + m * m)) + 1e-15);
    }
}

TEST_CASE("split_fk: cases and the exact identity") {
    // k + t lambda = 5: the forward piece carries everything
    {
        auto s = split_fk(5, 0.0, 10.0, 64);
        double f = f_k_eval(5, 0.0, 10.0, 64);
        CHECK(s.fplus == f);
        CHECK(s.fminus == 0.0);
        CHECK(s.f0 == 0.0);
    }
    // k + t lambda = 0: all in the core piece
    {
        auto s = split_fk(0, 0.0, 3.0, 64);
        CHECK(s.f0 == f_k_eval(0, 0.0, 3.0, 64));
        CHECK(s.fplus == 0.0);
        CHECK(s.fminus == 0.0);
    }
    Rng rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        int k = rng.uniform_int(-128, 128);
        double t = rng.uniform(-2, 2);
        double m = rng.uniform(0, 300);
        auto s = split_fk(k, t, m, 64);
        double f = f_k_eval(k, t, m, 64);
        REQUIRE(s.sum() == f);  // exact: the pieces are f times indicators
        REQUIRE(s.f0 * s.fplus == 0.0);
        REQUIRE(s.f0 * s.fminus == 0.0);
    }
}

TEST_CASE("model norm: zero, single packet vs brute force, monotonicity") {
    const double lambda = 64;
    auto zero = ModelCoefficients::zeros(16);
    CHECK(superposed_model_norm(zero, lambda).value == 0.0);

    for (int k0 : {0, 11, 32}) {
        auto a = ModelCoefficients::zeros(48);
        a.at(k0) = 1.0;
        auto nr = superposed_model_norm(a, lambda);
        const double brute = brute_model_norm(a, lambda);
        CAPTURE(k0);
        CHECK(nr.value == doctest::Approx(brute).epsilon(1e-12));
        // single-packet scale: <= C lambda^{-1/2} (ln lambda)^{1/2} with C pinned at 2
        CHECK(nr.value <= 2.0 * std::sqrt(std::log(lambda) / lambda));
    }

    // random vector against brute force
    {
        auto a = ModelCoefficients::zeros(40);
        Rng rng(123);
        for (auto& v : a.a) v = rng.gaussian();
        auto nr = superposed_model_norm(a, lambda, 2);
        CHECK(nr.value == doctest::Approx(brute_model_norm(a, lambda)).epsilon(1e-12));
        CHECK(nr.resolution_error < 0.2);
    }

    // nonnegative coefficients: raising one coefficient cannot lower the norm
    {
        auto a = ModelCoefficients::zeros(20);
        Rng rng(5);
        for (auto& v : a.a) v = std::fabs(rng.gaussian());
        double base = superposed_model_norm(a, lambda).value;
        a.at(-7) += 0.5;
        CHECK(superposed_model_norm(a, lambda).value >= base);
    }

    CHECK_THROWS_AS(superposed_model_norm(ModelCoefficients::zeros(100), 64),
                    std::invalid_argument);  // support beyond the window
}

TEST_CASE("reduceA3_check: zero rejection, gaussian and adversarial bands") {
    const double lambda = 128;
    CHECK_THROWS_AS(reduceA3_check(ModelCoefficients::zeros(8), lambda), std::invalid_argument);

    double mx = 0.0;
    for (int s = 0; s < 5; ++s) {
        auto a = ModelCoefficients::zeros(static_cast<int>(lambda));
        Rng rng(900 + s);
        for (auto& v : a.a) v = rng.gaussian();
        mx = std::fmax(mx, reduceA3_check(a, lambda, 2));
    }
    CHECK(mx > 0.0);
    CHECK(mx <= 10.0);

    // slowly decaying profile probes the ln factor; stays within a factor band
    auto adv = ModelCoefficients::zeros(static_cast<int>(lambda));
    for (int k = 1; k <= static_cast<int>(lambda); ++k) adv.at(k) = 1.0 / std::sqrt(double(k));
    const double r = reduceA3_check(adv, lambda, 2);
    CHECK(r <= 8.0 * mx);
    CHECK(r >= mx / 64.0);
}

TEST_CASE("homogeneity: both model and dispersive norms scale linearly") {
    const double lambda = 64;
    auto a = ModelCoefficients::zeros(32);
    Rng rng(77);
    for (auto& v : a.a) v = rng.gaussian();
    auto one = superposed_model_norm(a, lambda);
    for (auto& v : a.a) v *= 2.0;
    auto two = superposed_model_norm(a, lambda);
    CHECK(two.value == doctest::Approx(2.0 * one.value).epsilon(1e-12));

    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);
    auto cv = CoefficientVector::zeros(p, 2, 16);
    Rng rng2(78);
    for (auto& v : cv.a) v = rng2.gaussian();
    double n1 = dispersive_norm(p, prof, cv).value;
    for (auto& v : cv.a) v *= 2.0;
    double n2 = dispersive_norm(p, prof, cv).value;
    CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-12));
}

TEST_CASE("coefficient window validation") {
    auto p = make_frame(64, 0.25);
    CHECK_THROWS_WITH_AS(CoefficientVector::zeros(p, 99, 10), doctest::Contains("window"),
                         std::invalid_argument);
    CHECK_THROWS_AS(CoefficientVector::zeros(p, 2, 2000), std::invalid_argument);
    auto cv = CoefficientVector::zeros(p, 2, 16);
    CHECK_THROWS_AS(cv.at(3, 0), std::out_of_range);
    CHECK_THROWS_AS(cv.at(0, 17), std::out_of_range);
}

TEST_CASE("l2 index change: direction-constant coefficients gain sqrt(D)") {
    auto p = make_frame(64, 0.25);
    auto cv = CoefficientVector::zeros(p, 3, 24);
    Rng rng(41);
    for (auto& v : cv.a) v = rng.gaussian();
    const double jk = cv.l2_norm();
    const double jkw = l2_norm_jkw(cv, p.dir_count);
    CHECK(jkw == doctest::Approx(std::sqrt(double(p.dir_count)) * jk).epsilon(1e-12));
}

TEST_CASE("dispersive norm: zero field, single packet against the direct oracle") {
    auto p = make_frame(64, 0.25);
    auto prof = make_profiles(p);
    auto zero = CoefficientVector::zeros(p, 1, 4);
    CHECK(dispersive_norm(p, prof, zero).value == 0.0);

    // single coefficient: the norm of one radial packet, direct slow evaluation
    auto cv = CoefficientVector::zeros(p, 0, 0);
    cv.at(0, 0) = 1.0;
    SupNormGrid grid;
    auto fast = dispersive_norm(p, prof, cv, grid);

    double acc = 0.0;
    const int nt = static_cast<int>(4.0 * p.lambda);
    const double dr = 0.25 / p.lambda;
    const double r_max = 2.0 / p.lambda + p.sigma + 1.0 / p.lambda + 2.0 + 0.1;
    for (int it = 0; it <= nt; ++it) {
        const double t = -2.0 + 4.0 * it / nt;
        double sup = 0.0;
        for (double r = 0.0; r <= r_max; r += dr) {
            for (int ia = 0; ia < 2; ++ia) {
                const double phi = ia * p.angular_step() / 2.0;
                SpacetimePoint pt{t, {r * std::cos(phi), r * std::sin(phi)}};
                sup = std::fmax(sup, std::fabs(radial_packet_eval(p, prof, 0, 0, pt)));
            }
        }
        const double w = (it == 0 || it == nt) ? 0.5 : 1.0;
        acc += w * sup * sup * (4.0 / nt);
    }
    const double direct = std::sqrt(acc);
    CHECK(fast.value == doctest::Approx(direct).epsilon(0.02));

    // scale check: within the theta^{-1} lambda^{-1/2} (ln lambda)^{1/2}
    // ballpark; the focusing spike near t = 0 costs an extra order-one factor
    const double scale = std::sqrt(std::log(p.lambda) / p.lambda) / p.theta;
    CAPTURE(fast.value / scale);
    CHECK(fast.value <= 8.0 * scale);
    CHECK(fast.value >= scale / 16.0);
}

TEST_CASE("classwise dispersive: restriction, triangle inequality, empty class") {
    auto p = make_frame(128, 0.25);
    auto prof = make_profiles(p);
    ClassThresholds th;
    auto cv = CoefficientVector::zeros(p, p.j_window / 2, static_cast<int>(p.lambda));
    Rng rng(55);
    for (auto& v : cv.a) v = rng.gaussian();
    const double n = cv.l2_norm();
    for (auto& v : cv.a) v /= n;

    SupNormGrid grid;
    auto full = dispersive_norm(p, prof, cv, grid, 2);
    double sum_parts = 0.0;
    long populated = 0;
    for (ClassTag tag : {ClassTag::A1, ClassTag::A2, ClassTag::A3}) {
        auto r = restrict_to_class(p, th, cv, tag);
        if (r.is_zero()) continue;
        ++populated;
        sum_parts += dispersive_norm(p, prof, r, grid, 2).value;
        const double ratio = classwise_dispersive(p, prof, cv, th, tag, grid, 2);
        CHECK(ratio > 0.0);
        CHECK(ratio < 50.0);
    }
    CHECK(populated >= 2);
    CHECK(full.value <= sum_parts * (1.0 + 1e-9));

    // a vector supported on one class only: the other classes reject
    auto only3 = CoefficientVector::zeros(p, 0, 1);
    only3.at(0, 0) = 1.0;
    CHECK_THROWS_AS(classwise_dispersive(p, prof, only3, th, ClassTag::A1, grid),
                    std::invalid_argument);
}

TEST_CASE("partition of coefficients by class is exact") {
    auto p = make_frame(128, 0.25);
    ClassThresholds th;
    auto cv = CoefficientVector::zeros(p, 4, 300);
    Rng rng(66);
    for (auto& v : cv.a) v = rng.gaussian();
    auto a1 = restrict_to_class(p, th, cv, ClassTag::A1);
    auto a2 = restrict_to_class(p, th, cv, ClassTag::A2);
    auto a3 = restrict_to_class(p, th, cv, ClassTag::A3);
    for (std::size_t i = 0; i < cv.a.size(); ++i) {
        REQUIRE(cv.a[i] == a1.a[i] + a2.a[i] + a3.a[i]);
    }
}
