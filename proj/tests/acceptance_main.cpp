// Acceptance suite: runs every calibrated experiment end to end and prints one
// pass/fail line per criterion. Exit code = number of failed criteria.
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "wpl/config.hpp"
#include "wpl/experiments.hpp"
#include "wpl/fit.hpp"
#include "wpl/frame.hpp"
#include "wpl/overlap.hpp"
#include "wpl/packet_bounds.hpp"
#include "wpl/parallel.hpp"
#include "wpl/superposition.hpp"

using namespace wpl;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_guarded(int id, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& ex) {
        report(id, name, false, std::string("exception: ") + ex.what());
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

RunOptions opts_with_checks() {
    RunOptions o;
    o.check = true;
    o.workers = 0;
    return o;
}

bool checks_with_prefix(const ScalingReport& rep, const std::string& prefix, std::string& detail) {
    bool all = true;
    bool any = false;
    for (const auto& c : rep.checks) {
        if (c.name.rfind(prefix, 0) != 0) continue;
        any = true;
        all = all && c.pass;
        if (!c.pass) detail += " " + c.name + "=" + fmt(c.value);
    }
    return any && all;
}

// ------------------------------------------------------------------ 1 and 2

void criteria_overlap() {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 64, 128, 256\n"
        "eps0 = 0.25, 0.0625\n"
        "pairs = 1000\n"
        "seed = 1\n");
    auto rep = run_experiment("overlap-scan", cfg, opts_with_checks());
    std::string d1, d2;
    bool p1 = checks_with_prefix(rep, "N1", d1);
    report(1, "overlap scaling of the large-offset class", p1,
           d1.empty() ? "spread and slope within band" : d1);
    bool p2 = checks_with_prefix(rep, "N2", d2);
    report(2, "overlap scaling of the tangential class", p2,
           d2.empty() ? "spread and slope within band" : d2);
}

// ------------------------------------------------------------------------ 3

void criterion_envelope() {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 64, 128, 256\n"
        "eps0 = 0.25\n");
    auto rep = run_experiment("linf-scan", cfg, opts_with_checks());
    const double c_env = rep.summary["max_ratio_overall"].get<double>();
    const long viol = rep.summary["zero_violations_total"].get<long>();
    const bool pass = c_env <= 10.0 && viol == 0;
    report(3, "radial packet envelope dominance", pass,
           "max ratio " + fmt(c_env) + ", vanishing-region violations " + std::to_string(viol));
}

// ------------------------------------------------------------------------ 4

void criterion_disjointness() {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 64, 128, 256, 512\n"
        "eps0 = 0.25, 0.0625\n"
        "M = 1, 2, 4\n");
    auto rep = run_experiment("disjointness", cfg, opts_with_checks());
    std::string d;
    bool pass = rep.checks_passed();
    for (const auto& c : rep.checks)
        if (!c.pass) d += " " + c.name + "=" + fmt(c.value);
    report(4, "rotated tube disjointness thresholds", pass,
           d.empty() ? "k_star bands, j_star, monotonicity, sampling clean" : d);
}

// ------------------------------------------------------------------------ 5

void criterion_reduce_a3() {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 64, 256\n"
        "seeds = 100\n"
        "seed = 1\n");
    auto rep = run_experiment("reduceA3", cfg, opts_with_checks());
    std::string d;
    bool pass = rep.checks_passed();
    for (const auto& c : rep.checks) d += " " + c.name + "=" + fmt(c.value) + (c.pass ? "" : "!");
    report(5, "discrete model norm against the normalized bound", pass, d.substr(1));
}

// ------------------------------------------------------------------------ 6

void criterion_dispersive() {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 64, 128, 256\n"
        "eps0 = 0.25, 0.0625\n"
        "seeds = 20\n"
        "seed = 1\n"
        "classwise = true\n");
    auto rep = run_experiment("dispersive-sweep", cfg, opts_with_checks());
    std::string d;
    bool pass = rep.checks_passed();
    for (const auto& c : rep.checks) d += " " + c.name + "=" + fmt(c.value) + (c.pass ? "" : "!");
    report(6, "dispersive norm ratios bounded across cells", pass, d.substr(1));
}

// ------------------------------------------------------------------------ 7

void criterion_strichartz() {
    auto cfg = ExperimentConfig::from_string(
        "lambda = 32, 64, 128, 256, 512\n"
        "s = 1.6\n"
        "control_s = 1.0\n");
    auto rep = run_experiment("strichartz-sweep", cfg, opts_with_checks());
    const double slope = rep.summary["fit_main"]["slope"].get<double>();
    const double ctrl = rep.summary["fit_control"]["slope"].get<double>();
    const bool pass = slope <= 0.1 && ctrl >= 0.4;
    report(7, "radial Strichartz sweep", pass,
           "ratio slope " + fmt(slope) + " (<= 0.1), control slope " + fmt(ctrl) + " (>= 0.4)");
}

// ------------------------------------------------------------------------ 8

void criterion_picard() {
    auto cfg = ExperimentConfig::from_string(
        "amplitude = 0.01\n"
        "s = 1.6\n"
        "T = 0.25\n"
        "tol = 1e-9\n");
    auto rep = run_experiment("picard-run", cfg, opts_with_checks());
    std::string d;
    bool pass = rep.checks_passed();
    for (const auto& c : rep.checks) d += " " + c.name + "=" + fmt(c.value) + (c.pass ? "" : "!");
    report(8, "contraction solve for the semilinear equation", pass, d.substr(1));
}

// ------------------------------------------------------------------------ 9

void criterion_stability() {
    auto cfg = ExperimentConfig::from_string(
        "delta = 0.1, 0.01, 0.001, 0.0001\n"
        "s = 1.6\n"
        "T = 0.25\n");
    auto rep = run_experiment("stability", cfg, opts_with_checks());
    std::string d;
    bool pass = rep.checks_passed();
    for (const auto& c : rep.checks) d += " " + c.name + "=" + fmt(c.value) + (c.pass ? "" : "!");
    report(9, "two-solution stability bound", pass, d.substr(1));
}

// ----------------------------------------------------------------------- 10

void criterion_energy() {
    auto cfg = ExperimentConfig::from_string(
        "r_order = 2\n"
        "lambda = 32, 64, 128, 256\n");
    auto rep = run_experiment("energy-check", cfg, opts_with_checks());
    std::string d;
    bool pass = rep.checks_passed();
    for (const auto& c : rep.checks) d += " " + c.name + "=" + fmt(c.value) + (c.pass ? "" : "!");
    report(10, "frozen-metric energy and flat dispersive quantity", pass, d.substr(1));
}

// ----------------------------------------------------------------------- 11

void criterion_exact_invariants() {
    std::string fails;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) fails += " " + what;
    };

    // discrete model: split identity and range, 1e4 random draws
    {
        Rng rng(101);
        bool ident = true, range = true;
        for (int i = 0; i < 10000; ++i) {
            int k = rng.uniform_int(-256, 256);
            double t = rng.uniform(-2.0, 2.0);
            double m = rng.uniform(0.0, 1024.0);
            auto s = split_fk(k, t, m, 256.0);
            double f = f_k_eval(k, t, m, 256.0);
            ident = ident && (s.sum() == f);
            range = range && f >= 0.0 && f <= 1.0 &&
                    f <= 1.0 / std::sqrt(std::sqrt(1.0 + m * m)) + 1e-15;
        }
        expect(ident, "split identity");
        expect(range, "f range");
    }

    // l2 index change across directions
    {
        auto p = make_frame(64, 0.25);
        auto cv = CoefficientVector::zeros(p, 3, 20);
        Rng rng(55);
        for (auto& v : cv.a) v = rng.gaussian();
        const double lhs = l2_norm_jkw(cv, p.dir_count);
        const double rhs = std::sqrt(static_cast<double>(p.dir_count)) * cv.l2_norm();
        expect(std::fabs(lhs - rhs) <= 1e-12 * rhs, "l2 index change");
    }

    // packet shift covariance on dyadic inputs, exact
    {
        auto p = make_frame(64, 0.25);
        auto prof = make_profiles(p);
        Rng rng(7);
        bool exact = true;
        for (int trial = 0; trial < 100; ++trial) {
            int k = rng.uniform_int(-64, 64), kp = rng.uniform_int(-64, 64);
            double t = rng.uniform_int(-64, 64) / 64.0;
            double tp = t + (k - kp) / 64.0;
            if (std::fabs(t) > 2.0 || std::fabs(tp) > 2.0) continue;
            SpacetimePoint pt{t, {rng.uniform_int(-128, 128) / 64.0, rng.uniform_int(-128, 128) / 64.0}};
            exact = exact && packet_eval(p, prof, {1, k, 3}, pt) ==
                                 packet_eval(p, prof, {1, kp, 3}, {tp, pt.x});
        }
        expect(exact, "shift covariance");
    }

    // counting partition and symmetry on sampled pairs
    {
        auto p = make_frame(64, 0.25);
        ClassThresholds th;
        auto sampler = default_pair_sampler(4242);
        bool part = true, sym = true, vanish = true;
        for (std::uint64_t i = 0; i < 200; ++i) {
            auto q = sampler(p, i);
            auto c = count_class(p, th, q);
            part = part && c.total() == count_class(p, th, q, ClassTag::A1) +
                                            count_class(p, th, q, ClassTag::A2) +
                                            count_class(p, th, q, ClassTag::A3);
            OverlapQuery sw{q.p2, q.p1};
            auto cs = count_class(p, th, sw);
            sym = sym && c.n1 == cs.n1 && c.n2 == cs.n2 && c.n3 == cs.n3 &&
                  n_lambda(p, q) == n_lambda(p, sw);
            if (q.m() > p.c_small * p.sigma + 4.0 / p.lambda + 2.0 * p.sigma) {
                vanish = vanish && n_lambda(p, q) == 0;
            }
        }
        expect(part, "count partition");
        expect(sym, "count symmetry");
        expect(vanish, "count vanishing");
    }

    // norm homogeneity under a -> 2a
    {
        auto a = ModelCoefficients::zeros(32);
        Rng rng(77);
        for (auto& v : a.a) v = rng.gaussian();
        double n1 = superposed_model_norm(a, 64).value;
        for (auto& v : a.a) v *= 2.0;
        double n2 = superposed_model_norm(a, 64).value;
        expect(std::fabs(n2 - 2.0 * n1) <= 1e-12 * n2, "model norm homogeneity");
    }

    report(11, "exact invariant bundle", fails.empty(),
           fails.empty() ? "all identities hold" : fails);
}

}  // namespace

int main() {
    std::printf("acceptance suite: wave packet laboratory\n");
    run_guarded(1, "overlap scaling (criteria 1-2)", [] { criteria_overlap(); });
    run_guarded(3, "envelope", [] { criterion_envelope(); });
    run_guarded(4, "disjointness", [] { criterion_disjointness(); });
    run_guarded(5, "discrete model", [] { criterion_reduce_a3(); });
    run_guarded(6, "dispersive", [] { criterion_dispersive(); });
    run_guarded(7, "strichartz", [] { criterion_strichartz(); });
    run_guarded(8, "picard", [] { criterion_picard(); });
    run_guarded(9, "stability", [] { criterion_stability(); });
    run_guarded(10, "energy", [] { criterion_energy(); });
    run_guarded(11, "exact invariants", [] { criterion_exact_invariants(); });
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
