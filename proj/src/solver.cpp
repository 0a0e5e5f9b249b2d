#include "wpl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpl {

namespace {

void check_same_basis(const SolverState& a, const SolverState& b, const char* where) {
    if (a.basis != b.basis) throw std::invalid_argument(std::string(where) + ": basis mismatch");
}

double support_radius_of(const RadialField& f) {
    const auto& basis = *f.basis;
    std::vector<double> s = basis.samples_from_coeffs(f.c);
    double mx = 0.0;
    for (double v : s) mx = std::fmax(mx, std::fabs(v));
    if (mx == 0.0) return 0.0;
    const double tol = 1e-9 * mx;
    for (int i = basis.quad_points() - 1; i >= 0; --i) {
        if (std::fabs(s[i]) > tol) return basis.quad_r(i);
    }
    return 0.0;
}

}  // namespace

SolverState make_state(const RadialField& u0, const RadialField& u1) {
    if (u0.basis != u1.basis) throw std::invalid_argument("make_state: basis mismatch");
    SolverState s;
    s.basis = u0.basis;
    s.c = u0.c;
    s.cdot = u1.c;
    s.time = 0.0;
    s.support_radius = std::fmax(support_radius_of(u0), support_radius_of(u1));
    return s;
}

SolverState linear_propagate(const SolverState& s, double dt) {
    SolverState out = s;
    const auto& basis = *s.basis;
    const int n = basis.modes();
    for (int i = 0; i < n; ++i) {
        const double xi = basis.xi(i);
        const double cs = std::cos(xi * dt);
        const double sn = std::sin(xi * dt);
        const double c = s.c[i], cd = s.cdot[i];
        out.c[i] = cs * c + sn / xi * cd;
        out.cdot[i] = -xi * sn * c + cs * cd;
    }
    out.time = s.time + dt;
    if (s.support_radius + std::fabs(out.time) >= basis.radius()) out.boundary_warning = true;
    return out;
}

Trajectory duhamel_solve(const SolverState& data, const SourceFn& source, double T, int nt) {
    if (nt < 1) throw std::invalid_argument("duhamel_solve: need nt >= 1 steps");
    const auto& basis = *data.basis;
    const double xi_max = basis.xi(basis.modes() - 1);
    const double dt = T / nt;
    if (std::fabs(dt) * xi_max > 0.5 + 1e-12) {
        throw std::invalid_argument(
            "duhamel_solve: step too large, require xi_max * |dt| <= 1/2 (nt >= " +
            std::to_string(static_cast<long>(std::ceil(std::fabs(T) * xi_max / 0.5))) + ")");
    }
    Trajectory traj;
    traj.times.resize(nt + 1);
    traj.states.reserve(nt + 1);
    traj.states.push_back(data);
    traj.times[0] = data.time;
    std::vector<double> f_prev = source ? source(data.time) : std::vector<double>();
    const int n = basis.modes();
    for (int step = 1; step <= nt; ++step) {
        const SolverState& cur = traj.states.back();
        SolverState next = linear_propagate(cur, dt);
        if (source) {
            // trapezoid-in-s Duhamel increment: half the propagated old source
            // plus half the new one, injected in the velocity component
            std::vector<double> f_next = source(next.time);
            if (static_cast<int>(f_prev.size()) != n || static_cast<int>(f_next.size()) != n) {
                throw std::invalid_argument("duhamel_solve: source coefficient size mismatch");
            }
            for (int i = 0; i < n; ++i) {
                const double xi = basis.xi(i);
                const double cs = std::cos(xi * dt);
                const double sn = std::sin(xi * dt);
                next.c[i] += 0.5 * dt * (sn / xi) * f_prev[i];
                next.cdot[i] += 0.5 * dt * (cs * f_prev[i] + f_next[i]);
            }
            f_prev = std::move(f_next);
        }
        traj.times[step] = next.time;
        traj.states.push_back(std::move(next));
    }
    return traj;
}

double dpair_norm(const SolverState& s, double ord) {
    const auto& basis = *s.basis;
    double acc = 0.0;
    for (int i = 0; i < basis.modes(); ++i) {
        const double xi = basis.xi(i);
        const double wmul = std::pow(1.0 + xi * xi, ord) * basis.weight(i);
        acc += wmul * (s.cdot[i] * s.cdot[i] + xi * xi * s.c[i] * s.c[i]);
    }
    return std::sqrt(acc);
}

double dpair_norm_diff(const SolverState& a, const SolverState& b, double ord) {
    check_same_basis(a, b, "dpair_norm_diff");
    const auto& basis = *a.basis;
    double acc = 0.0;
    for (int i = 0; i < basis.modes(); ++i) {
        const double xi = basis.xi(i);
        const double wmul = std::pow(1.0 + xi * xi, ord) * basis.weight(i);
        const double dc = a.c[i] - b.c[i];
        const double dcd = a.cdot[i] - b.cdot[i];
        acc += wmul * (dcd * dcd + xi * xi * dc * dc);
    }
    return std::sqrt(acc);
}

double dsup_norm(const SolverState& s) {
    const auto& basis = *s.basis;
    std::vector<double> ut, ur;
    basis.sup_samples(s.cdot, ut);
    basis.sup_dr_samples(s.c, ur);
    double mx = 0.0;
    for (std::size_t i = 0; i < ut.size(); ++i) mx = std::fmax(mx, std::hypot(ut[i], ur[i]));
    return mx;
}

namespace {

// l^2-in-t of per-slice values with trapezoid weights over the trajectory grid
double l2_in_time(const std::vector<double>& vals, double dt) {
    double acc = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double w = (i == 0 || i + 1 == vals.size()) ? 0.5 : 1.0;
        acc += w * vals[i] * vals[i];
    }
    return std::sqrt(acc * std::fabs(dt));
}

double l1_in_time(const std::vector<double>& vals, double dt) {
    double acc = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double w = (i == 0 || i + 1 == vals.size()) ? 0.5 : 1.0;
        acc += w * vals[i];
    }
    return acc * std::fabs(dt);
}

std::vector<double> every_other(const std::vector<double>& vals) {
    std::vector<double> half;
    for (std::size_t i = 0; i < vals.size(); i += 2) half.push_back(vals[i]);
    return half;
}

double rel_change(double fine, double coarse) {
    const double scale = std::fmax(std::fmax(fine, coarse), 1e-300);
    return std::fabs(fine - coarse) / scale;
}

}  // namespace

StrichartzResult strichartz_ratio(const SolverState& data, double s, double T, int nt) {
    if (!(s > 1.0)) throw std::invalid_argument("strichartz_ratio: requires s > 1");
    const double den = dpair_norm(data, s - 1.0);
    if (den == 0.0) throw std::invalid_argument("strichartz_ratio: zero data");
    if (nt < 2) throw std::invalid_argument("strichartz_ratio: need nt >= 2");

    auto sweep = [&](int steps) {
        std::vector<double> sups(steps + 1);
        SolverState cur = data;
        sups[0] = dsup_norm(cur);
        const double dt = T / steps;
        for (int i = 1; i <= steps; ++i) {
            cur = linear_propagate(cur, dt);
            sups[i] = dsup_norm(cur);
        }
        return l2_in_time(sups, dt);
    };

    StrichartzResult out;
    out.numerator = sweep(nt);
    out.denominator = den;
    out.ratio = out.numerator / den;
    const double coarse = sweep(nt / 2);
    out.resolution_error = std::fabs(out.numerator - coarse) / std::fmax(out.numerator, 1e-300);
    return out;
}

namespace {

// Coefficients of p(u) u_t^2 + q(u) u_r^2 at one time slice.
std::vector<double> nonlinearity_coeffs(const SolverState& s, const Nonlinearity& nl) {
    const auto& basis = *s.basis;
    std::vector<double> u = basis.samples_from_coeffs(s.c);
    std::vector<double> ut = basis.samples_from_coeffs(s.cdot);
    std::vector<double> ur = basis.dr_samples_from_coeffs(s.c);
    std::vector<double> f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        f[i] = nl.p(u[i]) * ut[i] * ut[i] + nl.q(u[i]) * ur[i] * ur[i];
    }
    return basis.coeffs_from_samples(f);
}

Trajectory apply_pi(const SolverState& data, const Nonlinearity& nl, const Trajectory& prev,
                    double T, int nt) {
    // source interpolates the previous iterate at the shared grid times
    auto source = [&](double t) {
        const double dt = T / nt;
        int idx = static_cast<int>(std::llround((t - data.time) / dt));
        idx = std::clamp(idx, 0, nt);
        return nonlinearity_coeffs(prev.at(idx), nl);
    };
    return duhamel_solve(data, source, T, nt);
}

double traj_diff_norm(const Trajectory& a, const Trajectory& b, double ord) {
    double mx = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        mx = std::fmax(mx, dpair_norm_diff(a.states[i], b.states[i], ord));
    }
    return mx;
}

}  // namespace

PicardResult picard_solve(const SolverState& data, const Nonlinearity& nl, double s, double T,
                          double tol, int max_iter, int nt) {
    if (!(s > 1.5)) throw std::invalid_argument("picard_solve: requires s > 3/2");
    if (!(std::fabs(T) <= 1.0) || T == 0.0) {
        throw std::invalid_argument("picard_solve: requires 0 < |T| <= 1");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
    const auto& basis = *data.basis;
    const double xi_max = basis.xi(basis.modes() - 1);
    if (nt <= 0) nt = static_cast<int>(std::ceil(std::fabs(T) * xi_max / 0.45)) + 1;

    const double ord = s - 1.0;
    PicardResult res;
    Trajectory cur = duhamel_solve(data, nullptr, T, nt);  // linear seed
    for (int it = 1; it <= max_iter; ++it) {
        Trajectory next = apply_pi(data, nl, cur, T, nt);
        const double delta = traj_diff_norm(next, cur, ord);
        res.trace.deltas.push_back(delta);
        if (res.trace.deltas.size() >= 2) {
            const double prev = res.trace.deltas[res.trace.deltas.size() - 2];
            res.trace.factors.push_back(prev > 0.0 ? delta / prev : 0.0);
        }
        cur = std::move(next);
        res.iterations = it;
        if (delta < tol) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged) {
        throw PicardNonConvergence(
            "picard_solve: no contraction to tol within " + std::to_string(max_iter) +
                " iterations (last delta " + std::to_string(res.trace.deltas.back()) +
                "); a smaller T typically restores the contraction",
            res.trace);
    }
    // defect of one more application: the discrete residual of the fixed point
    Trajectory extra = apply_pi(data, nl, cur, T, nt);
    res.residual = traj_diff_norm(extra, cur, ord);
    std::vector<double> sups(cur.states.size());
    for (std::size_t i = 0; i < cur.states.size(); ++i) sups[i] = dsup_norm(cur.states[i]);
    res.l2linf_norm = l2_in_time(sups, T / nt);
    res.l2linf_res_err =
        rel_change(res.l2linf_norm, l2_in_time(every_other(sups), 2.0 * T / nt));
    res.traj = std::move(cur);
    return res;
}

StabilityResult stability_check(const SolverState& u_data, const SolverState& v_data,
                                const Nonlinearity& nl, double s, double T, double tol,
                                int max_iter) {
    check_same_basis(u_data, v_data, "stability_check");
    PicardResult u = picard_solve(u_data, nl, s, T, tol, max_iter);
    PicardResult v = picard_solve(v_data, nl, s, T, tol, max_iter);

    StabilityResult out;
    std::vector<double> su(u.traj.states.size()), sv(v.traj.states.size());
    for (std::size_t i = 0; i < u.traj.states.size(); ++i) {
        out.lhs = std::fmax(out.lhs, dpair_norm_diff(u.traj.states[i], v.traj.states[i], 0.0));
        su[i] = dsup_norm(u.traj.states[i]);
        sv[i] = dsup_norm(v.traj.states[i]);
    }
    const double dt = T / u.traj.steps();
    out.b_l1linf = l1_in_time(su, dt) + l1_in_time(sv, dt);
    out.b_res_err = rel_change(
        out.b_l1linf, l1_in_time(every_other(su), 2.0 * dt) + l1_in_time(every_other(sv), 2.0 * dt));

    const auto& basis = *u_data.basis;
    double h1 = 0.0, l2 = 0.0;
    for (int i = 0; i < basis.modes(); ++i) {
        const double xi = basis.xi(i);
        const double dc = u_data.c[i] - v_data.c[i];
        const double dcd = u_data.cdot[i] - v_data.cdot[i];
        h1 += (1.0 + xi * xi) * dc * dc * basis.weight(i);
        l2 += dcd * dcd * basis.weight(i);
    }
    out.data_diff = std::sqrt(h1 + l2);
    if (out.lhs > out.data_diff && out.data_diff > 0.0) {
        out.fitted_c = std::log(out.lhs / out.data_diff) / (std::fabs(T) + out.b_l1linf);
    }
    return out;
}

EnergyCheckResult energy_estimate_check(const std::optional<std::function<double(double)>>& g,
                                        const RadialField& v0, const RadialField& v1,
                                        double r_order, double T, int nr) {
    if (!(r_order >= 1.0 && r_order <= 3.0)) {
        throw std::invalid_argument("energy_estimate_check: r_order must lie in [1, 3]");
    }
    const auto basis = v0.basis;
    EnergyCheckResult out;

    auto energy = [&](const SolverState& s) {
        double acc = 0.0;
        for (int i = 0; i < basis->modes(); ++i) {
            const double xi = basis->xi(i);
            acc += std::pow(1.0 + xi * xi, r_order - 1.0) * basis->weight(i) *
                   (xi * xi * s.c[i] * s.c[i] + s.cdot[i] * s.cdot[i]);
        }
        return std::sqrt(acc);
    };
    auto literal = [&](const SolverState& s) {
        RadialField a = RadialField::from_coeffs(basis, s.c);
        RadialField b = RadialField::from_coeffs(basis, s.cdot);
        return hs_norm(a, r_order) + hs_norm(b, r_order - 1.0);
    };

    SolverState init = make_state(v0, v1);
    const double e0 = energy(init);
    const double lit0 = literal(init);
    if (e0 == 0.0 || lit0 == 0.0) {
        throw std::invalid_argument("energy_estimate_check: zero data");
    }

    if (!g) {
        out.flat = true;
        const double xi_max = basis->xi(basis->modes() - 1);
        const int nt = static_cast<int>(std::ceil(T * xi_max / 0.45)) + 2;
        const double rho = r_order - 0.6;
        SolverState cur = init;
        double e_max = e0, lit_max = lit0;
        std::vector<double> rho_sups(nt + 1);
        std::vector<double> samples;
        std::vector<double> weighted(basis->modes());
        for (int i = 0; i <= nt; ++i) {
            if (i > 0) cur = linear_propagate(cur, T / nt);
            e_max = std::fmax(e_max, energy(cur));
            lit_max = std::fmax(lit_max, literal(cur));
            for (int n = 0; n < basis->modes(); ++n) {
                const double xi = basis->xi(n);
                weighted[n] = std::pow(1.0 + xi * xi, 0.5 * rho) * cur.c[n];
            }
            basis->sup_samples(weighted, samples);
            double mx = 0.0;
            for (double v : samples) mx = std::fmax(mx, std::fabs(v));
            rho_sups[i] = mx;
        }
        out.energy_ratio = e_max / e0;
        out.literal_ratio = lit_max / lit0;
        const double striqlw = l2_in_time(rho_sups, T / nt);
        out.striqlw_ratio = striqlw / lit0;
        out.striqlw_res_err = rel_change(striqlw, l2_in_time(every_other(rho_sups), 2.0 * T / nt));
        out.nr = 0;
        return out;
    }

    // frozen smooth metric: finite differences on nr cells, data sampled from
    // the spectral series directly on the FD grid
    std::vector<double> r(nr + 1), w0(nr + 1), w1(nr + 1);
    const double R = basis->radius();
    for (int i = 0; i <= nr; ++i) r[i] = R * i / nr;
    for (int i = 0; i <= nr; ++i) {
        double a0 = 0.0, a1 = 0.0;
        for (int n = 0; n < basis->modes(); ++n) {
            const double b = ::j0(basis->zero(n) * r[i] / R);
            a0 += b * v0.c[n];
            a1 += b * v1.c[n];
        }
        w0[i] = a0;
        w1[i] = a1;
    }
    FdTrajectory fd = fd_wave_solve(*g, w0, w1, nr, R, T, std::max(1, nr / 64));

    // project stored slices back onto the basis for the Sobolev functionals
    double e_max = e0, lit_max = lit0;
    for (std::size_t sidx = 0; sidx < fd.times.size(); ++sidx) {
        std::vector<double> vq(basis->quad_points()), vtq(basis->quad_points());
        const double h = R / nr;
        for (int m = 0; m < basis->quad_points(); ++m) {
            const double rq = basis->quad_r(m);
            // cubic Lagrange interpolation on the uniform FD grid
            int i1 = static_cast<int>(rq / h);
            i1 = std::clamp(i1, 1, nr - 2);
            const double x = rq / h - i1;
            auto cubic = [&](const std::vector<double>& f) {
                const double fm1 = f[i1 - 1], f0 = f[i1], f1 = f[i1 + 1], f2 = f[i1 + 2];
                return fm1 * (-x * (x - 1.0) * (x - 2.0) / 6.0) +
                       f0 * ((x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0) +
                       f1 * (-(x + 1.0) * x * (x - 2.0) / 2.0) +
                       f2 * ((x + 1.0) * x * (x - 1.0) / 6.0);
            };
            vq[m] = cubic(fd.v[sidx]);
            vtq[m] = cubic(fd.vt[sidx]);
        }
        SolverState st;
        st.basis = basis;
        st.c = basis->coeffs_from_samples(vq);
        st.cdot = basis->coeffs_from_samples(vtq);
        e_max = std::fmax(e_max, energy(st));
        lit_max = std::fmax(lit_max, literal(st));
    }
    out.flat = false;
    out.energy_ratio = e_max / e0;
    out.literal_ratio = lit_max / lit0;
    out.striqlw_ratio = 0.0;
    out.nr = nr;
    return out;
}

}  // namespace wpl
