#include <cmath>
#include <stdexcept>
#include <vector>

#include "wpl/solver.hpp"

namespace wpl {

namespace {

// v_tt = g(r) (v_rr + v_r / r) + F.  Even extension at r = 0, Dirichlet at R.
struct FdRhs {
    const std::vector<double>& g;
    const std::vector<double>& r;
    double h;
    int nr;

    void operator()(const std::vector<double>& v, std::vector<double>& lap) const {
        lap[0] = 4.0 * (v[1] - v[0]) / (h * h);  // limit of v_rr + v_r/r at the axis
        for (int i = 1; i < nr; ++i) {
            const double vrr = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
            const double vr = (v[i + 1] - v[i - 1]) / (2.0 * h);
            lap[i] = vrr + vr / r[i];
        }
        lap[nr] = 0.0;
        for (int i = 0; i <= nr; ++i) lap[i] *= g[i];
    }
};

}  // namespace

FdTrajectory fd_wave_solve(const std::function<double(double)>& g_fn,
                           const std::vector<double>& v0, const std::vector<double>& v1,
                           int nr, double radius, double T, int store_every,
                           const std::function<double(double, double)>& source,
                           double dt_request) {
    if (nr < 8) throw std::invalid_argument("fd_wave_solve: nr too small");
    if (static_cast<int>(v0.size()) != nr + 1 || static_cast<int>(v1.size()) != nr + 1) {
        throw std::invalid_argument("fd_wave_solve: data size must be nr + 1");
    }
    const double h = radius / nr;
    FdTrajectory out;
    out.r.resize(nr + 1);
    std::vector<double> g(nr + 1);
    double g_max = 0.0;
    for (int i = 0; i <= nr; ++i) {
        out.r[i] = i * h;
        g[i] = g_fn(out.r[i]);
        if (!(g[i] > 0.0)) {
            throw std::invalid_argument("fd_wave_solve: metric profile must be positive, g(" +
                                        std::to_string(out.r[i]) + ") = " + std::to_string(g[i]));
        }
        g_max = std::fmax(g_max, g[i]);
    }
    const double dt_cfl = 0.5 * h / std::sqrt(g_max);
    if (dt_request > 0.0 && dt_request > dt_cfl) {
        throw std::invalid_argument("fd_wave_solve: CFL violation, dt " +
                                    std::to_string(dt_request) + " exceeds the stable step " +
                                    std::to_string(dt_cfl));
    }
    const double step_target = dt_request > 0.0 ? dt_request : dt_cfl;
    const int nt = static_cast<int>(std::ceil(T / step_target));
    const double dt = T / nt;

    FdRhs rhs{g, out.r, h, nr};
    std::vector<double> v = v0, vt = v1;
    v[nr] = 0.0;  // Dirichlet
    vt[nr] = 0.0;
    std::vector<double> k1(nr + 1), k2(nr + 1), k3(nr + 1), k4(nr + 1);
    std::vector<double> v2(nr + 1), vt2(nr + 1), v3(nr + 1), vt3(nr + 1), v4(nr + 1), vt4(nr + 1);

    auto add_source = [&](std::vector<double>& acc, double t) {
        if (!source) return;
        for (int i = 0; i < nr; ++i) acc[i] += source(t, out.r[i]);
    };

    auto store = [&](double t) {
        out.times.push_back(t);
        out.v.push_back(v);
        out.vt.push_back(vt);
    };
    store(0.0);

    double t = 0.0;
    for (int step = 1; step <= nt; ++step) {
        // classical RK4 on the first-order system (v, vt)
        rhs(v, k1);
        add_source(k1, t);
        for (int i = 0; i <= nr; ++i) v2[i] = v[i] + 0.5 * dt * vt[i];
        for (int i = 0; i <= nr; ++i) vt2[i] = vt[i] + 0.5 * dt * k1[i];
        rhs(v2, k2);
        add_source(k2, t + 0.5 * dt);
        for (int i = 0; i <= nr; ++i) v3[i] = v[i] + 0.5 * dt * vt2[i];
        for (int i = 0; i <= nr; ++i) vt3[i] = vt[i] + 0.5 * dt * k2[i];
        rhs(v3, k3);
        add_source(k3, t + 0.5 * dt);
        for (int i = 0; i <= nr; ++i) v4[i] = v[i] + dt * vt3[i];
        for (int i = 0; i <= nr; ++i) vt4[i] = vt[i] + dt * k3[i];
        rhs(v4, k4);
        add_source(k4, t + dt);

        for (int i = 0; i <= nr; ++i) {
            v[i] += dt / 6.0 * (vt[i] + 2.0 * vt2[i] + 2.0 * vt3[i] + vt4[i]);
            vt[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        v[nr] = 0.0;
        vt[nr] = 0.0;
        t += dt;
        if (step % store_every == 0 || step == nt) store(t);
    }
    return out;
}

}  // namespace wpl
