#include "helesim/evolution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "helesim/diagnostics.hpp"
#include "spectral_util.hpp"

namespace helesim {

Field rhs(const Field& h, const DnoExpansion& cfg) {
    return -1.0 * dno_apply(h, h, cfg);
}

SurfaceState step_imex(const SurfaceState& s, const SolverConfig& cfg) {
    RayleighData rd = rayleigh_data(s.h, cfg.dno);
    if (!(rd.min_a > 0.0)) {
        std::ostringstream os;
        os << "degenerate state at t = " << s.t << ": min a = " << rd.min_a;
        throw DegenerateStateError(os.str());
    }
    const double c = cfg.stabilizer_margin * rd.lambda_scale;
    const Grid& g = s.h.grid();

    // h+ = h - dt * Gh / (1 + dt c |xi|), diagonal in Fourier space.
    std::vector<Complex> spec = s.h.spectrum();
    const std::vector<Complex>& gh = rd.gh.spectrum();
    const int n0 = g.extent(0);
    const int n1 = g.dim() == 2 ? g.extent(1) : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const std::size_t p = g.flat(i, j);
            const double axi = detail::wavevector(g, i, j).abs();
            spec[p] -= cfg.dt * gh[p] / (1.0 + cfg.dt * c * axi);
        }
    }
    return SurfaceState{Field::from_spectrum(g, spec), s.t + cfg.dt};
}

SurfaceState step_rk4(const SurfaceState& s, const SolverConfig& cfg) {
    const Grid& g = s.h.grid();
    double dx_min = g.spacing(0);
    for (int d = 1; d < g.dim(); ++d) dx_min = std::min(dx_min, g.spacing(d));
    if (cfg.dt > cfg.cfl_number * dx_min) {
        std::ostringstream os;
        os << "rk4 CFL violation: dt = " << cfg.dt << " exceeds "
           << cfg.cfl_number << " * dx = " << cfg.cfl_number * dx_min;
        throw PreconditionError(os.str());
    }
    const double dt = cfg.dt;
    Field k1 = rhs(s.h, cfg.dno);
    Field k2 = rhs(s.h + 0.5 * dt * k1, cfg.dno);
    Field k3 = rhs(s.h + 0.5 * dt * k2, cfg.dno);
    Field k4 = rhs(s.h + dt * k3, cfg.dno);
    Field h1 = s.h + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return SurfaceState{std::move(h1), s.t + dt};
}

Trajectory run(const Field& h0, const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || cfg.record_every < 1)
        throw ContractError("solver config out of range");
    const long nsteps = std::lround(cfg.t_end / cfg.dt);

    Trajectory traj;
    SurfaceState s{h0, 0.0};
    double last_l2 = 0.0;

    auto record = [&](const SurfaceState& st) {
        Traces tr = compute_traces(st.h, cfg.dno);
        FunctionalRecord rec = functionals(st.h, tr, cfg.p_list, cfg.dno, st.t);
        if (!traj.records.empty() &&
            rec.l2p.at(1) > last_l2 + cfg.energy_increase_tol) {
            std::ostringstream os;
            os << "L2 energy grew from " << last_l2 << " to " << rec.l2p.at(1)
               << " at t = " << st.t;
            throw DegenerateStateError(os.str());
        }
        last_l2 = rec.l2p.at(1);
        traj.times.push_back(st.t);
        traj.states.push_back(st);
        traj.records.push_back(std::move(rec));
    };

    try {
        record(s);
        for (long step = 1; step <= nsteps; ++step) {
            s = cfg.scheme == Scheme::imex1 ? step_imex(s, cfg) : step_rk4(s, cfg);
            if (step % cfg.record_every == 0) record(s);
        }
    } catch (const Error& e) {
        traj.completed = false;
        traj.termination_reason = e.what();
    }
    return traj;
}

ComparisonReport compare_pair(const Field& h1, const Field& h2,
                              const SolverConfig& cfg) {
    require_same_grid(h1, h2);
    for (std::size_t i = 0; i < h1.size(); ++i)
        if (h1[i] > h2[i])
            throw PreconditionError("compare_pair: initial data not ordered");

    Field r1 = rhs(h1, cfg.dno);
    Field r2 = rhs(h2, cfg.dno);
    const double rsup = std::max(r1.sup_abs(), r2.sup_abs());

    Trajectory t1 = run(h1, cfg);
    if (!t1.completed)
        throw Error("compare_pair: lower trajectory failed: " +
                    t1.termination_reason);
    Trajectory t2 = run(h2, cfg);
    if (!t2.completed)
        throw Error("compare_pair: upper trajectory failed: " +
                    t2.termination_reason);

    ComparisonReport rep;
    rep.run1_completed = t1.completed;
    rep.run2_completed = t2.completed;
    rep.tolerance = 1e-8 + 10.0 * cfg.dt * rsup;
    rep.min_difference = std::numeric_limits<double>::infinity();
    rep.max_difference = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < t1.states.size(); ++k) {
        const Field& a = t1.states[k].h;
        const Field& b = t2.states[k].h;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = b[i] - a[i];
            rep.min_difference = std::min(rep.min_difference, d);
            rep.max_difference = std::max(rep.max_difference, d);
        }
    }
    rep.ordered = rep.min_difference >= -rep.tolerance;
    return rep;
}

} // namespace helesim
