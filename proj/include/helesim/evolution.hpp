#pragma once

#include <string>
#include <vector>

#include "helesim/records.hpp"
#include "helesim/traces.hpp"

namespace helesim {

enum class Scheme { imex1, rk4 };

struct SolverConfig {
    Scheme scheme = Scheme::imex1;
    double dt = 1e-3;
    double t_end = 1.0;
    int record_every = 10;
    /// Stabilizer c = margin * max_x a sqrt(1+|grad h|^2); margin >= 1 makes
    /// the linearized implicit step unconditionally stable.
    double stabilizer_margin = 1.1;
    /// rk4 stability restriction dt <= cfl_number * min_axis dx.
    double cfl_number = 0.5;
    DnoExpansion dno;
    std::vector<int> p_list{1, 2, 4};
    /// Early-stop monitor: integral of h^2 may not grow by more than this
    /// between consecutive records.
    double energy_increase_tol = 1e-8;
};

struct SurfaceState {
    Field h;
    double t = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SurfaceState> states;
    std::vector<FunctionalRecord> records;
    bool completed = true;
    std::string termination_reason;  // empty when the run finished cleanly

    const SurfaceState& last() const {
        if (states.empty()) throw PreconditionError("trajectory holds no states");
        return states.back();
    }
};

/// Right-hand side -G(h)h of the surface evolution; mean-free.
Field rhs(const Field& h, const DnoExpansion& cfg = {});

/// One step of h+ = (I + dt c|D|)^{-1} [ h + dt (c|D|h - G(h)h) ] with the
/// stabilizer scale c frozen at the current state. First order in dt;
/// constants are exact fixed points.
SurfaceState step_imex(const SurfaceState& s, const SolverConfig& cfg);

/// Classical four-stage explicit step; fourth order, CFL restricted.
SurfaceState step_rk4(const SurfaceState& s, const SolverConfig& cfg);

/// Integrate to t_end, recording states and functionals every record_every
/// steps. Monitor violations (degenerate state, expansion divergence, NaN,
/// growth of the L2 energy) terminate the run early; the returned trajectory
/// carries the last valid state and the reason.
Trajectory run(const Field& h0, const SolverConfig& cfg);

struct ComparisonReport {
    double min_difference = 0.0;  // min over recorded times and grid of h2-h1
    double max_difference = 0.0;
    double tolerance = 0.0;       // 1e-8 + 10*dt*sup|rhs|
    bool ordered = false;         // min_difference >= -tolerance
    bool run1_completed = true;
    bool run2_completed = true;
};

/// Runs the ordered pair (h1 <= h2 pointwise, else PreconditionError) with
/// identical configuration and reports how well ordering is preserved.
ComparisonReport compare_pair(const Field& h1, const Field& h2,
                              const SolverConfig& cfg);

// Checkpoint format "HSHW1": little-endian u32 dim, per-axis u32 N, per-axis
// f64 period, f64 t, then row-major f64 samples. Bit-exact round trip.
void save_checkpoint(const std::string& path, const SurfaceState& s);
SurfaceState load_checkpoint(const std::string& path);

} // namespace helesim
