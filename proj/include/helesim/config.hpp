#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "helesim/dno.hpp"
#include "helesim/evolution.hpp"

namespace helesim {

/// Fully validated run configuration. Parsed from a flat key = value text
/// document (INI section headers are accepted as grouping and otherwise
/// ignored; '#' and ';' start comments). Unknown keys are rejected.
struct RunConfig {
    // grid
    int dim = 1;
    int n = 256;
    int n1 = 64;  // second axis, dim = 2 only
    double period = two_pi;
    double period1 = two_pi;

    // initial condition: flat | single_mode | multi_mode | checkpoint
    std::string ic = "single_mode";
    int ic_k = 1;
    double ic_amplitude = 0.1;
    std::uint64_t ic_seed = 1;
    int ic_modes = 6;
    std::string ic_checkpoint;

    SolverConfig solver;
    StripOracle oracle;

    std::string out_dir = "out";

    // verify-time monitor toggles
    bool verify_lyapunov = true;
    bool verify_max_principle = true;
    bool verify_signs = true;
    bool verify_modulus = true;
    bool verify_energy_identity = true;
    bool verify_bounds = true;
    bool verify_slope_decay = true;

    // sweep axes (empty = keep the base value)
    std::vector<double> sweep_amplitude;
    std::vector<double> sweep_dt;
    std::vector<int> sweep_n;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// The effective configuration rendered back as a parseable document.
std::string render_config(const RunConfig& cfg);

/// Builds the configured initial state (reads the checkpoint when ic is
/// "checkpoint"; t0 receives the checkpoint time, 0 otherwise).
SurfaceState make_initial_state(const RunConfig& cfg);

} // namespace helesim
