#pragma once

#include <array>
#include <map>

#include "helesim/traces.hpp"

namespace helesim {

/// One timestamped row of every monitored functional. Serialized as one CSV
/// line with a fixed column order (see csv.hpp).
struct FunctionalRecord {
    double t = 0.0;
    std::map<int, double> l2p;        // p -> integral of h^{2p}
    double dirichlet = 0.0;           // integral of h G(h)h
    std::map<int, double> inv_a_lp;   // p -> integral of a^{-p}
    std::map<int, double> slope_fun;  // p -> integral of |V|^{2p}/a   (n = 1)
    double sup_abs_h = 0.0;
    std::array<double, 2> sup_grad{0.0, 0.0};  // per-axis signed sup of d_i h
    std::array<double, 2> inf_grad{0.0, 0.0};  // per-axis signed inf of d_i h
    double sup_abs_grad = 0.0;                 // sup of |grad h|
    double grad_energy = 0.0;                  // integral of |grad h|^2
    double sup_dt = 0.0;                       // sup of dt h = sup of -G(h)h
    double sup_abs_dt = 0.0;                   // sup of |dt h| = sup |G(h)h|
    double inf_a = 0.0;
    double gamma_max = 0.0;
    double gamma_scale = 0.0;
    ResidualReport residuals;
    double energy_dissipation = 0.0;  // integral of a (h_t^2 + |grad h|^2)
    /// p -> integral of V^p G(h)(V^p); the parabolic dissipation of the
    /// slope functional (n = 1).
    std::map<int, double> slope_dissipation;
};

} // namespace helesim
