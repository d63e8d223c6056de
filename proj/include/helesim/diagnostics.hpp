#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helesim/evolution.hpp"
#include "helesim/records.hpp"

namespace helesim {

/// C^2 convex test function with pointwise evaluators.
struct ConvexTestFn {
    std::function<double(double)> value;
    std::function<double(double)> first;
    std::function<double(double)> second;
    std::string name = "phi";
};

namespace convex {
ConvexTestFn square();     // r^2
ConvexTestFn fourth();     // r^4
ConvexTestFn exponential();
} // namespace convex

/// Empirical tightest modulus of continuity of a grid field: bound(i) is the
/// largest |f(x1)-f(x2)| over pairs at torus distance <= distance(i).
struct Modulus {
    std::vector<double> distance;  // sorted distinct lattice distances
    std::vector<double> bound;     // nondecreasing, bound(0 distance) = 0

    double operator()(double d) const;
};

/// Evaluates every monitored functional at one state. p_list must be a
/// subset of {1} union the even positive integers.
FunctionalRecord functionals(const Field& h, const Traces& tr,
                             const std::vector<int>& p_list,
                             const DnoExpansion& cfg, double t);

struct MaxPrincipleVerdict {
    double initial = 0.0;   // reference level (sup at t=0, or the threshold M)
    double excess = 0.0;    // max over t>0 of sup D h(t) minus the reference
    bool pass = false;
};

/// Sharp maximum principle monitor: for D in {dt, d_x1, ..., d_xn, -d_xi}
/// and |h| itself, the sup over the torus must not exceed its initial value
/// (or a caller-supplied threshold M) along the trajectory.
std::map<std::string, MaxPrincipleVerdict> max_principle_report(
    const Trajectory& traj,
    const std::map<std::string, double>& thresholds = {}, double tol = 1e-6);

/// Minimum over the grid of Phi'(f) G(h)f - G(h)(Phi(f)); nonnegative up to
/// discretization error by the DNO convexity inequality.
double convexity_check(const Field& h, const Field& f, const ConvexTestFn& phi,
                       const DnoExpansion& cfg = {});

Modulus empirical_modulus(const Field& f);

/// Max over pairs of |h_test(x1)-h_test(x2)| - omega(d(x1,x2)) where omega is
/// the empirical modulus of h_ref. Guard: at most 512 points per axis in 1-d,
/// 64 in 2-d (pair enumeration is O(N^{2n})).
double modulus_check(const Field& h_ref, const Field& h_test);

struct EnergyIdentityResult {
    /// max over interior records of |centered dt of (integral h G(h)h)
    /// + integral a (h_t^2 + |grad h|^2)|
    double max_residual = 0.0;
    /// min over interior records of the raw centered second difference of
    /// the L2 energy integral h^2 (convexity of the energy decay)
    double min_second_difference = 0.0;
};

/// Requires >= 3 records at uniform spacing.
EnergyIdentityResult energy_identity_residual(const Trajectory& traj);

} // namespace helesim
