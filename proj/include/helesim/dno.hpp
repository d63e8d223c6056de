#pragma once

#include <vector>

#include "helesim/field.hpp"

namespace helesim {

/// Configuration of the operator-expansion evaluation of G(h): the operator
/// is expanded in powers of h about the flat interface (leading term |D|),
/// truncated at max_order. Divergence is detected empirically: term norms
/// must decay geometrically past a burn-in of two orders, or the evaluation
/// throws ExpansionDivergenceError.
struct DnoExpansion {
    int max_order = 8;
    bool dealias = true;
    /// Expected geometric tail ratio; sustained growth of term norms above
    /// 1/threshold over two consecutive orders flags divergence.
    double convergence_ratio_threshold = 0.8;
    /// Precondition on ||grad h||_inf for the expansion to be attempted.
    double slope_bound = 0.8;
};

enum class BottomCondition {
    homogeneous_neumann,
    dirichlet_flat_decay,  // pins the bottom trace to the mean of psi
};

/// Elliptic reference discretization: the infinite-depth domain is truncated
/// at depth L and mapped column-affinely onto a strip; the Laplace problem is
/// discretized with bilinear (dim 1) / trilinear (dim 2) elements on the
/// flattened coordinates, second order in the mesh width, with an O(e^-L)
/// depth-truncation error.
struct StripOracle {
    double depth = 8.0;
    int vertical_cells = 256;
    BottomCondition bottom = BottomCondition::homogeneous_neumann;
    double tolerance = 1e-10;  // iterative residual tolerance (2-d surfaces)
};

/// Flat-interface operator |D|: the zero mode maps to 0.
Field dno_flat(const Field& psi);

/// Truncated operator-expansion evaluation of G(h)psi. The mean of h is
/// irrelevant (vertical translation invariance) and is removed before
/// expanding; the zero mode of the output is pinned to 0.
Field dno_apply(const Field& h, const Field& psi, const DnoExpansion& cfg = {});

/// Term-by-term diagnostics of the expansion (norm of each order).
std::vector<double> dno_expansion_term_norms(const Field& h, const Field& psi,
                                             const DnoExpansion& cfg);

/// Discrete solution of the strip problem, exposing the interior for
/// cross-checks against surface quantities.
class OracleSolution {
  public:
    OracleSolution(Field h, StripOracle cfg, Field flux,
                   std::vector<double> nodal);

    const Field& boundary_flux() const { return flux_; }

    /// Vertical derivative of the potential traced at the free surface,
    /// one-sided second-order difference in the flattened coordinate.
    Field surface_dy() const;

    /// Nodal potential; vertical index j=0 is the bottom, j=vertical_cells
    /// the surface. Column-major per surface point.
    const std::vector<double>& nodal_values() const { return nodal_; }

  private:
    Field h_;
    StripOracle cfg_;
    Field flux_;
    std::vector<double> nodal_;
};

/// G(h)psi from the elliptic strip solve. Preconditions: depth >= 4*max|h|.
/// The returned conormal derivative sqrt(1+|grad h|^2) d_n phi is recovered
/// from the variationally consistent boundary flux, which makes the discrete
/// operator symmetric positive semidefinite exactly (and exactly mean-free
/// under the Neumann bottom condition).
Field dno_oracle(const Field& h, const Field& psi, const StripOracle& cfg = {});
OracleSolution dno_oracle_solve(const Field& h, const Field& psi,
                                const StripOracle& cfg = {});

/// Shape derivative dG(h)psi . zeta = -G(h)(B zeta) - div(V zeta) with
/// B = (G(h)psi + grad h . grad psi)/(1+|grad h|^2), V = grad psi - B grad h.
Field shape_derivative(const Field& h, const Field& psi, const Field& zeta,
                       const DnoExpansion& cfg = {});

} // namespace helesim
