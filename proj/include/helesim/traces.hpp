#pragma once

#include <map>
#include <string>

#include "helesim/dno.hpp"
#include "helesim/field.hpp"

namespace helesim {

/// Surface quantities derived from h at one instant. dt_h is the exact
/// substitution -G(h)h, never a finite difference in time.
struct Traces {
    Field gh;             // G(h)h
    Field dt_h;           // -G(h)h
    VectorField grad_h;
    Field B;              // (G(h)h + |grad h|^2)/(1 + |grad h|^2)
    VectorField V;        // (1-B) grad h, exact by construction
    Field a;              // 1 - B, Rayleigh-Taylor coefficient
    Field gamma;
    double lambda_scale;  // max over the grid of a*sqrt(1+|grad h|^2)
    VectorField W;        // sqrt(a) grad h
    Field Z;              // sqrt(a) dt h
    Field Y;              // (1-B) dt h

    // cached operator applications reused by the identity residuals
    Field gB;             // G(h)B
    VectorField gV;       // G(h)V_i per axis
};

/// L2 and Linf norms of each exact-identity residual, plus the sign flags.
struct ResidualReport {
    struct Norms {
        double l2 = 0.0;
        double linf = 0.0;
    };
    std::map<std::string, Norms> residuals;
    double rellich = 0.0;       // |R5|, the scalar Rellich integral
    double min_a = 0.0;
    double max_gamma = 0.0;
    double gamma_scale = 0.0;   // ||gamma||_inf
    bool a_positive = false;
    bool gamma_nonpositive = false;  // max_gamma <= 1e-6 * gamma_scale
};

/// Light companion of compute_traces for the time stepper: one G(h)h
/// evaluation gives the Rayleigh-Taylor coefficient and the stabilizer scale.
struct RayleighData {
    Field gh;
    Field a;
    double lambda_scale;
    double min_a;
};

RayleighData rayleigh_data(const Field& h, const DnoExpansion& cfg = {});

/// Throws DegenerateStateError when min a <= 0 (numerical breakdown of the
/// Rayleigh-Taylor condition); sqrt(a) is taken only after that check, with
/// no clamping.
Traces compute_traces(const Field& h, const DnoExpansion& cfg = {});

/// Residuals of the exact identities:
///   R1   G(h)B + div V
///   R2_i d_i B - G(h)V_i - (d_i h) G(h)B - sum_j (d_j h)(d_i V_j)
///   R3   d_x B - G(h)V                        (n = 1)
///   R4   G(h)(B^2) - 2B G(h)B - G(h)(V^2) + 2V G(h)V   (n = 1)
///   R5   |integral of (|V|^2 - B^2 + 2B V.grad h)|     (Rellich)
///   R6   B^2 + |V|^2 - [(G(h)h)^2 + |grad h|^2]/(1 + |grad h|^2)
ResidualReport identity_residuals(const Field& h, const Traces& tr,
                                  const DnoExpansion& cfg = {});

} // namespace helesim
