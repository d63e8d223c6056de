#pragma once

#include <complex>
#include <vector>

#include "helesim/field.hpp"
#include "helesim/grid.hpp"

namespace helesim::detail {

// FFT-layout index -> signed mode number, Nyquist presented as +n/2.
inline int signed_mode(int idx, int n) {
    if (idx == n / 2) return n / 2;
    return idx <= n / 2 ? idx : idx - n;
}

WaveVector wavevector(const Grid& g, int i0, int i1);

// Zero-pad normalized FFT-layout coefficients by a factor of 2 per axis,
// splitting the Nyquist bin symmetrically. Inverse transform of the result
// samples the same trig interpolant on the fine grid.
std::vector<Complex> pad2(const Grid& g, const std::vector<Complex>& c);

// Adjoint of pad2: keep modes |k| <= N/2, folding the +-N/2 fine-grid bins
// back into the coarse Nyquist bin.
std::vector<Complex> truncate2(const Grid& g, const std::vector<Complex>& cpad);

// Physical samples on the doubled grid from base-grid coefficients.
std::vector<double> upsample2(const Grid& g, const std::vector<Complex>& c);

// Base-grid normalized coefficients from physical samples on the doubled grid.
std::vector<Complex> downsample2(const Grid& g, const std::vector<double>& fine);

// Normalized coefficients of base-grid samples.
std::vector<Complex> analyze(const Grid& g, const double* samples);

// Samples from normalized coefficients; imaginary residue returned via *imag.
std::vector<double> synthesize(const Grid& g, std::vector<Complex> coeffs,
                               double* imag_residue = nullptr);

} // namespace helesim::detail
