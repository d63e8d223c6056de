#pragma once

#include <complex>

namespace helesim::detail {

// In-place unnormalized c2c transforms (FFTW backend). Plans are cached per
// (n0, n1, direction) behind a mutex and created with FFTW_ESTIMATE so plan
// choice, and therefore round-off, is identical from run to run.
// 1-d transforms pass n1 = 0.
void fft_forward(int n0, int n1, std::complex<double>* data);
void fft_inverse(int n0, int n1, std::complex<double>* data);

} // namespace helesim::detail
