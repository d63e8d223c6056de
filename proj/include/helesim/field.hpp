#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "helesim/grid.hpp"

namespace helesim {

using Complex = std::complex<double>;

/// Integer wavevector of one Fourier mode, with physical components
/// xi_d = k_d * 2*pi/L_d. The Nyquist bin is presented as +N/2 and is
/// self-paired under k -> -k (flagged, since odd symbols must vanish there).
struct WaveVector {
    int dim = 1;
    std::array<int, 2> k{0, 0};
    std::array<double, 2> xi{0.0, 0.0};
    std::array<bool, 2> nyquist{false, false};

    double abs() const {
        return dim == 2 ? std::hypot(xi[0], xi[1]) : std::abs(xi[0]);
    }
};

/// Diagonal Fourier multiplier m(xi). Operators mapping real fields to real
/// fields must satisfy m(-xi) = conj(m(xi)) on the resolved lattice.
struct MultiplierSymbol {
    std::function<Complex(const WaveVector&)> eval;
    std::string name = "custom";
};

namespace symbols {
MultiplierSymbol identity();
MultiplierSymbol abs_xi();              // |xi|, the flat-interface DNO symbol
MultiplierSymbol derivative(int axis);  // i*xi_axis, Nyquist mode pinned to zero
} // namespace symbols

/// Real scalar field sampled on a periodic Grid. Values are the source of
/// truth; the normalized Fourier coefficients (forward transform divided by
/// the point count, FFT layout) are derived lazily and shared between
/// copies. Fields are immutable once constructed.
class Field {
  public:
    static Field zeros(const Grid& g);
    static Field constant(const Grid& g, double c);
    static Field from_samples(const Grid& g, std::vector<double> values);
    /// Sample fn(x) in 1-d or fn(x0, x1) in 2-d at the lattice points.
    static Field sample(const Grid& g, const std::function<double(double)>& fn);
    static Field sample(const Grid& g,
                        const std::function<double(double, double)>& fn);
    /// Inverse transform of FFT-layout normalized coefficients; the
    /// imaginary residue must be below 1e-12 relative.
    static Field from_spectrum(const Grid& g, const std::vector<Complex>& coeffs);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Normalized Fourier coefficients, computed on first use.
    const std::vector<Complex>& spectrum() const;

    double min_value() const;
    double max_value() const;
    double sup_abs() const;
    double mean() const;

    Field map(const std::function<double(double)>& fn) const;

  private:
    Field(Grid g, std::vector<double> v);

    Grid grid_;
    std::vector<double> values_;
    mutable std::shared_ptr<const std::vector<Complex>> cache_;
};

/// One Field per axis.
struct VectorField {
    std::vector<Field> comp;

    int dim() const { return static_cast<int>(comp.size()); }
    const Grid& grid() const { return comp.front().grid(); }
    const Field& operator[](int axis) const { return comp[axis]; }
};

// -- spectral operations -----------------------------------------------------

/// Returns the field with coefficients m(xi) * c(xi). The zero mode is
/// multiplied by m(0). No dealiasing here; that belongs to products.
Field apply_fourier_multiplier(const Field& f, const MultiplierSymbol& m);

/// Per-axis spectral derivative, exact for band-limited fields.
VectorField gradient(const Field& f);
Field derivative(const Field& f, int axis);

/// Rectangle-rule quadrature over the torus: volume * mean(samples).
/// Spectrally accurate for smooth periodic integrands.
double integrate(const Field& f);

/// Pointwise product evaluated on a zero-padded grid (padding factor 2,
/// alias-free for quadratic products), truncated back to the base grid.
Field multiply_dealiased(const Field& a, const Field& b);

/// Circular shift by whole lattice cells: g(x) = f(x - shift*dx).
Field translate(const Field& f, int shift0, int shift1 = 0);

// -- pointwise arithmetic (no dealiasing) ------------------------------------

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator/(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field operator+(const Field& a, double c);
Field operator-(const Field& a, double c);

double l2_norm(const Field& f);  // sqrt(integrate(f^2))
double dot(const Field& a, const Field& b);

/// Throws InvalidFieldError if the two fields live on different grids.
void require_same_grid(const Field& a, const Field& b);

} // namespace helesim
