#pragma once

#include <array>
#include <cstddef>
#include <numbers>

#include "helesim/errors.hpp"

namespace helesim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform collocation lattice on the periodic torus, dimension 1 or 2.
/// Per-axis resolution must be an even power of two >= 8; period defaults
/// to 2*pi per axis.
class Grid {
  public:
    Grid(int n0, double period0 = two_pi)
        : dim_(1), n_{n0, 1}, period_{period0, 0.0} {
        validate();
    }
    Grid(int n0, int n1, double period0 = two_pi, double period1 = two_pi)
        : dim_(2), n_{n0, n1}, period_{period0, period1} {
        validate();
    }

    int dim() const { return dim_; }
    int extent(int axis) const { return n_[axis]; }
    double period(int axis) const { return period_[axis]; }
    double spacing(int axis) const { return period_[axis] / n_[axis]; }

    std::size_t size() const {
        return static_cast<std::size_t>(n_[0]) * (dim_ == 2 ? n_[1] : 1);
    }
    /// Measure of the torus, |T^n|.
    double volume() const {
        return dim_ == 2 ? period_[0] * period_[1] : period_[0];
    }
    double cell_volume() const { return volume() / static_cast<double>(size()); }

    /// Physical coordinate of lattice index i along an axis.
    double coord(int axis, int i) const { return spacing(axis) * i; }

    /// Row-major flat index; axis 0 is the slow index in 2-d.
    std::size_t flat(int i0, int i1 = 0) const {
        return dim_ == 2 ? static_cast<std::size_t>(i0) * n_[1] + i1
                         : static_cast<std::size_t>(i0);
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        if (a.dim_ != b.dim_) return false;
        for (int d = 0; d < a.dim_; ++d)
            if (a.n_[d] != b.n_[d] || a.period_[d] != b.period_[d]) return false;
        return true;
    }
    friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

  private:
    void validate() const {
        for (int d = 0; d < dim_; ++d) {
            const int n = n_[d];
            if (n < 8 || (n & (n - 1)) != 0)
                throw ContractError("grid resolution must be a power of two >= 8");
            if (!(period_[d] > 0.0))
                throw ContractError("grid period must be positive");
        }
    }

    int dim_;
    std::array<int, 2> n_;
    std::array<double, 2> period_;
};

} // namespace helesim
