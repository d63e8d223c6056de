#include "helesim/field.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "fft_engine.hpp"
#include "spectral_util.hpp"

namespace helesim {

namespace {

std::mutex cache_mutex;

void check_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) throw InvalidFieldError("field contains NaN or Inf");
}

} // namespace

namespace symbols {

MultiplierSymbol identity() {
    return {[](const WaveVector&) { return Complex{1.0, 0.0}; }, "identity"};
}

MultiplierSymbol abs_xi() {
    return {[](const WaveVector& w) { return Complex{w.abs(), 0.0}; }, "|xi|"};
}

MultiplierSymbol derivative(int axis) {
    return {[axis](const WaveVector& w) {
                // The self-paired Nyquist mode has no odd derivative.
                if (w.nyquist[axis]) return Complex{0.0, 0.0};
                return Complex{0.0, w.xi[axis]};
            },
            axis == 0 ? "i*xi_0" : "i*xi_1"};
}

} // namespace symbols

Field::Field(Grid g, std::vector<double> v) : grid_(g), values_(std::move(v)) {}

Field Field::zeros(const Grid& g) {
    return Field(g, std::vector<double>(g.size(), 0.0));
}

Field Field::constant(const Grid& g, double c) {
    if (!std::isfinite(c)) throw InvalidFieldError("constant is not finite");
    return Field(g, std::vector<double>(g.size(), c));
}

Field Field::from_samples(const Grid& g, std::vector<double> values) {
    if (values.size() != g.size())
        throw ContractError("sample count does not match grid size");
    check_finite(values);
    return Field(g, std::move(values));
}

Field Field::sample(const Grid& g, const std::function<double(double)>& fn) {
    if (g.dim() != 1) throw ContractError("1-d sampler on a 2-d grid");
    std::vector<double> v(g.size());
    for (int i = 0; i < g.extent(0); ++i) v[i] = fn(g.coord(0, i));
    check_finite(v);
    return Field(g, std::move(v));
}

Field Field::sample(const Grid& g, const std::function<double(double, double)>& fn) {
    if (g.dim() != 2) throw ContractError("2-d sampler on a 1-d grid");
    std::vector<double> v(g.size());
    for (int i = 0; i < g.extent(0); ++i)
        for (int j = 0; j < g.extent(1); ++j)
            v[g.flat(i, j)] = fn(g.coord(0, i), g.coord(1, j));
    check_finite(v);
    return Field(g, std::move(v));
}

Field Field::from_spectrum(const Grid& g, const std::vector<Complex>& coeffs) {
    if (coeffs.size() != g.size())
        throw ContractError("coefficient count does not match grid size");
    double imag = 0.0;
    std::vector<double> v = detail::synthesize(g, coeffs, &imag);
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (imag > 1e-12 * std::max(scale, 1e-300) && imag > 1e-300)
        throw ContractError("spectrum is not Hermitian: imaginary residue " +
                            std::to_string(imag));
    check_finite(v);
    return Field(g, std::move(v));
}

const std::vector<Complex>& Field::spectrum() const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        if (cache_) return *cache_;
    }
    auto spec = std::make_shared<const std::vector<Complex>>(
        detail::analyze(grid_, values_.data()));
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (!cache_) cache_ = std::move(spec);
    return *cache_;
}

double Field::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double Field::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double Field::sup_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

double Field::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
}

Field Field::map(const std::function<double(double)>& fn) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(values_[i]);
    check_finite(v);
    return Field(grid_, std::move(v));
}

void require_same_grid(const Field& a, const Field& b) {
    if (a.grid() != b.grid())
        throw ContractError("fields live on different grids");
}

Field apply_fourier_multiplier(const Field& f, const MultiplierSymbol& m) {
    const Grid& g = f.grid();
    const int n0 = g.extent(0);
    const int n1 = g.dim() == 2 ? g.extent(1) : 1;

    // Hermitian contract: m(-xi) = conj(m(xi)) on every resolved mode; the
    // Nyquist bins are self-paired, so m must be real there.
    std::vector<Complex> mv(g.size());
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            mv[g.flat(i, j)] = m.eval(detail::wavevector(g, i, j));
        }
    }
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const int ii = (n0 - i) % n0;
            const int jj = (n1 - j) % n1;
            const Complex a = mv[g.flat(i, j)];
            const Complex b = mv[g.flat(ii, jj)];
            if (std::abs(b - std::conj(a)) > 1e-12 * (1.0 + std::abs(a)))
                throw ContractError("symbol '" + m.name +
                                    "' is not Hermitian on the resolved lattice");
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw ContractError("symbol '" + m.name + "' is not finite");
        }
    }

    std::vector<Complex> spec = f.spectrum();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= mv[i];
    return Field::from_spectrum(g, spec);
}

Field derivative(const Field& f, int axis) {
    if (axis < 0 || axis >= f.grid().dim())
        throw ContractError("derivative axis out of range");
    return apply_fourier_multiplier(f, symbols::derivative(axis));
}

VectorField gradient(const Field& f) {
    VectorField out;
    for (int d = 0; d < f.grid().dim(); ++d) out.comp.push_back(derivative(f, d));
    return out;
}

double integrate(const Field& f) {
    double s = std::accumulate(f.values().begin(), f.values().end(), 0.0);
    return s * f.grid().cell_volume();
}

Field multiply_dealiased(const Field& a, const Field& b) {
    require_same_grid(a, b);
    const Grid& g = a.grid();
    std::vector<double> fa = detail::upsample2(g, a.spectrum());
    std::vector<double> fb = detail::upsample2(g, b.spectrum());
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    return Field::from_spectrum(g, detail::downsample2(g, fa));
}

Field translate(const Field& f, int shift0, int shift1) {
    const Grid& g = f.grid();
    std::vector<double> v(g.size());
    const int n0 = g.extent(0);
    const int n1 = g.dim() == 2 ? g.extent(1) : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            const int si = ((i - shift0) % n0 + n0) % n0;
            const int sj = ((j - shift1) % n1 + n1) % n1;
            v[g.flat(i, j)] = f[g.flat(si, sj)];
        }
    }
    return Field::from_samples(g, std::move(v));
}

namespace {
Field binary(const Field& a, const Field& b, double (*op)(double, double)) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
    return Field::from_samples(a.grid(), std::move(v));
}
} // namespace

Field operator+(const Field& a, const Field& b) {
    return binary(a, b, [](double x, double y) { return x + y; });
}
Field operator-(const Field& a, const Field& b) {
    return binary(a, b, [](double x, double y) { return x - y; });
}
Field operator*(const Field& a, const Field& b) {
    return binary(a, b, [](double x, double y) { return x * y; });
}
Field operator/(const Field& a, const Field& b) {
    return binary(a, b, [](double x, double y) { return x / y; });
}
Field operator*(double s, const Field& a) {
    return a.map([s](double x) { return s * x; });
}
Field operator+(const Field& a, double c) {
    return a.map([c](double x) { return x + c; });
}
Field operator-(const Field& a, double c) {
    return a.map([c](double x) { return x - c; });
}

double l2_norm(const Field& f) { return std::sqrt(integrate(f * f)); }

double dot(const Field& a, const Field& b) { return integrate(a * b); }

} // namespace helesim
