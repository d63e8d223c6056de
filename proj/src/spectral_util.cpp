#include "spectral_util.hpp"

#include <cmath>

#include "fft_engine.hpp"

namespace helesim::detail {

WaveVector wavevector(const Grid& g, int i0, int i1) {
    WaveVector w;
    w.dim = g.dim();
    w.k[0] = signed_mode(i0, g.extent(0));
    w.xi[0] = w.k[0] * (two_pi / g.period(0));
    w.nyquist[0] = i0 == g.extent(0) / 2;
    if (g.dim() == 2) {
        w.k[1] = signed_mode(i1, g.extent(1));
        w.xi[1] = w.k[1] * (two_pi / g.period(1));
        w.nyquist[1] = i1 == g.extent(1) / 2;
    }
    return w;
}

namespace {

// Per-axis scatter of one coarse bin into the fine layout: normal modes map
// to one bin with weight 1, the Nyquist bin splits into +-N/2 with weight 1/2.
struct BinImage {
    int idx[2];
    double w[2];
    int count;
};

BinImage pad_image(int idx, int n, int nfine) {
    BinImage b{};
    if (idx < n / 2) {
        b.idx[0] = idx;
        b.w[0] = 1.0;
        b.count = 1;
    } else if (idx == n / 2) {
        b.idx[0] = n / 2;
        b.w[0] = 0.5;
        b.idx[1] = nfine - n / 2;
        b.w[1] = 0.5;
        b.count = 2;
    } else {
        b.idx[0] = nfine - (n - idx);
        b.w[0] = 1.0;
        b.count = 1;
    }
    return b;
}

} // namespace

std::vector<Complex> pad2(const Grid& g, const std::vector<Complex>& c) {
    const int n0 = g.extent(0);
    const int p0 = 2 * n0;
    if (g.dim() == 1) {
        std::vector<Complex> out(p0, Complex{0.0, 0.0});
        for (int i = 0; i < n0; ++i) {
            BinImage b = pad_image(i, n0, p0);
            for (int s = 0; s < b.count; ++s) out[b.idx[s]] += b.w[s] * c[i];
        }
        return out;
    }
    const int n1 = g.extent(1);
    const int p1 = 2 * n1;
    std::vector<Complex> out(static_cast<std::size_t>(p0) * p1, Complex{0.0, 0.0});
    for (int i = 0; i < n0; ++i) {
        BinImage bi = pad_image(i, n0, p0);
        for (int j = 0; j < n1; ++j) {
            BinImage bj = pad_image(j, n1, p1);
            const Complex v = c[static_cast<std::size_t>(i) * n1 + j];
            for (int s = 0; s < bi.count; ++s)
                for (int t = 0; t < bj.count; ++t)
                    out[static_cast<std::size_t>(bi.idx[s]) * p1 + bj.idx[t]] +=
                        bi.w[s] * bj.w[t] * v;
        }
    }
    return out;
}

std::vector<Complex> truncate2(const Grid& g, const std::vector<Complex>& cpad) {
    const int n0 = g.extent(0);
    const int p0 = 2 * n0;
    if (g.dim() == 1) {
        std::vector<Complex> out(n0, Complex{0.0, 0.0});
        for (int i = 0; i < n0; ++i) {
            BinImage b = pad_image(i, n0, p0);
            for (int s = 0; s < b.count; ++s) out[i] += cpad[b.idx[s]];
        }
        return out;
    }
    const int n1 = g.extent(1);
    const int p1 = 2 * n1;
    std::vector<Complex> out(static_cast<std::size_t>(n0) * n1, Complex{0.0, 0.0});
    for (int i = 0; i < n0; ++i) {
        BinImage bi = pad_image(i, n0, p0);
        for (int j = 0; j < n1; ++j) {
            BinImage bj = pad_image(j, n1, p1);
            Complex acc{0.0, 0.0};
            for (int s = 0; s < bi.count; ++s)
                for (int t = 0; t < bj.count; ++t)
                    acc += cpad[static_cast<std::size_t>(bi.idx[s]) * p1 + bj.idx[t]];
            out[static_cast<std::size_t>(i) * n1 + j] = acc;
        }
    }
    return out;
}

std::vector<double> upsample2(const Grid& g, const std::vector<Complex>& c) {
    std::vector<Complex> fine = pad2(g, c);
    const int p0 = 2 * g.extent(0);
    const int p1 = g.dim() == 2 ? 2 * g.extent(1) : 0;
    fft_inverse(p0, p1, fine.data());
    std::vector<double> out(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) out[i] = fine[i].real();
    return out;
}

std::vector<Complex> downsample2(const Grid& g, const std::vector<double>& fine) {
    std::vector<Complex> buf(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) buf[i] = Complex{fine[i], 0.0};
    const int p0 = 2 * g.extent(0);
    const int p1 = g.dim() == 2 ? 2 * g.extent(1) : 0;
    fft_forward(p0, p1, buf.data());
    const double scale = 1.0 / static_cast<double>(buf.size());
    for (auto& v : buf) v *= scale;
    return truncate2(g, buf);
}

std::vector<Complex> analyze(const Grid& g, const double* samples) {
    std::vector<Complex> buf(g.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = Complex{samples[i], 0.0};
    fft_forward(g.extent(0), g.dim() == 2 ? g.extent(1) : 0, buf.data());
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& v : buf) v *= scale;
    return buf;
}

std::vector<double> synthesize(const Grid& g, std::vector<Complex> coeffs,
                               double* imag_residue) {
    fft_inverse(g.extent(0), g.dim() == 2 ? g.extent(1) : 0, coeffs.data());
    std::vector<double> out(coeffs.size());
    double imax = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        out[i] = coeffs[i].real();
        imax = std::max(imax, std::abs(coeffs[i].imag()));
    }
    if (imag_residue) *imag_residue = imax;
    return out;
}

} // namespace helesim::detail
