#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "helesim/evolution.hpp"

namespace helesim {

namespace {

constexpr char magic[5] = {'H', 'S', 'H', 'W', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double x) {
    std::uint64_t v;
    std::memcpy(&v, &x, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double x;
    std::memcpy(&x, &v, 8);
    return x;
}

} // namespace

void save_checkpoint(const std::string& path, const SurfaceState& s) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open checkpoint for writing: " + path);
    os.write(magic, 5);
    const Grid& g = s.h.grid();
    put_u32(os, static_cast<std::uint32_t>(g.dim()));
    for (int d = 0; d < g.dim(); ++d)
        put_u32(os, static_cast<std::uint32_t>(g.extent(d)));
    for (int d = 0; d < g.dim(); ++d) put_f64(os, g.period(d));
    put_f64(os, s.t);
    for (double x : s.h.values()) put_f64(os, x);
    if (!os) throw IoError("short write on checkpoint: " + path);
}

SurfaceState load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint: " + path);
    char m[5];
    is.read(m, 5);
    if (!is || std::memcmp(m, magic, 5) != 0)
        throw IoError("not a HSHW1 checkpoint: " + path);
    const std::uint32_t dim = get_u32(is);
    if (dim != 1 && dim != 2) throw IoError("checkpoint dimension out of range");
    std::uint32_t n[2] = {0, 0};
    for (std::uint32_t d = 0; d < dim; ++d) n[d] = get_u32(is);
    double period[2] = {0.0, 0.0};
    for (std::uint32_t d = 0; d < dim; ++d) period[d] = get_f64(is);
    const double t = get_f64(is);
    Grid g = dim == 1 ? Grid(static_cast<int>(n[0]), period[0])
                      : Grid(static_cast<int>(n[0]), static_cast<int>(n[1]),
                             period[0], period[1]);
    std::vector<double> v(g.size());
    for (double& x : v) x = get_f64(is);
    if (!is) throw IoError("truncated checkpoint: " + path);
    return SurfaceState{Field::from_samples(g, std::move(v)), t};
}

} // namespace helesim
