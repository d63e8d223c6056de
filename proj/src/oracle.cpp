#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <sstream>
#include <vector>

#include "helesim/dno.hpp"
#include "spectral_util.hpp"

namespace helesim {

namespace {

// Samples of a band-limited field at lattice points shifted by frac*dx per
// axis, via a spectral phase shift. The self-paired Nyquist bin picks up
// cos(xi*delta) so the result stays real.
std::vector<double> samples_at_offset(const Grid& g, const std::vector<Complex>& c,
                                      double frac0, double frac1) {
    const int n0 = g.extent(0);
    const int n1 = g.dim() == 2 ? g.extent(1) : 1;
    const double d0 = frac0 * g.spacing(0);
    const double d1 = g.dim() == 2 ? frac1 * g.spacing(1) : 0.0;
    std::vector<Complex> shifted(c.size());
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            WaveVector w = detail::wavevector(g, i, j);
            Complex ph{1.0, 0.0};
            if (w.nyquist[0])
                ph *= std::cos(w.xi[0] * d0);
            else
                ph *= std::exp(Complex{0.0, w.xi[0] * d0});
            if (g.dim() == 2) {
                if (w.nyquist[1])
                    ph *= std::cos(w.xi[1] * d1);
                else
                    ph *= std::exp(Complex{0.0, w.xi[1] * d1});
            }
            shifted[g.flat(i, j)] = ph * c[g.flat(i, j)];
        }
    }
    double imag = 0.0;
    return detail::synthesize(g, std::move(shifted), &imag);
}

constexpr double gauss_lo = 0.5 - 0.5 / 1.7320508075688772;
constexpr double gauss_hi = 0.5 + 0.5 / 1.7320508075688772;

struct Assembled {
    Eigen::SparseMatrix<double> A;  // full stiffness, all nodes
    std::vector<char> fixed;
    std::vector<double> fixed_value;
    std::vector<std::size_t> top;  // node index of each surface point, grid order
};

// Node layout: surface point index times (My+1) plus vertical level,
// level 0 bottom .. My top.
Assembled assemble(const Field& h, const Field& psi, const StripOracle& cfg) {
    const Grid& g = h.grid();
    const double L = cfg.depth;
    const int My = cfg.vertical_cells;
    const double deta = L / My;
    const int lev = My + 1;

    const std::vector<Complex>& hc = h.spectrum();
    std::vector<std::vector<Complex>> dhc(g.dim());
    for (int d = 0; d < g.dim(); ++d) dhc[d] = derivative(h, d).spectrum();

    const double gf[2] = {gauss_lo, gauss_hi};

    std::vector<Eigen::Triplet<double>> trips;
    std::size_t ndof = 0;

    if (g.dim() == 1) {
        const int n = g.extent(0);
        const double dx = g.spacing(0);
        ndof = static_cast<std::size_t>(n) * lev;
        trips.reserve(static_cast<std::size_t>(n) * My * 16);

        // h, h' at the two Gauss abscissae of every column.
        std::vector<double> hq[2], hxq[2];
        for (int q = 0; q < 2; ++q) {
            hq[q] = samples_at_offset(g, hc, gf[q], 0.0);
            hxq[q] = samples_at_offset(g, dhc[0], gf[q], 0.0);
        }

        auto idx = [&](int i, int j) {
            return static_cast<std::size_t>(((i % n) + n) % n) * lev + j;
        };
        double Ke[4][4];
        double dN[4][2];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < My; ++j) {
                for (auto& row : Ke) row[0] = row[1] = row[2] = row[3] = 0.0;
                for (int q = 0; q < 2; ++q) {
                    const double J = 1.0 + hq[q][i] / L;
                    for (int r = 0; r < 2; ++r) {
                        const double eta = -L + deta * (j + gf[r]);
                        const double alpha = hxq[q][i] * (1.0 + eta / L) / J;
                        const double K11 = J;
                        const double K12 = -J * alpha;
                        const double K22 = J * alpha * alpha + 1.0 / J;
                        const double u = gf[q], v = gf[r];
                        dN[0][0] = -(1 - v) / dx; dN[0][1] = -(1 - u) / deta;
                        dN[1][0] = (1 - v) / dx;  dN[1][1] = -u / deta;
                        dN[2][0] = -v / dx;       dN[2][1] = (1 - u) / deta;
                        dN[3][0] = v / dx;        dN[3][1] = u / deta;
                        const double wq = 0.25 * dx * deta;
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b)
                                Ke[a][b] += wq * (K11 * dN[a][0] * dN[b][0] +
                                                  K12 * (dN[a][0] * dN[b][1] +
                                                         dN[a][1] * dN[b][0]) +
                                                  K22 * dN[a][1] * dN[b][1]);
                    }
                }
                const std::size_t nd[4] = {idx(i, j), idx(i + 1, j),
                                           idx(i, j + 1), idx(i + 1, j + 1)};
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        trips.emplace_back(static_cast<int>(nd[a]),
                                           static_cast<int>(nd[b]), Ke[a][b]);
            }
        }
    } else {
        const int n0 = g.extent(0), n1 = g.extent(1);
        const double dx0 = g.spacing(0), dx1 = g.spacing(1);
        ndof = static_cast<std::size_t>(n0) * n1 * lev;
        trips.reserve(static_cast<std::size_t>(n0) * n1 * My * 64);

        // Coefficients at the four horizontal Gauss combinations.
        std::vector<double> hq[2][2], h0q[2][2], h1q[2][2];
        for (int q0 = 0; q0 < 2; ++q0)
            for (int q1 = 0; q1 < 2; ++q1) {
                hq[q0][q1] = samples_at_offset(g, hc, gf[q0], gf[q1]);
                h0q[q0][q1] = samples_at_offset(g, dhc[0], gf[q0], gf[q1]);
                h1q[q0][q1] = samples_at_offset(g, dhc[1], gf[q0], gf[q1]);
            }

        auto idx = [&](int i0, int i1, int j) {
            const int a = ((i0 % n0) + n0) % n0;
            const int b = ((i1 % n1) + n1) % n1;
            return (static_cast<std::size_t>(a) * n1 + b) * lev + j;
        };
        double Ke[8][8];
        double dN[8][3];
        for (int i0 = 0; i0 < n0; ++i0) {
            for (int i1 = 0; i1 < n1; ++i1) {
                const std::size_t cell = g.flat(i0, i1);
                for (int j = 0; j < My; ++j) {
                    for (auto& row : Ke) std::fill(row, row + 8, 0.0);
                    for (int q0 = 0; q0 < 2; ++q0)
                        for (int q1 = 0; q1 < 2; ++q1) {
                            const double J = 1.0 + hq[q0][q1][cell] / L;
                            for (int r = 0; r < 2; ++r) {
                                const double eta = -L + deta * (j + gf[r]);
                                const double fac = (1.0 + eta / L) / J;
                                const double a0 = h0q[q0][q1][cell] * fac;
                                const double a1 = h1q[q0][q1][cell] * fac;
                                const double Kzz = J * (a0 * a0 + a1 * a1) + 1.0 / J;
                                const double u = gf[q0], v = gf[q1], s = gf[r];
                                // trilinear shape gradients; node order
                                // (i0+du, i1+dv, j+ds), du fastest
                                for (int c = 0; c < 8; ++c) {
                                    const int du = c & 1, dv = (c >> 1) & 1,
                                              ds = (c >> 2) & 1;
                                    const double fu = du ? u : 1 - u;
                                    const double fv = dv ? v : 1 - v;
                                    const double fs = ds ? s : 1 - s;
                                    const double su = du ? 1.0 : -1.0;
                                    const double sv = dv ? 1.0 : -1.0;
                                    const double ss = ds ? 1.0 : -1.0;
                                    dN[c][0] = su * fv * fs / dx0;
                                    dN[c][1] = fu * sv * fs / dx1;
                                    dN[c][2] = fu * fv * ss / deta;
                                }
                                const double wq = 0.125 * dx0 * dx1 * deta;
                                for (int a = 0; a < 8; ++a) {
                                    for (int b = 0; b < 8; ++b) {
                                        double val =
                                            J * (dN[a][0] * dN[b][0] +
                                                 dN[a][1] * dN[b][1]) +
                                            Kzz * dN[a][2] * dN[b][2] -
                                            J * a0 * (dN[a][0] * dN[b][2] +
                                                      dN[a][2] * dN[b][0]) -
                                            J * a1 * (dN[a][1] * dN[b][2] +
                                                      dN[a][2] * dN[b][1]);
                                        Ke[a][b] += wq * val;
                                    }
                                }
                            }
                        }
                    std::size_t nd[8];
                    for (int c = 0; c < 8; ++c)
                        nd[c] = idx(i0 + (c & 1), i1 + ((c >> 1) & 1),
                                    j + ((c >> 2) & 1));
                    for (int a = 0; a < 8; ++a)
                        for (int b = 0; b < 8; ++b)
                            trips.emplace_back(static_cast<int>(nd[a]),
                                               static_cast<int>(nd[b]), Ke[a][b]);
                }
            }
        }
    }

    Assembled out;
    out.A.resize(static_cast<Eigen::Index>(ndof), static_cast<Eigen::Index>(ndof));
    out.A.setFromTriplets(trips.begin(), trips.end());
    out.fixed.assign(ndof, 0);
    out.fixed_value.assign(ndof, 0.0);

    const double psi_mean = psi.mean();
    out.top.resize(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        const std::size_t topn = p * lev + My;
        out.top[p] = topn;
        out.fixed[topn] = 1;
        out.fixed_value[topn] = psi[p];
        if (cfg.bottom == BottomCondition::dirichlet_flat_decay) {
            out.fixed[p * lev] = 1;
            out.fixed_value[p * lev] = psi_mean;
        }
    }
    return out;
}

} // namespace

OracleSolution::OracleSolution(Field h, StripOracle cfg, Field flux,
                               std::vector<double> nodal)
    : h_(std::move(h)), cfg_(cfg), flux_(std::move(flux)),
      nodal_(std::move(nodal)) {}

Field OracleSolution::surface_dy() const {
    const int lev = cfg_.vertical_cells + 1;
    const double deta = cfg_.depth / cfg_.vertical_cells;
    std::vector<double> v(h_.size());
    for (std::size_t p = 0; p < h_.size(); ++p) {
        const double* col = nodal_.data() + p * lev;
        const double ueta = (3.0 * col[lev - 1] - 4.0 * col[lev - 2] + col[lev - 3]) /
                            (2.0 * deta);
        // d_y phi = u_eta / J in the column-affine coordinates
        v[p] = ueta / (1.0 + h_[p] / cfg_.depth);
    }
    return Field::from_samples(h_.grid(), std::move(v));
}

OracleSolution dno_oracle_solve(const Field& h, const Field& psi,
                                const StripOracle& cfg) {
    require_same_grid(h, psi);
    const Grid& g = h.grid();
    if (cfg.vertical_cells < 16)
        throw ContractError("oracle needs at least 16 vertical cells");
    if (cfg.depth < 4.0 * h.sup_abs()) {
        std::ostringstream os;
        os << "oracle depth " << cfg.depth << " is below 4*max|h| = "
           << 4.0 * h.sup_abs();
        throw PreconditionError(os.str());
    }

    Assembled as = assemble(h, psi, cfg);
    const std::size_t ndof = as.fixed.size();

    // Reduce to the unknown set.
    std::vector<Eigen::Index> unknown_of(ndof, -1);
    Eigen::Index nu = 0;
    for (std::size_t i = 0; i < ndof; ++i)
        if (!as.fixed[i]) unknown_of[i] = nu++;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(as.A.nonZeros());
    for (int k = 0; k < as.A.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(as.A, k); it; ++it) {
            const std::size_t r = it.row(), c = it.col();
            if (as.fixed[r]) continue;
            if (as.fixed[c])
                rhs[unknown_of[r]] -= it.value() * as.fixed_value[c];
            else
                trips.emplace_back(unknown_of[r], unknown_of[c], it.value());
        }
    }
    Eigen::SparseMatrix<double> Auu(nu, nu);
    Auu.setFromTriplets(trips.begin(), trips.end());

    Eigen::VectorXd x;
    if (g.dim() == 1) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
        solver.compute(Auu);
        if (solver.info() != Eigen::Success)
            throw OracleFailureError("strip solve: factorization failed");
        x = solver.solve(rhs);
        if (solver.info() != Eigen::Success)
            throw OracleFailureError("strip solve: back substitution failed");
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                 Eigen::Lower | Eigen::Upper>
            solver;
        solver.setTolerance(cfg.tolerance);
        solver.setMaxIterations(50000);
        solver.compute(Auu);
        x = solver.solve(rhs);
        if (solver.info() != Eigen::Success) {
            std::ostringstream os;
            os << "strip solve: CG stalled at residual " << solver.error();
            throw OracleFailureError(os.str());
        }
    }

    Eigen::VectorXd full(ndof);
    for (std::size_t i = 0; i < ndof; ++i)
        full[i] = as.fixed[i] ? as.fixed_value[i] : x[unknown_of[i]];

    // Variationally consistent conormal flux at the surface, lumped onto
    // nodes. Exactly symmetric and positive semidefinite as a discrete
    // operator, and exactly mean-free with the Neumann bottom.
    Eigen::VectorXd Au = as.A * full;
    std::vector<double> flux(g.size());
    const double area = g.cell_volume();
    for (std::size_t p = 0; p < g.size(); ++p) flux[p] = Au[as.top[p]] / area;

    std::vector<double> nodal(full.data(), full.data() + ndof);
    Field fluxf = Field::from_samples(g, std::move(flux));
    return OracleSolution(h, cfg, std::move(fluxf), std::move(nodal));
}

Field dno_oracle(const Field& h, const Field& psi, const StripOracle& cfg) {
    return dno_oracle_solve(h, psi, cfg).boundary_flux();
}

} // namespace helesim
