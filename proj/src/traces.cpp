#include "helesim/traces.hpp"

#include <cmath>
#include <sstream>

namespace helesim {

namespace {

Field grad_norm_sq(const VectorField& gh) {
    Field s = gh[0] * gh[0];
    for (int d = 1; d < gh.dim(); ++d) s = s + gh[d] * gh[d];
    return s;
}

void check_rayleigh(double min_a) {
    if (!(min_a > 0.0)) {
        std::ostringstream os;
        os << "degenerate state: Rayleigh-Taylor coefficient min a = " << min_a;
        throw DegenerateStateError(os.str());
    }
}

} // namespace

RayleighData rayleigh_data(const Field& h, const DnoExpansion& cfg) {
    Field gh = dno_apply(h, h, cfg);
    VectorField dh = gradient(h);
    Field s = grad_norm_sq(dh);
    const Grid& g = h.grid();
    std::vector<double> av(g.size());
    double lam = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double B = (gh[i] + s[i]) / (1.0 + s[i]);
        av[i] = 1.0 - B;
        lam = std::max(lam, av[i] * std::sqrt(1.0 + s[i]));
    }
    Field a = Field::from_samples(g, std::move(av));
    const double min_a = a.min_value();
    return RayleighData{std::move(gh), std::move(a), lam, min_a};
}

Traces compute_traces(const Field& h, const DnoExpansion& cfg) {
    const Grid& g = h.grid();
    Field gh = dno_apply(h, h, cfg);
    VectorField dh = gradient(h);
    Field s = grad_norm_sq(dh);
    Field onep = s + 1.0;

    Field B = (gh + s) / onep;
    Field a = Field::constant(g, 1.0) - B;
    check_rayleigh(a.min_value());

    VectorField V;
    for (int d = 0; d < g.dim(); ++d) V.comp.push_back(a * dh[d]);

    // Products fed to G(h) are dealiased; the outer products stay pointwise
    // because the gamma sign condition is a pointwise statement.
    Field quad = multiply_dealiased(B, B);
    for (int d = 0; d < g.dim(); ++d)
        quad = quad + multiply_dealiased(V[d], V[d]);
    Field gquad = dno_apply(h, quad, cfg);
    Field gB = dno_apply(h, B, cfg);
    VectorField gV;
    for (int d = 0; d < g.dim(); ++d) gV.comp.push_back(dno_apply(h, V[d], cfg));
    Field cross = B * gB;
    for (int d = 0; d < g.dim(); ++d) cross = cross + V[d] * gV[d];
    Field gamma = (gquad - 2.0 * cross) / onep;

    double lam = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        lam = std::max(lam, a[i] * std::sqrt(1.0 + s[i]));

    Field sqrta = a.map([](double x) { return std::sqrt(x); });
    Field dt_h = -1.0 * gh;
    VectorField W;
    for (int d = 0; d < g.dim(); ++d) W.comp.push_back(sqrta * dh[d]);
    Field Z = sqrta * dt_h;
    Field Y = a * dt_h;

    return Traces{std::move(gh), std::move(dt_h), std::move(dh), std::move(B),
                  std::move(V),  std::move(a),    std::move(gamma), lam,
                  std::move(W),  std::move(Z),    std::move(Y),
                  std::move(gB), std::move(gV)};
}

ResidualReport identity_residuals(const Field& h, const Traces& tr,
                                  const DnoExpansion& cfg) {
    const Grid& g = h.grid();
    ResidualReport rep;
    auto put = [&rep](const std::string& name, const Field& r) {
        rep.residuals[name] = ResidualReport::Norms{l2_norm(r), r.sup_abs()};
    };

    Field divV = derivative(tr.V[0], 0);
    for (int d = 1; d < g.dim(); ++d) divV = divV + derivative(tr.V[d], d);
    put("R1", tr.gB + divV);

    for (int i = 0; i < g.dim(); ++i) {
        Field r = derivative(tr.B, i) - tr.gV[i] - tr.grad_h[i] * tr.gB;
        for (int j = 0; j < g.dim(); ++j)
            r = r - tr.grad_h[j] * derivative(tr.V[j], i);
        put(g.dim() == 1 ? "R2" : "R2_" + std::to_string(i + 1), r);
    }

    if (g.dim() == 1) {
        put("R3", derivative(tr.B, 0) - tr.gV[0]);
        Field gB2 = dno_apply(h, multiply_dealiased(tr.B, tr.B), cfg);
        Field gV2 = dno_apply(h, multiply_dealiased(tr.V[0], tr.V[0]), cfg);
        put("R4", gB2 - 2.0 * (tr.B * tr.gB) - gV2 + 2.0 * (tr.V[0] * tr.gV[0]));
    }

    Field vsq = tr.V[0] * tr.V[0];
    Field vdh = tr.V[0] * tr.grad_h[0];
    for (int d = 1; d < g.dim(); ++d) {
        vsq = vsq + tr.V[d] * tr.V[d];
        vdh = vdh + tr.V[d] * tr.grad_h[d];
    }
    rep.rellich = std::abs(integrate(vsq - tr.B * tr.B + 2.0 * (tr.B * vdh)));

    Field s = grad_norm_sq(tr.grad_h);
    put("R6", tr.B * tr.B + vsq - (tr.gh * tr.gh + s) / (s + 1.0));

    rep.min_a = tr.a.min_value();
    rep.max_gamma = tr.gamma.max_value();
    rep.gamma_scale = tr.gamma.sup_abs();
    rep.a_positive = rep.min_a > 0.0;
    rep.gamma_nonpositive = rep.max_gamma <= 1e-6 * rep.gamma_scale;
    return rep;
}

} // namespace helesim
