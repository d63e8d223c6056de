#include "helesim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace helesim {

namespace convex {

ConvexTestFn square() {
    return {[](double r) { return r * r; }, [](double r) { return 2.0 * r; },
            [](double) { return 2.0; }, "r^2"};
}

ConvexTestFn fourth() {
    return {[](double r) { return r * r * r * r; },
            [](double r) { return 4.0 * r * r * r; },
            [](double r) { return 12.0 * r * r; }, "r^4"};
}

ConvexTestFn exponential() {
    return {[](double r) { return std::exp(r); },
            [](double r) { return std::exp(r); },
            [](double r) { return std::exp(r); }, "exp"};
}

} // namespace convex

namespace {

void validate_p_list(const std::vector<int>& p_list) {
    for (int p : p_list)
        if (!(p == 1 || (p > 0 && p % 2 == 0)))
            throw ContractError("p_list entries must be 1 or even positive");
}

Field pointwise_pow(const Field& f, int p) {
    if (p == 1) return f;
    return f.map([p](double x) { return std::pow(x, p); });
}

} // namespace

FunctionalRecord functionals(const Field& h, const Traces& tr,
                             const std::vector<int>& p_list,
                             const DnoExpansion& cfg, double t) {
    validate_p_list(p_list);
    const Grid& g = h.grid();
    FunctionalRecord rec;
    rec.t = t;

    if (!(tr.a.min_value() > 0.0))
        throw DegenerateStateError("functionals: min a <= 0, a^{-p} undefined");

    for (int p : p_list) {
        rec.l2p[p] = integrate(pointwise_pow(h, 2 * p));
        rec.inv_a_lp[p] = integrate(tr.a.map([p](double x) {
            return std::pow(x, -p);
        }));
    }
    rec.dirichlet = integrate(h * tr.gh);
    rec.sup_abs_h = h.sup_abs();
    for (int d = 0; d < g.dim(); ++d) {
        rec.sup_grad[d] = tr.grad_h[d].max_value();
        rec.inf_grad[d] = tr.grad_h[d].min_value();
    }
    double sg = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) s2 += tr.grad_h[d][i] * tr.grad_h[d][i];
        sg = std::max(sg, s2);
    }
    rec.sup_abs_grad = std::sqrt(sg);
    rec.sup_dt = tr.dt_h.max_value();
    rec.sup_abs_dt = tr.dt_h.sup_abs();
    rec.inf_a = tr.a.min_value();
    rec.gamma_max = tr.gamma.max_value();
    rec.gamma_scale = tr.gamma.sup_abs();
    rec.residuals = identity_residuals(h, tr, cfg);

    Field ht2 = tr.dt_h * tr.dt_h;
    Field gsq = tr.grad_h[0] * tr.grad_h[0];
    for (int d = 1; d < g.dim(); ++d) gsq = gsq + tr.grad_h[d] * tr.grad_h[d];
    rec.grad_energy = integrate(gsq);
    rec.energy_dissipation = integrate(tr.a * (ht2 + gsq));

    if (g.dim() == 1) {
        for (int p : p_list) {
            Field vp = pointwise_pow(tr.V[0], p);
            rec.slope_fun[p] = integrate((vp * vp) / tr.a);
            rec.slope_dissipation[p] = integrate(vp * dno_apply(h, vp, cfg));
        }
    }
    return rec;
}

std::map<std::string, MaxPrincipleVerdict> max_principle_report(
    const Trajectory& traj, const std::map<std::string, double>& thresholds,
    double tol) {
    if (traj.records.empty())
        throw PreconditionError("max_principle_report: empty trajectory");
    const FunctionalRecord& r0 = traj.records.front();
    const int dim = traj.states.front().h.grid().dim();

    struct Channel {
        std::string name;
        std::function<double(const FunctionalRecord&)> get;
    };
    std::vector<Channel> channels;
    channels.push_back({"dt", [](const FunctionalRecord& r) { return r.sup_dt; }});
    for (int d = 0; d < dim; ++d) {
        const std::string ax = "dx" + std::to_string(d + 1);
        channels.push_back(
            {ax, [d](const FunctionalRecord& r) { return r.sup_grad[d]; }});
        channels.push_back({"-" + ax, [d](const FunctionalRecord& r) {
                                return -r.inf_grad[d];
                            }});
    }
    channels.push_back(
        {"abs_h", [](const FunctionalRecord& r) { return r.sup_abs_h; }});

    std::map<std::string, MaxPrincipleVerdict> out;
    for (const Channel& ch : channels) {
        MaxPrincipleVerdict v;
        v.initial = ch.get(r0);
        auto it = thresholds.find(ch.name);
        if (it != thresholds.end()) v.initial = std::max(v.initial, it->second);
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < traj.records.size(); ++k)
            worst = std::max(worst, ch.get(traj.records[k]) - v.initial);
        v.excess = traj.records.size() > 1 ? worst : 0.0;
        v.pass = v.excess <= tol;
        out[ch.name] = v;
    }
    return out;
}

double convexity_check(const Field& h, const Field& f, const ConvexTestFn& phi,
                       const DnoExpansion& cfg) {
    require_same_grid(h, f);
    for (double x : f.values())
        if (phi.second(x) < 0.0)
            throw ContractError("test function is not convex on the range of f");
    Field gf = dno_apply(h, f, cfg);
    Field gphi = dno_apply(h, f.map(phi.value), cfg);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i)
        m = std::min(m, phi.first(f[i]) * gf[i] - gphi[i]);
    return m;
}

double Modulus::operator()(double d) const {
    if (d < 0.0) return 0.0;
    // largest recorded bound at distance <= d
    auto it = std::upper_bound(distance.begin(), distance.end(),
                               d * (1.0 + 1e-12));
    if (it == distance.begin()) return 0.0;
    return bound[static_cast<std::size_t>(it - distance.begin()) - 1];
}

namespace {

struct LagClass {
    int l0, l1;
    double dist;
};

std::vector<LagClass> lag_classes(const Grid& g) {
    std::vector<LagClass> lags;
    if (g.dim() == 1) {
        const int n = g.extent(0);
        for (int l = 1; l <= n / 2; ++l)
            lags.push_back({l, 0, l * g.spacing(0)});
    } else {
        const int n0 = g.extent(0), n1 = g.extent(1);
        // one representative per unordered pair class: positive l0 with any
        // l1, plus the l0 = 0 column
        for (int l0 = 0; l0 <= n0 / 2; ++l0) {
            const int lo = (l0 == 0 || l0 == n0 / 2) ? 0 : -n1 / 2;
            for (int l1 = lo; l1 <= n1 / 2; ++l1) {
                if (l0 == 0 && l1 <= 0) continue;
                const double d0 = std::min(l0, n0 - l0) * g.spacing(0);
                const double d1 =
                    std::min(std::abs(l1), n1 - std::abs(l1)) * g.spacing(1);
                lags.push_back({l0, l1, std::hypot(d0, d1)});
            }
        }
    }
    return lags;
}

double lag_max_diff(const Field& f, int l0, int l1) {
    const Grid& g = f.grid();
    const int n0 = g.extent(0);
    const int n1 = g.dim() == 2 ? g.extent(1) : 1;
    double m = 0.0;
    for (int i = 0; i < n0; ++i) {
        const int si = (i + l0) % n0;
        for (int j = 0; j < n1; ++j) {
            const int sj = ((j + l1) % n1 + n1) % n1;
            m = std::max(m, std::abs(f[g.flat(si, sj)] - f[g.flat(i, j)]));
        }
    }
    return m;
}

void modulus_guard(const Grid& g) {
    const int cap = g.dim() == 1 ? 512 : 64;
    for (int d = 0; d < g.dim(); ++d)
        if (g.extent(d) > cap) {
            std::ostringstream os;
            os << "modulus pair enumeration capped at " << cap
               << " points per axis in " << g.dim() << "-d";
            throw PreconditionError(os.str());
        }
}

} // namespace

Modulus empirical_modulus(const Field& f) {
    modulus_guard(f.grid());
    std::vector<LagClass> lags = lag_classes(f.grid());
    std::sort(lags.begin(), lags.end(),
              [](const LagClass& a, const LagClass& b) { return a.dist < b.dist; });
    Modulus om;
    double running = 0.0;
    for (const LagClass& lc : lags) {
        running = std::max(running, lag_max_diff(f, lc.l0, lc.l1));
        if (!om.distance.empty() && om.distance.back() == lc.dist)
            om.bound.back() = running;
        else {
            om.distance.push_back(lc.dist);
            om.bound.push_back(running);
        }
    }
    return om;
}

double modulus_check(const Field& h_ref, const Field& h_test) {
    require_same_grid(h_ref, h_test);
    modulus_guard(h_ref.grid());
    Modulus om = empirical_modulus(h_ref);
    double worst = -std::numeric_limits<double>::infinity();
    for (const LagClass& lc : lag_classes(h_ref.grid()))
        worst = std::max(worst, lag_max_diff(h_test, lc.l0, lc.l1) - om(lc.dist));
    return worst;
}

EnergyIdentityResult energy_identity_residual(const Trajectory& traj) {
    const std::size_t n = traj.records.size();
    if (n < 3)
        throw PreconditionError("energy identity needs at least 3 records");
    const double dt0 = traj.times[1] - traj.times[0];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double d = traj.times[k + 1] - traj.times[k];
        if (std::abs(d - dt0) > 1e-9 * std::max(1.0, std::abs(dt0)))
            throw PreconditionError("energy identity needs uniform record spacing");
    }
    EnergyIdentityResult out;
    out.min_second_difference = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double ddir = (traj.records[k + 1].dirichlet -
                             traj.records[k - 1].dirichlet) /
                            (2.0 * dt0);
        out.max_residual = std::max(
            out.max_residual,
            std::abs(ddir + traj.records[k].energy_dissipation));
        const double d2 = traj.records[k + 1].l2p.at(1) -
                          2.0 * traj.records[k].l2p.at(1) +
                          traj.records[k - 1].l2p.at(1);
        out.min_second_difference = std::min(out.min_second_difference, d2);
    }
    return out;
}

} // namespace helesim
