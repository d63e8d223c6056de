#include "helesim/csv.hpp"

#include <cstdio>
#include <fstream>

namespace helesim {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + path);
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << "\r\n";
    };
    line(header);
    for (const auto& row : rows) line(row);
    if (!os) throw IoError("short write: " + path);
}

std::vector<std::string> functional_header(int dim,
                                           const std::vector<int>& p_list) {
    std::vector<std::string> h;
    h.push_back("t");
    for (int p : p_list) h.push_back("l2p_" + std::to_string(p));
    h.push_back("dirichlet");
    for (int p : p_list) h.push_back("inv_a_l" + std::to_string(p));
    if (dim == 1)
        for (int p : p_list) h.push_back("slope_fun_" + std::to_string(p));
    h.push_back("sup_abs_h");
    for (int d = 0; d < dim; ++d) h.push_back("sup_dx" + std::to_string(d + 1));
    for (int d = 0; d < dim; ++d) h.push_back("inf_dx" + std::to_string(d + 1));
    h.push_back("sup_abs_grad");
    h.push_back("grad_energy");
    h.push_back("sup_dt");
    h.push_back("sup_abs_dt");
    h.push_back("inf_a");
    h.push_back("gamma_max");
    h.push_back("gamma_scale");
    // residual identities in map order, one l2 and one linf column each
    if (dim == 1) {
        for (const char* r : {"R1", "R2", "R3", "R4", "R6"}) {
            h.push_back(std::string(r) + "_l2");
            h.push_back(std::string(r) + "_linf");
        }
    } else {
        for (const char* r : {"R1", "R2_1", "R2_2", "R6"}) {
            h.push_back(std::string(r) + "_l2");
            h.push_back(std::string(r) + "_linf");
        }
    }
    h.push_back("rellich");
    h.push_back("energy_dissipation");
    if (dim == 1)
        for (int p : p_list) h.push_back("slope_diss_" + std::to_string(p));
    return h;
}

std::vector<std::string> functional_row(const FunctionalRecord& rec, int dim,
                                        const std::vector<int>& p_list) {
    std::vector<std::string> r;
    auto put = [&r](double v) { r.push_back(format_g17(v)); };
    put(rec.t);
    for (int p : p_list) put(rec.l2p.at(p));
    put(rec.dirichlet);
    for (int p : p_list) put(rec.inv_a_lp.at(p));
    if (dim == 1)
        for (int p : p_list) put(rec.slope_fun.at(p));
    put(rec.sup_abs_h);
    for (int d = 0; d < dim; ++d) put(rec.sup_grad[d]);
    for (int d = 0; d < dim; ++d) put(rec.inf_grad[d]);
    put(rec.sup_abs_grad);
    put(rec.grad_energy);
    put(rec.sup_dt);
    put(rec.sup_abs_dt);
    put(rec.inf_a);
    put(rec.gamma_max);
    put(rec.gamma_scale);
    for (const auto& [name, norms] : rec.residuals.residuals) {
        put(norms.l2);
        put(norms.linf);
    }
    put(rec.residuals.rellich);
    put(rec.energy_dissipation);
    if (dim == 1)
        for (int p : p_list) put(rec.slope_dissipation.at(p));
    return r;
}

void write_functional_csv(const std::string& path, const Trajectory& traj,
                          int dim, const std::vector<int>& p_list) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(traj.records.size());
    for (const auto& rec : traj.records)
        rows.push_back(functional_row(rec, dim, p_list));
    write_csv(path, functional_header(dim, p_list), rows);
}

} // namespace helesim
