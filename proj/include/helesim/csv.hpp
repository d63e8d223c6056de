#pragma once

#include <string>
#include <vector>

#include "helesim/evolution.hpp"

namespace helesim {

/// Shortest decimal that round-trips a double (17 significant digits).
std::string format_g17(double x);

/// RFC-4180 output: comma separated, CRLF line endings, no quoting (all
/// cells are numeric or plain identifiers).
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Fixed column order: t, then the functionals in declaration order of
/// FunctionalRecord (l2p per p, dirichlet, inv_a per p, slope_fun per p,
/// suprema, inf_a, gamma, residual norms by identity name, dissipation).
std::vector<std::string> functional_header(int dim, const std::vector<int>& p_list);
std::vector<std::string> functional_row(const FunctionalRecord& rec, int dim,
                                        const std::vector<int>& p_list);

void write_functional_csv(const std::string& path, const Trajectory& traj,
                          int dim, const std::vector<int>& p_list);

} // namespace helesim
