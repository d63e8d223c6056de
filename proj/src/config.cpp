#include "helesim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace helesim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
    }
    if (pos != v.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return x;
}

long parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
    }
    if (pos != v.size())
        throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, std::string v) {
    std::transform(v.begin(), v.end(), v.begin(), ::tolower);
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

void require(bool ok, const std::string& key, const std::string& range) {
    if (!ok) throw ConfigError("key '" + key + "': value out of range, expected " + range);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') continue;  // section header
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "line " << lineno << ": expected key = value, got '" << line << "'";
            throw ConfigError(os.str());
        }
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        const auto comment = val.find_first_of("#;");
        if (comment != std::string::npos) val = trim(val.substr(0, comment));

        if (key == "dim") {
            cfg.dim = static_cast<int>(parse_int(key, val));
            require(cfg.dim == 1 || cfg.dim == 2, key, "1 or 2");
        } else if (key == "n") {
            cfg.n = static_cast<int>(parse_int(key, val));
            require(cfg.n >= 8 && cfg.n <= 4096 && (cfg.n & (cfg.n - 1)) == 0, key,
                    "a power of two in [8, 4096]");
        } else if (key == "n1") {
            cfg.n1 = static_cast<int>(parse_int(key, val));
            require(cfg.n1 >= 8 && cfg.n1 <= 4096 && (cfg.n1 & (cfg.n1 - 1)) == 0,
                    key, "a power of two in [8, 4096]");
        } else if (key == "period") {
            cfg.period = parse_double(key, val);
            require(cfg.period > 0.0 && cfg.period <= 1e6, key, "(0, 1e6]");
        } else if (key == "period1") {
            cfg.period1 = parse_double(key, val);
            require(cfg.period1 > 0.0 && cfg.period1 <= 1e6, key, "(0, 1e6]");
        } else if (key == "ic") {
            require(val == "flat" || val == "single_mode" || val == "multi_mode" ||
                        val == "checkpoint",
                    key, "flat | single_mode | multi_mode | checkpoint");
            cfg.ic = val;
        } else if (key == "ic_k") {
            cfg.ic_k = static_cast<int>(parse_int(key, val));
            require(cfg.ic_k >= 1 && cfg.ic_k <= 1024, key, "[1, 1024]");
        } else if (key == "ic_amplitude") {
            cfg.ic_amplitude = parse_double(key, val);
            require(std::abs(cfg.ic_amplitude) <= 10.0, key, "[-10, 10]");
        } else if (key == "ic_seed") {
            cfg.ic_seed = static_cast<std::uint64_t>(parse_int(key, val));
        } else if (key == "ic_modes") {
            cfg.ic_modes = static_cast<int>(parse_int(key, val));
            require(cfg.ic_modes >= 1 && cfg.ic_modes <= 64, key, "[1, 64]");
        } else if (key == "ic_checkpoint") {
            cfg.ic_checkpoint = val;
        } else if (key == "scheme") {
            if (val == "imex1")
                cfg.solver.scheme = Scheme::imex1;
            else if (val == "rk4")
                cfg.solver.scheme = Scheme::rk4;
            else
                throw ConfigError("key 'scheme': expected imex1 or rk4, got '" + val + "'");
        } else if (key == "dt") {
            cfg.solver.dt = parse_double(key, val);
            require(cfg.solver.dt > 0.0 && cfg.solver.dt <= 1.0, key, "(0, 1]");
        } else if (key == "t_end") {
            cfg.solver.t_end = parse_double(key, val);
            require(cfg.solver.t_end > 0.0 && cfg.solver.t_end <= 1e4, key, "(0, 1e4]");
        } else if (key == "record_every") {
            cfg.solver.record_every = static_cast<int>(parse_int(key, val));
            require(cfg.solver.record_every >= 1, key, ">= 1");
        } else if (key == "stabilizer_margin") {
            cfg.solver.stabilizer_margin = parse_double(key, val);
            require(cfg.solver.stabilizer_margin >= 1.0 &&
                        cfg.solver.stabilizer_margin <= 100.0,
                    key, "[1, 100]");
        } else if (key == "cfl_number") {
            cfg.solver.cfl_number = parse_double(key, val);
            require(cfg.solver.cfl_number > 0.0 && cfg.solver.cfl_number <= 2.0, key,
                    "(0, 2]");
        } else if (key == "energy_increase_tol") {
            cfg.solver.energy_increase_tol = parse_double(key, val);
            require(cfg.solver.energy_increase_tol >= 0.0, key, ">= 0");
        } else if (key == "dno_order") {
            cfg.solver.dno.max_order = static_cast<int>(parse_int(key, val));
            require(cfg.solver.dno.max_order >= 0 && cfg.solver.dno.max_order <= 32,
                    key, "[0, 32]");
        } else if (key == "dno_dealias") {
            cfg.solver.dno.dealias = parse_bool(key, val);
        } else if (key == "dno_ratio_threshold") {
            cfg.solver.dno.convergence_ratio_threshold = parse_double(key, val);
            require(cfg.solver.dno.convergence_ratio_threshold > 0.0 &&
                        cfg.solver.dno.convergence_ratio_threshold < 1.0,
                    key, "(0, 1)");
        } else if (key == "dno_slope_bound") {
            cfg.solver.dno.slope_bound = parse_double(key, val);
            require(cfg.solver.dno.slope_bound > 0.0, key, "> 0");
        } else if (key == "oracle_depth") {
            cfg.oracle.depth = parse_double(key, val);
            require(cfg.oracle.depth > 0.0 && cfg.oracle.depth <= 1e3, key, "(0, 1e3]");
        } else if (key == "oracle_vertical_cells") {
            cfg.oracle.vertical_cells = static_cast<int>(parse_int(key, val));
            require(cfg.oracle.vertical_cells >= 16 &&
                        cfg.oracle.vertical_cells <= 8192,
                    key, "[16, 8192]");
        } else if (key == "oracle_bottom") {
            if (val == "neumann")
                cfg.oracle.bottom = BottomCondition::homogeneous_neumann;
            else if (val == "dirichlet")
                cfg.oracle.bottom = BottomCondition::dirichlet_flat_decay;
            else
                throw ConfigError("key 'oracle_bottom': expected neumann or dirichlet");
        } else if (key == "oracle_tolerance") {
            cfg.oracle.tolerance = parse_double(key, val);
            require(cfg.oracle.tolerance > 0.0 && cfg.oracle.tolerance <= 1e-4, key,
                    "(0, 1e-4]");
        } else if (key == "p_list") {
            cfg.solver.p_list.clear();
            for (const std::string& item : split_list(val)) {
                const int p = static_cast<int>(parse_int(key, item));
                require(p == 1 || (p > 0 && p % 2 == 0), key,
                        "entries in {1} union even positives");
                cfg.solver.p_list.push_back(p);
            }
            require(!cfg.solver.p_list.empty(), key, "a nonempty list");
        } else if (key == "out_dir") {
            cfg.out_dir = val;
        } else if (key == "verify_lyapunov") {
            cfg.verify_lyapunov = parse_bool(key, val);
        } else if (key == "verify_max_principle") {
            cfg.verify_max_principle = parse_bool(key, val);
        } else if (key == "verify_signs") {
            cfg.verify_signs = parse_bool(key, val);
        } else if (key == "verify_modulus") {
            cfg.verify_modulus = parse_bool(key, val);
        } else if (key == "verify_energy_identity") {
            cfg.verify_energy_identity = parse_bool(key, val);
        } else if (key == "verify_bounds") {
            cfg.verify_bounds = parse_bool(key, val);
        } else if (key == "verify_slope_decay") {
            cfg.verify_slope_decay = parse_bool(key, val);
        } else if (key == "sweep_amplitude") {
            for (const std::string& item : split_list(val))
                cfg.sweep_amplitude.push_back(parse_double(key, item));
        } else if (key == "sweep_dt") {
            for (const std::string& item : split_list(val)) {
                const double d = parse_double(key, item);
                require(d > 0.0 && d <= 1.0, key, "(0, 1]");
                cfg.sweep_dt.push_back(d);
            }
        } else if (key == "sweep_n") {
            for (const std::string& item : split_list(val)) {
                const int nn = static_cast<int>(parse_int(key, item));
                require(nn >= 8 && nn <= 4096 && (nn & (nn - 1)) == 0, key,
                        "powers of two in [8, 4096]");
                cfg.sweep_n.push_back(nn);
            }
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }

    if (cfg.ic == "checkpoint" && cfg.ic_checkpoint.empty())
        throw ConfigError("ic = checkpoint requires ic_checkpoint = <path>");

    // rk4 step restriction is checked at load time so a bad configuration
    // fails before any work is done.
    if (cfg.solver.scheme == Scheme::rk4) {
        double dx = cfg.period / cfg.n;
        if (cfg.dim == 2) dx = std::min(dx, cfg.period1 / cfg.n1);
        if (cfg.solver.dt > cfg.solver.cfl_number * dx) {
            std::ostringstream os;
            os << "rk4 CFL precondition: dt = " << cfg.solver.dt << " exceeds "
               << cfg.solver.cfl_number << " * dx = " << cfg.solver.cfl_number * dx;
            throw ConfigError(os.str());
        }
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "[grid]\n";
    os << "dim = " << cfg.dim << "\n";
    os << "n = " << cfg.n << "\n";
    if (cfg.dim == 2) os << "n1 = " << cfg.n1 << "\n";
    os << "period = " << cfg.period << "\n";
    if (cfg.dim == 2) os << "period1 = " << cfg.period1 << "\n";
    os << "\n[initial]\n";
    os << "ic = " << cfg.ic << "\n";
    os << "ic_k = " << cfg.ic_k << "\n";
    os << "ic_amplitude = " << cfg.ic_amplitude << "\n";
    os << "ic_seed = " << cfg.ic_seed << "\n";
    os << "ic_modes = " << cfg.ic_modes << "\n";
    if (!cfg.ic_checkpoint.empty())
        os << "ic_checkpoint = " << cfg.ic_checkpoint << "\n";
    os << "\n[solver]\n";
    os << "scheme = " << (cfg.solver.scheme == Scheme::imex1 ? "imex1" : "rk4") << "\n";
    os << "dt = " << cfg.solver.dt << "\n";
    os << "t_end = " << cfg.solver.t_end << "\n";
    os << "record_every = " << cfg.solver.record_every << "\n";
    os << "stabilizer_margin = " << cfg.solver.stabilizer_margin << "\n";
    os << "cfl_number = " << cfg.solver.cfl_number << "\n";
    os << "energy_increase_tol = " << cfg.solver.energy_increase_tol << "\n";
    os << "p_list = ";
    for (std::size_t i = 0; i < cfg.solver.p_list.size(); ++i)
        os << (i ? "," : "") << cfg.solver.p_list[i];
    os << "\n";
    os << "\n[dno]\n";
    os << "dno_order = " << cfg.solver.dno.max_order << "\n";
    os << "dno_dealias = " << (cfg.solver.dno.dealias ? "true" : "false") << "\n";
    os << "dno_ratio_threshold = " << cfg.solver.dno.convergence_ratio_threshold << "\n";
    os << "dno_slope_bound = " << cfg.solver.dno.slope_bound << "\n";
    os << "\n[oracle]\n";
    os << "oracle_depth = " << cfg.oracle.depth << "\n";
    os << "oracle_vertical_cells = " << cfg.oracle.vertical_cells << "\n";
    os << "oracle_bottom = "
       << (cfg.oracle.bottom == BottomCondition::homogeneous_neumann ? "neumann"
                                                                     : "dirichlet")
       << "\n";
    os << "oracle_tolerance = " << cfg.oracle.tolerance << "\n";
    os << "\n[output]\n";
    os << "out_dir = " << cfg.out_dir << "\n";
    return os.str();
}

SurfaceState make_initial_state(const RunConfig& cfg) {
    Grid g = cfg.dim == 1 ? Grid(cfg.n, cfg.period)
                          : Grid(cfg.n, cfg.n1, cfg.period, cfg.period1);
    if (cfg.ic == "checkpoint") {
        SurfaceState s = load_checkpoint(cfg.ic_checkpoint);
        return s;
    }
    if (cfg.ic == "flat") return SurfaceState{Field::zeros(g), 0.0};
    if (cfg.ic == "single_mode") {
        const double a = cfg.ic_amplitude;
        const int k = cfg.ic_k;
        const double w0 = two_pi / cfg.period;
        if (cfg.dim == 1)
            return SurfaceState{
                Field::sample(g, [&](double x) { return a * std::cos(k * w0 * x); }),
                0.0};
        return SurfaceState{Field::sample(g,
                                          [&](double x, double) {
                                              return a * std::cos(k * w0 * x);
                                          }),
                            0.0};
    }
    // multi_mode: random low modes with geometric decay, deterministic in
    // the seed, rescaled to the requested amplitude.
    std::mt19937_64 rng(cfg.ic_seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(g.size(), 0.0);
    const double w0 = two_pi / cfg.period;
    const double w1 = cfg.dim == 2 ? two_pi / cfg.period1 : 0.0;
    for (int k = 1; k <= cfg.ic_modes; ++k) {
        const double decay = std::exp(-0.6 * (k - 1));
        const double ac = unif(rng) * decay, as = unif(rng) * decay;
        const double bc = cfg.dim == 2 ? unif(rng) * decay : 0.0;
        const double bs = cfg.dim == 2 ? unif(rng) * decay : 0.0;
        for (int i = 0; i < g.extent(0); ++i) {
            const double x = g.coord(0, i);
            if (cfg.dim == 1) {
                v[i] += ac * std::cos(k * w0 * x) + as * std::sin(k * w0 * x);
            } else {
                for (int j = 0; j < g.extent(1); ++j) {
                    const double y = g.coord(1, j);
                    v[g.flat(i, j)] += ac * std::cos(k * w0 * x) +
                                       as * std::sin(k * w0 * x) +
                                       bc * std::cos(k * w1 * y) +
                                       bs * std::sin(k * w1 * y);
                }
            }
        }
    }
    double sup = 0.0;
    for (double x : v) sup = std::max(sup, std::abs(x));
    const double scale = sup > 0.0 ? cfg.ic_amplitude / sup : 0.0;
    for (double& x : v) x *= scale;
    return SurfaceState{Field::from_samples(g, std::move(v)), 0.0};
}

} // namespace helesim
