#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helesim/csv.hpp"
#include "helesim/runner.hpp"

using namespace helesim;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("helesim_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string tiny_config(const std::string& extra = "") {
    return "n = 32\n"
           "t_end = 0.05\n"
           "dt = 1e-3\n"
           "record_every = 10\n"
           "dno_order = 4\n" +
           extra;
}

} // namespace

TEST_CASE("empty document yields the documented defaults") {
    RunConfig cfg = parse_config("");
    CHECK(cfg.dim == 1);
    CHECK(cfg.n == 256);
    CHECK(cfg.ic == "single_mode");
    CHECK(cfg.ic_k == 1);
    CHECK(cfg.ic_amplitude == doctest::Approx(0.1));
    CHECK(cfg.solver.t_end == doctest::Approx(1.0));
    CHECK(cfg.solver.dt == doctest::Approx(1e-3));
    CHECK(cfg.solver.scheme == Scheme::imex1);
    CHECK(cfg.solver.p_list == std::vector<int>{1, 2, 4});
}

TEST_CASE("config parsing") {
    SUBCASE("sections and comments are tolerated") {
        RunConfig cfg = parse_config(
            "[grid]\n# comment\nn = 64\n; another\ndt = 1e-2 # inline\n");
        CHECK(cfg.n == 64);
        CHECK(cfg.solver.dt == doctest::Approx(1e-2));
    }
    SUBCASE("p_list") {
        RunConfig cfg = parse_config("p_list = 1,2,4\n");
        CHECK(cfg.solver.p_list == std::vector<int>{1, 2, 4});
        CHECK_THROWS_AS(parse_config("p_list = 1,3\n"), ConfigError);
    }
    SUBCASE("unknown keys are named in the error") {
        try {
            parse_config("frobnicate = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
        }
    }
    SUBCASE("out-of-range values name the permitted range") {
        try {
            parse_config("dt = -0.5\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("(0, 1]") != std::string::npos);
        }
    }
    SUBCASE("rk4 step restriction is enforced at load time") {
        CHECK_THROWS_AS(parse_config("scheme = rk4\ndt = 2e-2\n"), ConfigError);
        // dt below 0.5*dx loads fine
        RunConfig ok = parse_config("scheme = rk4\ndt = 1e-2\nn = 256\n");
        CHECK(ok.solver.scheme == Scheme::rk4);
    }
    SUBCASE("checkpoint initial condition requires a path") {
        CHECK_THROWS_AS(parse_config("ic = checkpoint\n"), ConfigError);
    }
    SUBCASE("render then parse round trips") {
        RunConfig cfg = parse_config("n = 64\ndt = 2e-3\np_list = 1,2\nic = multi_mode\n");
        RunConfig back = parse_config(render_config(cfg));
        CHECK(back.n == cfg.n);
        CHECK(back.solver.dt == cfg.solver.dt);
        CHECK(back.solver.p_list == cfg.solver.p_list);
        CHECK(back.ic == cfg.ic);
    }
    SUBCASE("missing file is an i/o error") {
        CHECK_THROWS_AS(load_config_file("/nonexistent/helesim.ini"), IoError);
    }
}

TEST_CASE("g17 formatting round trips doubles exactly") {
    for (double x : {0.1, std::numbers::pi, 1e-17, -3.5, 2.0 / 3.0}) {
        const double back = std::strtod(format_g17(x).c_str(), nullptr);
        CHECK(back == x);
    }
}

TEST_CASE("csv files use CRLF and a fixed header") {
    const std::string dir = fresh_dir("csv");
    const std::string path = dir + "/t.csv";
    write_csv(path, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    const std::string text = slurp(path);
    CHECK(text == "a,b\r\n1,2\r\n3,4\r\n");
}

TEST_CASE("simulate writes records, checkpoint and effective config") {
    const std::string dir = fresh_dir("simulate");
    RunConfig cfg = parse_config(tiny_config());
    cfg.out_dir = dir;
    std::ostringstream log;
    CHECK(execute(Command::simulate, cfg, log) == 0);

    const std::string csv = slurp(fs::path(dir) / "functionals.csv");
    // t_end/dt/record_every + 1 rows plus the header
    const auto lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 7);
    CHECK(csv.rfind("t,l2p_1,", 0) == 0);

    SurfaceState s = load_checkpoint((fs::path(dir) / "state.hshw").string());
    CHECK(s.t == doctest::Approx(0.05));
    CHECK(fs::exists(fs::path(dir) / "config_effective.ini"));
}

TEST_CASE("simulate is deterministic byte for byte") {
    RunConfig cfg = parse_config(tiny_config("ic = multi_mode\nic_seed = 9\n"));
    std::ostringstream log;
    const std::string d1 = fresh_dir("det1");
    const std::string d2 = fresh_dir("det2");
    cfg.out_dir = d1;
    REQUIRE(execute(Command::simulate, cfg, log) == 0);
    cfg.out_dir = d2;
    REQUIRE(execute(Command::simulate, cfg, log) == 0);
    CHECK(slurp(fs::path(d1) / "functionals.csv") ==
          slurp(fs::path(d2) / "functionals.csv"));
    CHECK(slurp(fs::path(d1) / "state.hshw") == slurp(fs::path(d2) / "state.hshw"));
}

TEST_CASE("verify passes on a healthy run") {
    const std::string dir = fresh_dir("verify");
    RunConfig cfg = parse_config(tiny_config());
    cfg.out_dir = dir;
    std::ostringstream log;
    CHECK(execute(Command::verify, cfg, log) == 0);
    const std::string report = slurp(fs::path(dir) / "verify.txt");
    CHECK(report.find("FAIL") == std::string::npos);
    CHECK(report.find("PASS lyapunov.l2p_1") != std::string::npos);
}

TEST_CASE("numerical breakdown maps to exit status 2") {
    const std::string dir = fresh_dir("breakdown");
    // slope far above the expansion precondition: the run aborts early
    RunConfig cfg = parse_config(tiny_config("ic_amplitude = 1.4\n"));
    cfg.out_dir = dir;
    std::ostringstream log;
    CHECK(execute(Command::simulate, cfg, log) == 2);
}

TEST_CASE("config errors inside execute map to exit status 1") {
    const std::string dir = fresh_dir("cfgerr");
    RunConfig cfg = parse_config("dim = 2\nn = 16\nn1 = 16\ndno_order = 4\n");
    cfg.out_dir = dir;
    std::ostringstream log;
    CHECK(execute(Command::oracle_compare, cfg, log) == 1);
}

TEST_CASE("oracle-compare emits a refinement table and passes") {
    const std::string dir = fresh_dir("oraclecmp");
    RunConfig cfg = parse_config(
        "n = 64\ndno_order = 10\noracle_vertical_cells = 128\n");
    cfg.out_dir = dir;
    std::ostringstream log;
    CHECK(execute(Command::oracle_compare, cfg, log) == 0);
    const std::string csv = slurp(fs::path(dir) / "oracle_compare.csv");
    CHECK(csv.rfind("resolution,order,rel_error", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 sizes
}

TEST_CASE("sweep runs every grid point into its own directory") {
    const std::string dir = fresh_dir("sweep");
    RunConfig cfg = parse_config(
        tiny_config("sweep_amplitude = 0.05,0.1\nic = single_mode\n"));
    cfg.out_dir = dir;
    std::ostringstream log;
    CHECK(execute(Command::sweep, cfg, log) == 0);
    CHECK(fs::exists(fs::path(dir) / "point_000" / "functionals.csv"));
    CHECK(fs::exists(fs::path(dir) / "point_001" / "functionals.csv"));
}

TEST_CASE("command names") {
    CHECK(command_from_name("simulate") == Command::simulate);
    CHECK(command_from_name("oracle-compare") == Command::oracle_compare);
    CHECK_THROWS_AS(command_from_name("explode"), ConfigError);
}
