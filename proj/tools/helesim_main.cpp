#include <CLI11.hpp>

#include <iostream>

#include "helesim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Hele-Shaw interface simulator and verification harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI-style key = value file");
        sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
        sub->add_option("--seed", seed, "initial-condition seed override")
            ->each([&](const std::string&) { seed_set = true; });
    };
    add_common(app.add_subcommand("simulate", "integrate and record functionals"));
    add_common(app.add_subcommand("verify", "run and check every monitor"));
    add_common(app.add_subcommand(
        "oracle-compare", "expansion vs elliptic oracle refinement table"));
    add_common(app.add_subcommand("sweep", "repeat simulate over a parameter grid"));

    CLI11_PARSE(app, argc, argv);

    try {
        helesim::RunConfig cfg = config_path.empty()
                                     ? helesim::parse_config("")
                                     : helesim::load_config_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.ic_seed = seed;
        const std::string name = app.get_subcommands().front()->get_name();
        return helesim::execute(helesim::command_from_name(name), cfg, std::cout);
    } catch (const helesim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const helesim::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
