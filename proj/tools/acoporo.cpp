// Command-line front end: compute traces, check them against the Laplace-domain
// reference, or print the default two-receiver configuration.

#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include <acoporo/run.hpp>

int main(int argc, char **argv)
{
    CLI::App app{"Analytical Green functions and seismograms for a fluid / poroelastic interface"};
    app.require_subcommand(1);

    std::string config_path;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool quiet = false;

    auto *compute = app.add_subcommand("compute", "compute seismograms for every receiver");
    compute->add_option("--config", config_path, "configuration file (JSON)")->required();
    compute->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    compute->add_flag("--quiet", quiet, "no progress lines");

    auto *verify = app.add_subcommand("verify", "compare Laplace transforms of the traces with the reference");
    verify->add_option("--config", config_path, "configuration file (JSON)")->required();
    verify->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    verify->add_flag("--quiet", quiet, "no per-row lines");

    app.add_subcommand("fixture", "print the default configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : acoporo::kConfig;
    }

    if (app.got_subcommand("fixture")) {
        std::cout << acoporo::to_json(acoporo::fixture_config()).dump(2) << "\n";
        return acoporo::kOk;
    }

    acoporo::RunConfig cfg;
    try {
        cfg = acoporo::load_config(config_path);
    } catch (const acoporo::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return acoporo::kConfig;
    }
    const acoporo::RunOptions opt{threads, quiet};
    if (app.got_subcommand("compute")) {
        return acoporo::run_compute(cfg, opt);
    }
    return acoporo::run_verify(cfg, opt);
}
