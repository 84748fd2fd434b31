#include <iostream>

#include <CLI11.hpp>

#include "flowshoot/app/run.hpp"
#include "flowshoot/version.hpp"

int main(int argc, char** argv) {
    namespace app = flowshoot::app;
    CLI::App cli{"Time-optimal extremals for navigation in a steady flow inside a state constraint"};
    cli.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    app::SolveOptions solve_opt;
    auto* solve = cli.add_subcommand("solve", "compute the extremal field of a scenario");
    solve->add_option("scenario", scenario, "scenario file")->required();
    solve->add_option("--out", out_dir, "output directory (overrides $" + std::string(app::kOutputDirEnv) +
                                            " and output.dir)");
    solve->add_flag("--force", solve_opt.force, "solve even when admission checks fail");
    solve->add_option("--threads", solve_opt.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    auto* check = cli.add_subcommand("check", "run regularity and feasibility checks only");
    check->add_option("scenario", scenario, "scenario file")->required();

    std::string summary;
    std::vector<std::string> csvs;
    auto* verify = cli.add_subcommand("verify", "re-check stored trajectories against the maximum principle");
    verify->add_option("summary", summary, "summary.json of a previous run")->required();
    verify->add_option("csv", csvs, "trajectory files")->required();

    cli.add_subcommand("version", "print the solver version");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::kExitFailure;
    }

    if (*solve) {
        if (!out_dir.empty()) solve_opt.out_dir = out_dir;
        return app::run_solve(scenario, solve_opt, std::cout, std::cerr);
    }
    if (*check) return app::run_check(scenario, std::cout, std::cerr);
    if (*verify) return app::run_verify(summary, {csvs.begin(), csvs.end()}, std::cout, std::cerr);
    std::cout << "flowshoot " << flowshoot::kVersion << '\n';
    return app::kExitOk;
}
