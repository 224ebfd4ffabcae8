#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "slowlight/error.hpp"
#include "slowlight/scenario.hpp"

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kDivergence = 2, kVerification = 3 };

}  // namespace

int main(int argc, char** argv) {
    using namespace slowlight;

    CLI::App app{"Slow-light soliton of the nonlinear Lambda model on an arbitrary control field"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--tol", tol, "solver tolerance (overrides solver.tol)")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "seed for randomized invariant checks");
    };
    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "field envelopes and atomic populations on a (zeta, tau) grid"},
        {"trajectory", "soliton peak trajectory and group velocity"},
        {"stop", "stopping distance, relative correction and memory-bit profile"},
        {"verify", "Maxwell-Bloch residual convergence and invariant checks"},
        {"sweep", "stop reports over one swept parameter"},
    };
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        auto cfg = with_overrides(load_config(config_path), tol, seed);
        RunResult result;
        if (command == "simulate") result = run_simulate(cfg);
        else if (command == "trajectory") result = run_trajectory(cfg);
        else if (command == "stop") result = run_stop(cfg);
        else if (command == "verify") result = run_verify(cfg);
        else result = run_sweep(cfg);

        for (const auto& path : write_tables(result, command, cfg, out_dir.value_or(cfg.output_dir)))
            std::cout << path.string() << '\n';
        if (!result.verification_passed) {
            std::cerr << "verification failed; see verify_checks.csv\n";
            return kVerification;
        }
        return kOk;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const DivergenceError& e) {
        std::cerr << "solver diverged: " << e.what() << '\n';
        return kDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
}
