#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phe/errors.hpp"
#include "phe/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitTooLarge = 3;
constexpr int kExitIo = 4;
constexpr int kExitInternal = 5;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out_dir;
    bool unsafe = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--workers", args.workers, "override the worker count");
    cmd->add_option("--out-dir", args.out_dir, "override the output directory");
    cmd->add_flag("--unsafe-penalties", args.unsafe,
                  "allow penalty coefficients below the framework floor");
}

phe::ExperimentConfig load(const CommonArgs& args) {
    auto cfg = phe::ExperimentConfig::from_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.workers) cfg.workers = *args.workers;
    if (args.out_dir) cfg.out_dir = *args.out_dir;
    if (args.unsafe) cfg.unsafe_penalties = true;
    if (!args.out_dir && cfg.out_dir == "out") {
        if (const char* env = std::getenv("PHE_OUT_DIR")) cfg.out_dir = env;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"penalized histogram estimation experiments"};
    app.require_subcommand(1);

    CommonArgs run_args, rate_args, spike_args, tail_args, oracle_args, enum_args;
    auto* run_cmd = app.add_subcommand("run", "run the selection pipeline over replicates");
    add_common(run_cmd, run_args);
    auto* rate_cmd = app.add_subcommand("rate-study", "risk-vs-n slope study");
    add_common(rate_cmd, rate_args);
    auto* spike_cmd = app.add_subcommand("spike-study", "compare partition strategies on a bump");
    add_common(spike_cmd, spike_args);
    auto* tail_cmd = app.add_subcommand("tail-check", "chi-square deviation tail check");
    add_common(tail_cmd, tail_args);
    auto* oracle_cmd = app.add_subcommand("oracle-check", "risk-bound Monte Carlo check");
    add_common(oracle_cmd, oracle_args);
    auto* enum_cmd = app.add_subcommand("enumerate", "dump a family with weights");
    add_common(enum_cmd, enum_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            phe::run_experiment(load(run_args));
        } else if (rate_cmd->parsed()) {
            const auto res = phe::run_rate_study(load(rate_args));
            std::cout << phe::to_json(res).dump(2) << '\n';
        } else if (spike_cmd->parsed()) {
            const auto res = phe::run_spike_study(load(spike_args));
            std::cout << phe::to_json(res).dump(2) << '\n';
        } else if (tail_cmd->parsed()) {
            const auto res = phe::run_tail_check(load(tail_args));
            std::cout << phe::to_json(res).dump(2) << '\n';
            if (!res.pass) return 1;
        } else if (oracle_cmd->parsed()) {
            const auto res = phe::run_oracle_check(load(oracle_args));
            std::cout << phe::to_json(res).dump(2) << '\n';
            if (!res.pass) return 1;
        } else if (enum_cmd->parsed()) {
            std::cout << phe::enumerate_dump(load(enum_args)).dump(2) << '\n';
        }
    } catch (const phe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const phe::TooLargeError& e) {
        std::cerr << "size error: " << e.what() << '\n';
        return kExitTooLarge;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
