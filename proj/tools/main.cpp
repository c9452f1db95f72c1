#include <iostream>

#include <CLI11.hpp>

#include "hypiso/report.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    long seed = -1;
    double truncation = -1.0;
    int restarts = -1;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "random seed override");
    cmd->add_option("--truncation", args.truncation, "truncation radius override");
    cmd->add_option("--restarts", args.restarts, "optimizer restarts override");
    cmd->add_flag("--timings", args.timings, "include wall-clock timings in the report");
}

hypiso::RunConfig load(const CommonArgs& args) {
    hypiso::RunConfig cfg = hypiso::parse_config_file(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.seed >= 0) {
        cfg.seed = static_cast<unsigned>(args.seed);
        cfg.mobius.seed = cfg.seed + 7;
    }
    if (args.truncation > 0.0) cfg.truncation_radius = args.truncation;
    if (args.restarts > 0) cfg.mobius.restarts = args.restarts;
    cfg.include_timings = cfg.include_timings || args.timings;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypiso: Euclidean volumes and isoperimetric verdicts for complete "
                 "proper minimal submanifolds of the Poincare ball"};
    app.require_subcommand(1);

    CommonArgs sweep_args, mono_args, mobius_args, verify_args;
    std::string mobius_target = "boundary";

    CLI::App* sweep = app.add_subcommand("sweep-theta", "cap family sweep over theta");
    add_common(sweep, sweep_args);
    CLI::App* mono = app.add_subcommand("monotonicity", "m(r) curve and verdict");
    add_common(mono, mono_args);
    CLI::App* mob = app.add_subcommand("mobius", "Mobius volume optimizer");
    add_common(mob, mobius_args);
    mob->add_option("--target", mobius_target, "submanifold | boundary")
        ->check(CLI::IsMember({"submanifold", "boundary"}));
    CLI::App* ver = app.add_subcommand("verify-all", "every applicable verdict");
    add_common(ver, verify_args);

    CLI11_PARSE(app, argc, argv);

    try {
        hypiso::CommandResult res;
        if (sweep->parsed()) res = hypiso::cmd_sweep_theta(load(sweep_args));
        if (mono->parsed()) res = hypiso::cmd_monotonicity(load(mono_args));
        if (mob->parsed()) res = hypiso::cmd_mobius(load(mobius_args), mobius_target);
        if (ver->parsed()) res = hypiso::cmd_verify_all(load(verify_args));
        std::cout << res.summary << "\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "hypiso: error: " << e.what() << "\n";
        return 2;
    }
}
