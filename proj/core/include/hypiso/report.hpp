#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypiso/families.hpp"
#include "hypiso/serialize.hpp"
#include "hypiso/verify.hpp"

namespace hypiso {

// Flat key-value configuration with dotted sections, parsed from a
// hand-editable file. All numeric fields are validated against the
// module preconditions before any computation starts.
struct RunConfig {
    // family
    std::string kind = "disk"; // cap | disk | mobius-image | union | catenoid
    int k = 2;
    int n = 3;
    double theta = 0.7853981633974483; // pi/4
    std::optional<Vec> axis;           // default e_n
    std::optional<Vec> translation;    // mobius-image offset
    double neck = 0.5;
    double tilt = 0.7; // union: tilt of the second disk

    // measurement
    double truncation_radius = 1.0 - 1e-6;
    int grid_size = 100;

    // sweep
    std::vector<double> theta_grid;

    // verdict selection; empty means every applicable verdict
    std::vector<std::string> verdicts;

    MobiusVolumeConfig mobius;
    bool mobius_history_csv = false;

    unsigned seed = 0;
    std::string out_dir = ".";
    bool corrupt_curve = false;  // negative-control hook for CI
    bool include_timings = false;

    std::vector<std::pair<std::string, std::string>> echo; // raw parsed pairs
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

Submanifold build_family(const RunConfig& cfg);

struct CommandResult {
    int exit_code = 0;
    std::string summary;
};

// One CSV row per theta: theta, Vol_R(Sigma), Vol_R(boundary), linear
// slack, classical status, reverse slack. Exit 0 iff every applicable
// verdict passes. Workers bounded by HYPISO_THREADS.
CommandResult cmd_sweep_theta(const RunConfig& cfg);

// "r,ratio" CSV; exit 1 when the monotonicity verdict fails.
CommandResult cmd_monotonicity(const RunConfig& cfg);

// target: "submanifold" | "boundary". Exit 1 when the optimizer reports
// non-convergence (result still written).
CommandResult cmd_mobius(const RunConfig& cfg, const std::string& target);

// Every applicable verdict; exit 0 all pass, 1 any fail, 2 numeric error.
CommandResult cmd_verify_all(const RunConfig& cfg);

} // namespace hypiso
