#pragma once

#include <string>

#include "genkin/config.hpp"

namespace genkin {

struct RunFlags {
    std::string out_dir = "./out";
    bool normalize_report = false;  // drop timing so reports diff cleanly
    bool quiet = false;
    int jobs = 0;  // sweep parallelism; 0 = hardware concurrency
};

// Executes the configured task and writes report.json (plus any CSV
// artifacts) under out_dir, atomically. Returns the process exit code:
// 0 all verdicts pass, 2 at least one check failed, 1 configuration or
// numerical error (message on stderr, error echoed into the report when
// possible).
int run_experiment(const std::string& config_path, const RunFlags& flags);

// The same, for an already-parsed config (used by tests).
int run_experiment(const ExperimentConfig& cfg, const RunFlags& flags);

}  // namespace genkin
