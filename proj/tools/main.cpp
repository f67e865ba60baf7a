#include "CLI11.hpp"

#include "genkin/run.hpp"
#include "genkin/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"genkin: classical dynamics and identity checks for "
                 "Hamiltonians H = K(p^2) + V(r)"};
    app.set_version_flag("--version", genkin::kVersion);

    std::string config_path;
    genkin::RunFlags flags;
    app.add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    app.add_option("--out", flags.out_dir, "output directory")
        ->capture_default_str();
    app.add_flag("--normalize-report", flags.normalize_report,
                 "omit timing from report.json so runs diff byte-for-byte");
    app.add_flag("--quiet", flags.quiet, "suppress the stdout summary");
    app.add_option("--jobs", flags.jobs,
                   "max parallel sweep evaluations (0 = all cores)");

    CLI11_PARSE(app, argc, argv);
    return genkin::run_experiment(config_path, flags);
}
