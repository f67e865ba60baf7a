#include "genkin/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "genkin/errors.hpp"
#include "genkin/radial.hpp"
#include "genkin/version.hpp"

namespace genkin {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", x);
    return b;
}

void atomic_write(const fs::path& target, const std::string& content) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

json theorem_to_json(const TheoremReport& r) {
    json j;
    j["kind"] = r.kind;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["scale"] = r.scale;
    j["passed"] = r.passed;
    j["diagnostics"] = r.diagnostics;
    if (!r.table.empty()) {
        json t = json::array();
        for (const auto& row : r.table) t.push_back(row);
        j["table"] = t;
    }
    return j;
}

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v.c[i]);
    return a;
}

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    std::string error_code;
    double E = 0.0, tau_r = 0.0, action_r = 0.0, phi = 0.0;
    double avg_T = 0.0, avg_V = 0.0, virial_residual = 0.0;
};

SweepRow sweep_point(const ExperimentConfig& cfg, double v) {
    SweepRow row;
    row.value = v;
    try {
        SystemSpec s;
        if (cfg.sweep.target == "mu") {
            s.dimension = cfg.systems[0].dimension;
            s.kinetic = mix_kinetics(cfg.systems[0].kinetic,
                                     cfg.systems[1].kinetic, v);
            s.potential = mix_potentials(cfg.systems[0].potential,
                                         cfg.systems[1].potential, v);
        } else {
            s = resolve_binding(cfg.systems[0], cfg.sweep.target).rebind(v);
        }
        double E = energy_at_action(s, cfg.sweep.I, cfg.sweep.L,
                                    cfg.sweep.radial);
        RadialSolution sol(s, E, cfg.sweep.L, cfg.sweep.radial);
        row.E = E;
        row.tau_r = sol.geometry().tau_r;
        row.action_r = sol.geometry().action_r;
        row.phi = sol.geometry().phi;
        row.avg_T = sol.average_kinetic().value;
        row.avg_V = sol.average_potential().value;
        auto kv = sol.average_kinetic_virial();
        auto pv = sol.average_potential_virial();
        double scale = std::max({std::abs(kv.value), std::abs(pv.value),
                                 std::abs(E)});
        if (scale == 0.0) scale = 1.0;
        row.virial_residual = std::abs(kv.value - pv.value) / scale;
        row.ok = true;
    } catch (const Error& e) {
        row.error_code = e.code();
    } catch (const std::exception&) {
        row.error_code = "error";
    }
    return row;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const RunFlags& flags) {
    json report;
    json checks = json::array();
    json artifacts = json::array();
    json warnings = json::array();
    bool any_fail = false;
    auto t_start = std::chrono::steady_clock::now();

    report["schema"] = "genkin-report/1";
    report["version"] = kVersion;
    report["config"] = cfg.echo;
    report["config_hash"] = config_hash(cfg.echo);
    report["task"] = task_name(cfg.task);

    fs::path out_dir(flags.out_dir);

    auto finalize = [&](const char* status) {
        report["checks"] = checks;
        report["artifacts"] = artifacts;
        report["warnings"] = warnings;
        report["status"] = status;
        if (!flags.normalize_report) {
            double sec = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t_start)
                             .count();
            report["timing"] = json{{"seconds", sec}};
        }
        fs::create_directories(out_dir);
        atomic_write(out_dir / "report.json", report.dump(2) + "\n");
    };

    try {
        switch (cfg.task) {
            case TaskKind::simulate: {
                const SystemSpec& sys = cfg.systems[0];
                PhaseState s0 = cfg.simulate.from_orbit
                                    ? orbit_initial_state(sys, cfg.simulate.E,
                                                          cfg.simulate.L)
                                    : cfg.simulate.initial;
                Trajectory traj = integrate(sys, s0, cfg.simulate.t_end,
                                            cfg.simulate.integrate);
                std::ostringstream csv;
                write_trajectory_csv(traj, csv);
                fs::create_directories(out_dir);
                atomic_write(out_dir / cfg.simulate.csv, csv.str());
                artifacts.push_back(cfg.simulate.csv);

                const PhaseState& fin = traj.samples().back();
                json sim;
                sim["steps_accepted"] = traj.steps_accepted();
                sim["steps_rejected"] = traj.steps_rejected();
                sim["energy_drift"] = traj.energy_drift();
                sim["initial_energy"] = traj.initial_energy();
                sim["final"] = json{{"t", fin.t},
                                    {"r", vec_to_json(fin.r)},
                                    {"p", vec_to_json(fin.p)}};
                try {
                    sim["period"] = find_period(traj);
                } catch (const Error&) {
                    // aperiodic or window too short; not an error for export
                }
                report["simulate"] = sim;
                if (!flags.quiet)
                    std::printf("simulate: %s (steps=%ld, drift=%.3e)\n",
                                cfg.simulate.csv.c_str(),
                                traj.steps_accepted(), traj.energy_drift());
                break;
            }
            case TaskKind::virial: {
                TheoremReport r = check_virial(cfg.systems[0], cfg.virial.E,
                                               cfg.virial.L, cfg.virial.opts);
                checks.push_back(theorem_to_json(r));
                any_fail = any_fail || !r.passed;
                break;
            }
            case TaskKind::hellmann_feynman: {
                TheoremReport r = check_hellmann_feynman(
                    cfg.systems[0], cfg.hellmann_feynman.target,
                    cfg.hellmann_feynman.I, cfg.hellmann_feynman.L,
                    cfg.hellmann_feynman.opts);
                checks.push_back(theorem_to_json(r));
                any_fail = any_fail || !r.passed;
                break;
            }
            case TaskKind::compare: {
                TheoremReport r =
                    check_comparison(cfg.systems[0], cfg.systems[1],
                                     cfg.compare.I, cfg.compare.L,
                                     cfg.compare.opts);
                checks.push_back(theorem_to_json(r));
                any_fail = any_fail || !r.passed;
                break;
            }
            case TaskKind::validate_kinetic: {
                KineticValidation kv =
                    validate_kinetic(cfg.systems[0].kinetic,
                                     cfg.validate_kinetic.x_max,
                                     cfg.validate_kinetic.samples);
                json v;
                v["admissible"] = kv.admissible;
                v["velocity_map_invertible"] = kv.velocity_map_invertible;
                v["min_kprime"] = kv.min_kprime;
                v["findings"] = kv.findings;
                report["validation"] = v;
                any_fail = any_fail || !kv.admissible;
                if (!flags.quiet)
                    std::printf("validate_kinetic: %s\n",
                                kv.admissible ? "admissible" : "not admissible");
                break;
            }
            case TaskKind::sweep: {
                const size_t n = cfg.sweep.values.size();
                std::vector<SweepRow> rows(n);
                unsigned hw = std::thread::hardware_concurrency();
                size_t jobs = flags.jobs > 0 ? size_t(flags.jobs)
                                             : std::max(1u, hw);
                jobs = std::min(jobs, n);
                std::atomic<size_t> next{0};
                auto worker = [&]() {
                    for (;;) {
                        size_t i = next.fetch_add(1);
                        if (i >= n) return;
                        rows[i] = sweep_point(cfg, cfg.sweep.values[i]);
                    }
                };
                std::vector<std::thread> pool;
                for (size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
                worker();
                for (auto& th : pool) th.join();

                std::ostringstream csv;
                csv << "value,E,tau_r,action_r,phi,avg_kinetic,avg_potential,"
                       "virial_residual,error\n";
                json table = json::array();
                for (const SweepRow& row : rows) {
                    json jr;
                    jr["value"] = row.value;
                    if (row.ok) {
                        csv << fmt17(row.value) << ',' << fmt17(row.E) << ','
                            << fmt17(row.tau_r) << ',' << fmt17(row.action_r)
                            << ',' << fmt17(row.phi) << ',' << fmt17(row.avg_T)
                            << ',' << fmt17(row.avg_V) << ','
                            << fmt17(row.virial_residual) << ",\n";
                        jr["E"] = row.E;
                        jr["tau_r"] = row.tau_r;
                        jr["action_r"] = row.action_r;
                        jr["phi"] = row.phi;
                        jr["avg_kinetic"] = row.avg_T;
                        jr["avg_potential"] = row.avg_V;
                        jr["virial_residual"] = row.virial_residual;
                    } else {
                        csv << fmt17(row.value) << ",,,,,,,,"
                            << row.error_code << "\n";
                        jr["error"] = row.error_code;
                        warnings.push_back("sweep value " + fmt17(row.value) +
                                           ": " + row.error_code);
                    }
                    table.push_back(jr);
                }
                fs::create_directories(out_dir);
                atomic_write(out_dir / cfg.sweep.csv, csv.str());
                artifacts.push_back(cfg.sweep.csv);
                report["sweep"] = table;
                if (!flags.quiet)
                    std::printf("sweep: %zu points -> %s\n", n,
                                cfg.sweep.csv.c_str());
                break;
            }
        }

        if (!flags.quiet)
            for (const auto& c : checks)
                std::printf("[%s] %s residual=%.3e (tolerance %.1e)\n",
                            c["passed"].get<bool>() ? "PASS" : "FAIL",
                            c["kind"].get<std::string>().c_str(),
                            c["residual"].get<double>(),
                            c["tolerance"].get<double>());

        finalize(any_fail ? "check_failed" : "pass");
        return any_fail ? 2 : 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        report["error"] = json{{"code", e.code()}, {"message", e.what()}};
        try {
            finalize("error");
        } catch (...) {
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

int run_experiment(const std::string& config_path, const RunFlags& flags) {
    ExperimentConfig cfg;
    try {
        cfg = load_config_file(config_path);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return run_experiment(cfg, flags);
}

}  // namespace genkin
