#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "genkin/dynamics.hpp"
#include "genkin/models.hpp"
#include "genkin/theorems.hpp"

namespace genkin {

// A declarative experiment: one or two systems plus exactly one task. Parse
// failures throw ConfigError whose message starts with the offending field
// path (e.g. "config.system.kinetic.mass: must be > 0").

enum class TaskKind {
    simulate,
    virial,
    hellmann_feynman,
    compare,
    validate_kinetic,
    sweep
};

std::string task_name(TaskKind t);

struct SimulateParams {
    bool from_orbit = false;  // start from (E, L) instead of explicit (r, p)
    double E = 0.0, L = 0.0;
    PhaseState initial;
    double t_end = 10.0;
    IntegrateOptions integrate;
    std::string csv = "trajectory.csv";
};

struct VirialParams {
    double E = 0.0, L = 0.0;
    VirialOptions opts;
};

struct HellmannFeynmanParams {
    std::string target;
    double I = 1.0, L = 0.0;
    HellmannFeynmanOptions opts;
};

struct CompareParams {
    double I = 1.0, L = 0.0;
    ComparisonOptions opts;
};

struct ValidateKineticParams {
    double x_max = 1e6;
    int samples = 256;
};

struct SweepParams {
    // Either a parameter path into the single system, or the literal "mu" to
    // sweep the straight-line family between two systems.
    std::string target;
    std::vector<double> values;
    double I = 1.0, L = 0.0;
    RadialOptions radial;
    std::string csv = "sweep.csv";
};

struct ExperimentConfig {
    nlohmann::json echo;  // parsed document (keys sorted; drives the hash)
    std::uint64_t seed = 20240915;
    TaskKind task = TaskKind::simulate;
    std::vector<SystemSpec> systems;  // one entry; two for compare / mu sweep

    SimulateParams simulate;
    VirialParams virial;
    HellmannFeynmanParams hellmann_feynman;
    CompareParams compare;
    ValidateKineticParams validate_kinetic;
    SweepParams sweep;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

// Canonical serialization (sorted keys, no whitespace) and its FNV-1a hash,
// used to fingerprint configs inside reports.
std::string canonical_json(const nlohmann::json& j);
std::string config_hash(const nlohmann::json& j);

}  // namespace genkin
