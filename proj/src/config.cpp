#include "genkin/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "genkin/errors.hpp"

namespace genkin {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) fail(path + "." + it.key(), "unknown field");
    }
}

const json& need(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

const json* opt(const json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double num_or(const json& parent, const std::string& path, const char* key,
              double dflt) {
    const json* p = opt(parent, key);
    return p ? num(*p, path + "." + key) : dflt;
}

long int_or(const json& parent, const std::string& path, const char* key,
            long dflt) {
    const json* p = opt(parent, key);
    if (!p) return dflt;
    if (!p->is_number_integer()) fail(path + "." + key, "expected an integer");
    return p->get<long>();
}

bool bool_or(const json& parent, const std::string& path, const char* key,
             bool dflt) {
    const json* p = opt(parent, key);
    if (!p) return dflt;
    if (!p->is_boolean()) fail(path + "." + key, "expected a boolean");
    return p->get<bool>();
}

std::string str(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

KineticModel parse_kinetic(const json& j, const std::string& path) {
    check_keys(j, path,
               {"kind", "mass", "subtract_rest_mass", "amplitude", "exponent"});
    std::string kind = str(need(j, path, "kind"), path + ".kind");
    try {
        if (kind == "nonrelativistic")
            return KineticModel::nonrelativistic(num_or(j, path, "mass", 1.0));
        if (kind == "relativistic")
            return KineticModel::relativistic(
                num_or(j, path, "mass", 1.0),
                bool_or(j, path, "subtract_rest_mass", true));
        if (kind == "power_law")
            return KineticModel::power_law(num_or(j, path, "amplitude", 1.0),
                                           num_or(j, path, "exponent", 2.0));
    } catch (const Error& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown kinetic kind '" + kind + "'");
}

PotentialTerm parse_term(const json& j, const std::string& path) {
    check_keys(j, path,
               {"kind", "strength", "stiffness", "slope", "amplitude",
                "exponent"});
    std::string kind = str(need(j, path, "kind"), path + ".kind");
    try {
        if (kind == "coulomb")
            return PotentialTerm::coulomb(num_or(j, path, "strength", 1.0));
        if (kind == "harmonic")
            return PotentialTerm::harmonic(num_or(j, path, "stiffness", 1.0));
        if (kind == "linear")
            return PotentialTerm::linear(num_or(j, path, "slope", 1.0));
        if (kind == "power_law")
            return PotentialTerm::power_law(num_or(j, path, "amplitude", 1.0),
                                            num_or(j, path, "exponent", 2.0));
    } catch (const Error& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown potential term kind '" + kind + "'");
}

SystemSpec parse_system(const json& j, const std::string& path) {
    check_keys(j, path, {"dimension", "kinetic", "potential"});
    SystemSpec s;
    long dim = int_or(j, path, "dimension", 1);
    if (dim < 1 || dim > 3) fail(path + ".dimension", "must be 1, 2, or 3");
    s.dimension = int(dim);
    s.kinetic = parse_kinetic(need(j, path, "kinetic"), path + ".kinetic");
    const json& pot = need(j, path, "potential");
    check_keys(pot, path + ".potential", {"terms"});
    const json& terms = need(pot, path + ".potential", "terms");
    if (!terms.is_array() || terms.empty())
        fail(path + ".potential.terms", "expected a non-empty array");
    for (size_t i = 0; i < terms.size(); ++i)
        s.potential.terms.push_back(parse_term(
            terms[i], path + ".potential.terms[" + std::to_string(i) + "]"));
    return s;
}

Vec parse_vec(const json& j, const std::string& path, int dim) {
    if (!j.is_array() || int(j.size()) != dim)
        fail(path, "expected an array of " + std::to_string(dim) + " numbers");
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i)
        v.c[i] = num(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

void parse_integrate(const json* j, const std::string& path,
                     IntegrateOptions& o) {
    if (!j) return;
    check_keys(*j, path,
               {"rel_tol", "abs_tol", "method", "drift_budget", "initial_step",
                "max_steps", "singular_guard"});
    o.rel_tol = num_or(*j, path, "rel_tol", o.rel_tol);
    o.abs_tol = num_or(*j, path, "abs_tol", o.abs_tol);
    o.drift_budget = num_or(*j, path, "drift_budget", o.drift_budget);
    o.initial_step = num_or(*j, path, "initial_step", o.initial_step);
    o.max_steps = int_or(*j, path, "max_steps", o.max_steps);
    o.singular_guard = num_or(*j, path, "singular_guard", o.singular_guard);
    if (const json* m = opt(*j, "method")) {
        std::string s = str(*m, path + ".method");
        if (s == "rk54")
            o.method = Integrator::rk54;
        else if (s == "rk853")
            o.method = Integrator::rk853;
        else
            fail(path + ".method", "expected \"rk54\" or \"rk853\"");
    }
}

void parse_radial(const json* j, const std::string& path, RadialOptions& o) {
    if (!j) return;
    check_keys(*j, path,
               {"quad_rel_tol", "base_nodes", "max_nodes", "ts_max_level",
                "root_rel_tol", "scale_hint", "window_lo", "window_hi",
                "newton_rel_tol", "E_lo", "E_hi"});
    o.quad_rel_tol = num_or(*j, path, "quad_rel_tol", o.quad_rel_tol);
    o.base_nodes = int(int_or(*j, path, "base_nodes", o.base_nodes));
    o.max_nodes = int(int_or(*j, path, "max_nodes", o.max_nodes));
    o.ts_max_level = int(int_or(*j, path, "ts_max_level", o.ts_max_level));
    o.root_rel_tol = num_or(*j, path, "root_rel_tol", o.root_rel_tol);
    o.scale_hint = num_or(*j, path, "scale_hint", o.scale_hint);
    o.window_lo = num_or(*j, path, "window_lo", o.window_lo);
    o.window_hi = num_or(*j, path, "window_hi", o.window_hi);
    o.newton_rel_tol = num_or(*j, path, "newton_rel_tol", o.newton_rel_tol);
    o.E_lo = num_or(*j, path, "E_lo", o.E_lo);
    o.E_hi = num_or(*j, path, "E_hi", o.E_hi);
}

std::string safe_csv_name(const json& parent, const std::string& path,
                          const char* key, const std::string& dflt) {
    const json* p = opt(parent, key);
    if (!p) return dflt;
    std::string name = str(*p, path + "." + key);
    if (name.empty() || name.front() == '/' ||
        name.find("..") != std::string::npos)
        fail(path + "." + key,
             "expected a plain file name inside the output directory");
    return name;
}

}  // namespace

std::string task_name(TaskKind t) {
    switch (t) {
        case TaskKind::simulate: return "simulate";
        case TaskKind::virial: return "virial";
        case TaskKind::hellmann_feynman: return "hellmann_feynman";
        case TaskKind::compare: return "compare";
        case TaskKind::validate_kinetic: return "validate_kinetic";
        case TaskKind::sweep: return "sweep";
    }
    return "?";
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
    const std::string root = "config";
    ExperimentConfig cfg;
    cfg.echo = doc;

    if (!doc.is_object()) fail(root, "expected a JSON object");
    if (const json* s = opt(doc, "schema")) {
        std::string v = str(*s, root + ".schema");
        if (v != "genkin-config/1")
            fail(root + ".schema", "unsupported schema '" + v + "'");
    }
    if (const json* s = opt(doc, "seed")) {
        if (!s->is_number_integer() || s->get<long long>() < 0)
            fail(root + ".seed", "expected a non-negative integer");
        cfg.seed = s->get<std::uint64_t>();
    }

    std::string task = str(need(doc, root, "task"), root + ".task");
    if (task == "simulate") cfg.task = TaskKind::simulate;
    else if (task == "virial") cfg.task = TaskKind::virial;
    else if (task == "hellmann_feynman") cfg.task = TaskKind::hellmann_feynman;
    else if (task == "compare") cfg.task = TaskKind::compare;
    else if (task == "validate_kinetic") cfg.task = TaskKind::validate_kinetic;
    else if (task == "sweep") cfg.task = TaskKind::sweep;
    else fail(root + ".task", "unknown task '" + task + "'");

    check_keys(doc, root,
               {"schema", "seed", "task", "system", "systems", task.c_str()});

    auto parse_single = [&]() {
        if (opt(doc, "systems"))
            fail(root + ".systems", "this task takes a single \"system\" object");
        cfg.systems.push_back(
            parse_system(need(doc, root, "system"), root + ".system"));
    };
    auto parse_pair = [&]() {
        if (opt(doc, "system"))
            fail(root + ".system",
                 "this task takes a two-element \"systems\" array");
        const json& arr = need(doc, root, "systems");
        if (!arr.is_array() || arr.size() != 2)
            fail(root + ".systems", "expected exactly two systems");
        for (size_t i = 0; i < arr.size(); ++i)
            cfg.systems.push_back(parse_system(
                arr[i], root + ".systems[" + std::to_string(i) + "]"));
    };

    switch (cfg.task) {
        case TaskKind::simulate: {
            const json& j = need(doc, root, "simulate");
            const std::string p = root + ".simulate";
            check_keys(j, p, {"initial", "t_end", "integrate", "csv"});
            parse_single();
            SimulateParams& sp = cfg.simulate;
            const json& init = need(j, p, "initial");
            if (opt(init, "E")) {
                check_keys(init, p + ".initial", {"E", "L"});
                sp.from_orbit = true;
                sp.E = num(need(init, p + ".initial", "E"), p + ".initial.E");
                sp.L = num_or(init, p + ".initial", "L", 0.0);
            } else {
                check_keys(init, p + ".initial", {"r", "p", "t"});
                sp.initial.t = num_or(init, p + ".initial", "t", 0.0);
                sp.initial.r =
                    parse_vec(need(init, p + ".initial", "r"),
                              p + ".initial.r", cfg.systems[0].dimension);
                sp.initial.p =
                    parse_vec(need(init, p + ".initial", "p"),
                              p + ".initial.p", cfg.systems[0].dimension);
            }
            sp.t_end = num(need(j, p, "t_end"), p + ".t_end");
            if (!std::isfinite(sp.t_end)) fail(p + ".t_end", "must be finite");
            parse_integrate(opt(j, "integrate"), p + ".integrate", sp.integrate);
            sp.csv = safe_csv_name(j, p, "csv", sp.csv);
            break;
        }
        case TaskKind::virial: {
            const json& j = need(doc, root, "virial");
            const std::string p = root + ".virial";
            check_keys(j, p, {"E", "L", "tolerance", "use_trajectory",
                              "periods", "integrate", "radial"});
            parse_single();
            VirialParams& vp = cfg.virial;
            vp.E = num(need(j, p, "E"), p + ".E");
            vp.L = num_or(j, p, "L", 0.0);
            vp.opts.tolerance = num_or(j, p, "tolerance", vp.opts.tolerance);
            vp.opts.use_trajectory =
                bool_or(j, p, "use_trajectory", vp.opts.use_trajectory);
            vp.opts.periods = num_or(j, p, "periods", vp.opts.periods);
            parse_integrate(opt(j, "integrate"), p + ".integrate",
                            vp.opts.integrate);
            parse_radial(opt(j, "radial"), p + ".radial", vp.opts.radial);
            break;
        }
        case TaskKind::hellmann_feynman: {
            const json& j = need(doc, root, "hellmann_feynman");
            const std::string p = root + ".hellmann_feynman";
            check_keys(j, p,
                       {"target", "I", "L", "tolerance", "rel_step", "radial"});
            parse_single();
            HellmannFeynmanParams& hp = cfg.hellmann_feynman;
            hp.target = str(need(j, p, "target"), p + ".target");
            hp.I = num(need(j, p, "I"), p + ".I");
            if (!(hp.I > 0.0)) fail(p + ".I", "must be > 0");
            hp.L = num_or(j, p, "L", 0.0);
            hp.opts.tolerance = num_or(j, p, "tolerance", hp.opts.tolerance);
            hp.opts.rel_step = num_or(j, p, "rel_step", hp.opts.rel_step);
            parse_radial(opt(j, "radial"), p + ".radial", hp.opts.radial);
            try {
                resolve_binding(cfg.systems[0], hp.target);
            } catch (const Error& e) {
                fail(p + ".target", e.what());
            }
            break;
        }
        case TaskKind::compare: {
            const json& j = need(doc, root, "compare");
            const std::string p = root + ".compare";
            check_keys(j, p, {"I", "L", "tolerance", "slope_tolerance",
                              "mu_points", "dominance_samples", "radial"});
            parse_pair();
            CompareParams& cp = cfg.compare;
            cp.I = num(need(j, p, "I"), p + ".I");
            if (!(cp.I > 0.0)) fail(p + ".I", "must be > 0");
            cp.L = num_or(j, p, "L", 0.0);
            cp.opts.tolerance = num_or(j, p, "tolerance", cp.opts.tolerance);
            cp.opts.slope_tolerance =
                num_or(j, p, "slope_tolerance", cp.opts.slope_tolerance);
            cp.opts.mu_points = int(int_or(j, p, "mu_points", cp.opts.mu_points));
            if (cp.opts.mu_points < 3) fail(p + ".mu_points", "must be >= 3");
            cp.opts.dominance_samples = int(
                int_or(j, p, "dominance_samples", cp.opts.dominance_samples));
            if (cp.opts.dominance_samples < 10)
                fail(p + ".dominance_samples", "must be >= 10");
            cp.opts.seed = cfg.seed;
            parse_radial(opt(j, "radial"), p + ".radial", cp.opts.radial);
            break;
        }
        case TaskKind::validate_kinetic: {
            const json& j = need(doc, root, "validate_kinetic");
            const std::string p = root + ".validate_kinetic";
            check_keys(j, p, {"x_max", "samples"});
            parse_single();
            cfg.validate_kinetic.x_max = num_or(j, p, "x_max", 1e6);
            if (!(cfg.validate_kinetic.x_max > 0.0))
                fail(p + ".x_max", "must be > 0");
            cfg.validate_kinetic.samples = int(int_or(j, p, "samples", 256));
            if (cfg.validate_kinetic.samples < 2)
                fail(p + ".samples", "must be >= 2");
            break;
        }
        case TaskKind::sweep: {
            const json& j = need(doc, root, "sweep");
            const std::string p = root + ".sweep";
            check_keys(j, p, {"target", "values", "I", "L", "radial", "csv"});
            SweepParams& wp = cfg.sweep;
            wp.target = str(need(j, p, "target"), p + ".target");
            if (wp.target == "mu")
                parse_pair();
            else
                parse_single();
            const json& vals = need(j, p, "values");
            if (!vals.is_array() || vals.size() < 2)
                fail(p + ".values", "expected an array of at least 2 values");
            for (size_t i = 0; i < vals.size(); ++i)
                wp.values.push_back(
                    num(vals[i], p + ".values[" + std::to_string(i) + "]"));
            wp.I = num(need(j, p, "I"), p + ".I");
            if (!(wp.I > 0.0)) fail(p + ".I", "must be > 0");
            wp.L = num_or(j, p, "L", 0.0);
            parse_radial(opt(j, "radial"), p + ".radial", wp.radial);
            wp.csv = safe_csv_name(j, p, "csv", wp.csv);
            if (wp.target != "mu") {
                try {
                    resolve_binding(cfg.systems[0], wp.target);
                } catch (const Error& e) {
                    fail(p + ".target", e.what());
                }
            }
            break;
        }
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(ss.str());
    } catch (const std::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return parse_config(doc);
}

std::string canonical_json(const nlohmann::json& j) { return j.dump(); }

std::string config_hash(const nlohmann::json& j) {
    std::string s = canonical_json(j);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016" PRIx64, h);
    return buf;
}

}  // namespace genkin
