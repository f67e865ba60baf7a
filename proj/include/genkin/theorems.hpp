#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "genkin/dynamics.hpp"
#include "genkin/radial.hpp"

namespace genkin {

// Outcome of one identity check. `residual` is |lhs - rhs| measured against
// `scale` (the larger of the two sides and the orbit energy), so tolerances
// stay meaningful when either side passes through zero.
struct TheoremReport {
    std::string kind;
    double lhs = 0.0, rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    double scale = 0.0;
    bool passed = false;
    std::map<std::string, double> diagnostics;
    std::vector<std::map<std::string, double>> table;  // per-row sweep detail
};

// <2 p^2 K'(p^2)> = <r . grad V> over one bound orbit at (E, L). The default
// path averages on the radial quadrature grid; the trajectory path integrates
// the motion for `periods` radial periods and compares time averages (slower,
// but exercises the equations of motion themselves).
struct VirialOptions {
    double tolerance = 1e-8;
    bool use_trajectory = false;
    double periods = 40.0;
    IntegrateOptions integrate;
    RadialOptions radial;
};
TheoremReport check_virial(const SystemSpec& sys, double E, double L,
                           const VirialOptions& opts = {});

// dE/dlambda at fixed (I, L) against the orbit average of dH/dlambda, where
// lambda is the parameter named by `target` (e.g. "kinetic.mass" or
// "potential.terms[0].stiffness"). The left side is a Richardson-extrapolated
// central difference of E(lambda) = energy at the fixed action.
struct HellmannFeynmanOptions {
    double tolerance = 1e-6;
    double rel_step = 1e-3;  // outer difference step, relative to |lambda|
    RadialOptions radial;
};
TheoremReport check_hellmann_feynman(const SystemSpec& sys,
                                     const std::string& target, double I,
                                     double L,
                                     const HellmannFeynmanOptions& opts = {});

// If H2 >= H1 everywhere in phase space then E2(I, L) >= E1(I, L). The check
// verifies pointwise dominance by sampling (throws DominanceError with a
// witness when it fails), compares the two energies at the fixed action,
// confirms E(mu) is nondecreasing along the straight-line family
// H_mu = (1-mu) H1 + mu H2, and matches dE/dmu against <H2 - H1> at mu = 1/2.
struct ComparisonOptions {
    double tolerance = 1e-8;        // ordering / monotonicity slack
    double slope_tolerance = 1e-4;  // dE/dmu vs <H2 - H1> agreement
    int mu_points = 11;
    int dominance_samples = 1000;
    std::uint64_t seed = 20240915;
    RadialOptions radial;
};
TheoremReport check_comparison(const SystemSpec& lower, const SystemSpec& upper,
                               double I, double L,
                               const ComparisonOptions& opts = {});

}  // namespace genkin
