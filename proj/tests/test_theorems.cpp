#include <cmath>

#include "doctest.h"
#include "genkin/errors.hpp"
#include "genkin/theorems.hpp"
#include "oracles.hpp"

using namespace genkin;

namespace {

SystemSpec make(int dim, KineticModel k, std::vector<PotentialTerm> terms) {
    SystemSpec sys;
    sys.dimension = dim;
    sys.kinetic = std::move(k);
    sys.potential.terms = std::move(terms);
    return sys;
}

}  // namespace

TEST_CASE("virial identity holds through the quadrature path") {
    struct Case {
        SystemSpec sys;
        double E, L;
    };
    std::vector<Case> cases;
    cases.push_back({make(2, KineticModel::nonrelativistic(1.0),
                          {PotentialTerm::coulomb(1.0)}),
                     oracle::kepler_E, oracle::kepler_L});
    cases.push_back({make(2, KineticModel::relativistic(1.0),
                          {PotentialTerm::linear(1.0)}),
                     1.0, 0.3});
    cases.push_back({make(1, KineticModel::power_law(1.0, 1.5),
                          {PotentialTerm::power_law(1.0, 4.0)}),
                     1.0, 0.0});
    for (auto& cs : cases) {
        TheoremReport rep = check_virial(cs.sys, cs.E, cs.L);
        CHECK(rep.kind == "virial");
        CHECK(rep.passed);
        CHECK(rep.residual <= 1e-10);
        CHECK(rep.lhs == doctest::Approx(rep.rhs).epsilon(1e-9));
    }
}

TEST_CASE("virial identity holds through the trajectory path") {
    VirialOptions vo;
    vo.use_trajectory = true;
    vo.tolerance = 1e-6;
    vo.periods = 25.0;
    TheoremReport rep = check_virial(make(2, KineticModel::nonrelativistic(1.0),
                                          {PotentialTerm::coulomb(1.0)}),
                                     oracle::kepler_E, oracle::kepler_L, vo);
    CHECK(rep.passed);
    CHECK(rep.residual <= 1e-6);
    CHECK(rep.diagnostics.at("periods") == doctest::Approx(25.0));
    CHECK(rep.diagnostics.at("energy_drift") <= 1e-8);
}

TEST_CASE("virial reports carry the orbit geometry diagnostics") {
    TheoremReport rep = check_virial(make(2, KineticModel::nonrelativistic(1.0),
                                          {PotentialTerm::coulomb(1.0)}),
                                     oracle::kepler_E, oracle::kepler_L);
    CHECK(rep.diagnostics.at("E") == doctest::Approx(oracle::kepler_E));
    CHECK(rep.diagnostics.at("r_inner") ==
          doctest::Approx(oracle::kepler_r_inner).epsilon(1e-10));
    CHECK(rep.diagnostics.at("tau_r") ==
          doctest::Approx(oracle::kepler_tau).epsilon(1e-10));
}

TEST_CASE("homogeneous systems split the energy by degree") {
    // T degree beta = 1.5, V degree a = 4: <T> = E a/(a+beta)
    RadialSolution sol(make(1, KineticModel::power_law(1.0, 1.5),
                            {PotentialTerm::power_law(1.0, 4.0)}),
                       1.0, 0.0);
    double T = sol.average_kinetic().value;
    double V = sol.average_potential().value;
    CHECK(sol.average_kinetic_virial().value / T ==
          doctest::Approx(1.5).epsilon(1e-9));
    CHECK(sol.average_potential_virial().value / V ==
          doctest::Approx(4.0).epsilon(1e-9));
    CHECK(T == doctest::Approx(4.0 / 5.5).epsilon(1e-8));
    CHECK(T + V == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("constant-action derivative matches the orbit average") {
    // closed forms: dE/dk = E/2k, dE/dm = -E/2m, dE/dkappa = 2E/kappa
    auto harm = make(1, KineticModel::nonrelativistic(1.0),
                     {PotentialTerm::harmonic(1.0)});
    auto kep = make(2, KineticModel::nonrelativistic(1.0),
                    {PotentialTerm::coulomb(1.0)});

    TheoremReport rk = check_hellmann_feynman(harm, "potential.terms[0].stiffness",
                                              1.0, 0.0);
    CHECK(rk.passed);
    CHECK(rk.lhs ==
          doctest::Approx(rk.diagnostics.at("E_at_lambda") / 2.0).epsilon(1e-6));

    TheoremReport rm = check_hellmann_feynman(harm, "kinetic.mass", 1.0, 0.0);
    CHECK(rm.passed);
    CHECK(rm.lhs ==
          doctest::Approx(-rm.diagnostics.at("E_at_lambda") / 2.0).epsilon(1e-6));

    TheoremReport rc = check_hellmann_feynman(kep, "potential.terms[0].strength",
                                              1.0, 0.5);
    CHECK(rc.passed);
    CHECK(rc.lhs ==
          doctest::Approx(2.0 * rc.diagnostics.at("E_at_lambda")).epsilon(1e-6));
}

TEST_CASE("constant-action derivative holds for generalized kernels") {
    TheoremReport r1 = check_hellmann_feynman(
        make(1, KineticModel::relativistic(1.0), {PotentialTerm::linear(1.0)}),
        "kinetic.mass", 1.0, 0.0);
    CHECK(r1.passed);
    CHECK(r1.residual <= 1e-5);

    TheoremReport r2 = check_hellmann_feynman(
        make(1, KineticModel::power_law(1.0, 3.0), {PotentialTerm::harmonic(1.0)}),
        "kinetic.amplitude", 1.0, 0.0);
    CHECK(r2.passed);
    CHECK(r2.residual <= 1e-5);
}

TEST_CASE("ordered Hamiltonians give ordered energies with a matched slope") {
    auto s1 = make(1, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(1.0)});
    auto s2 = make(1, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(2.0)});
    TheoremReport rep = check_comparison(s1, s2, 1.0, 0.0);
    CHECK(rep.passed);
    CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(rep.diagnostics.at("worst_monotonicity_drop") <= 1e-10);
    CHECK(rep.diagnostics.at("bridge_residual") <= 1e-4);
    CHECK(rep.table.size() == 11);
    // mixture of stiffness 1 and 2 is stiffness 1 + mu: E = sqrt(1 + mu)
    for (const auto& row : rep.table) {
        CHECK(row.at("E") ==
              doctest::Approx(std::sqrt(1.0 + row.at("mu"))).epsilon(1e-8));
    }
}

TEST_CASE("kinetic dominance: relativistic energies sit below nonrelativistic") {
    auto rel = make(1, KineticModel::relativistic(1.0),
                    {PotentialTerm::harmonic(1.0)});
    auto nonrel = make(1, KineticModel::nonrelativistic(1.0),
                       {PotentialTerm::harmonic(1.0)});
    TheoremReport rep = check_comparison(rel, nonrel, 0.8, 0.0);
    CHECK(rep.passed);
    CHECK(rep.lhs < rep.rhs);
    CHECK(rep.diagnostics.at("mixes_admissible") == 1.0);
    CHECK(rep.diagnostics.at("bridge_residual") <= 1e-4);
}

TEST_CASE("potential dominance: an added quartic raises the energy") {
    auto v1 = make(1, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(1.0)});
    auto v2 = make(1, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(1.0), PotentialTerm::power_law(0.1, 4.0)});
    TheoremReport rep = check_comparison(v1, v2, 1.0, 0.0);
    CHECK(rep.passed);
    CHECK(rep.lhs < rep.rhs);
}

TEST_CASE("a dominance violation is refused with a witness") {
    auto s1 = make(1, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(2.0)});
    auto s2 = make(1, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(1.0)});
    CHECK_THROWS_AS(check_comparison(s1, s2, 1.0, 0.0), DominanceError);
    try {
        check_comparison(s1, s2, 1.0, 0.0);
    } catch (const DominanceError& e) {
        // at the witness the claimed upper Hamiltonian is the smaller one
        CHECK(e.rhs() < e.lhs());
    }
}

TEST_CASE("comparison rejects mismatched dimensions") {
    auto s1 = make(1, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(1.0)});
    auto s2 = make(2, KineticModel::nonrelativistic(1.0),
                   {PotentialTerm::harmonic(1.0)});
    CHECK_THROWS_AS(check_comparison(s1, s2, 1.0, 0.0), DimensionError);
}
