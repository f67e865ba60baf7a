#include <cmath>

#include "doctest.h"
#include "genkin/errors.hpp"
#include "genkin/radial.hpp"
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

SystemSpec kepler() {
    return make(2, KineticModel::nonrelativistic(1.0), {PotentialTerm::coulomb(1.0)});
}

}  // namespace

TEST_CASE("Kepler orbit geometry matches the closed form") {
    RadialSolution sol(kepler(), oracle::kepler_E, oracle::kepler_L);
    const OrbitGeometry& g = sol.geometry();
    CHECK(g.r_inner == doctest::Approx(oracle::kepler_r_inner).epsilon(1e-12));
    CHECK(g.r_outer == doctest::Approx(oracle::kepler_r_outer).epsilon(1e-12));
    CHECK(g.tau_r == doctest::Approx(oracle::kepler_tau).epsilon(1e-11));
    CHECK(g.phi == doctest::Approx(oracle::kepler_phi).epsilon(1e-11));
    CHECK(g.action_r == doctest::Approx(oracle::kepler_action_r).epsilon(1e-11));
    CHECK(g.action == doctest::Approx(oracle::kepler_action).epsilon(1e-11));
    CHECK(g.tau_error <= 1e-9);
    CHECK(g.action_error <= 1e-9);
}

TEST_CASE("Kepler orbit averages satisfy the exact virial values") {
    RadialSolution sol(kepler(), oracle::kepler_E, oracle::kepler_L);
    CHECK(sol.average_kinetic().value ==
          doctest::Approx(oracle::kepler_avg_T).epsilon(1e-11));
    CHECK(sol.average_potential().value ==
          doctest::Approx(oracle::kepler_avg_V).epsilon(1e-11));
    // <1> is exactly 1 whatever the weights
    auto one = sol.average([](double, double) { return 1.0; });
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(one.error <= 1e-12);
}

TEST_CASE("2D harmonic orbit: half-period circuits and split action") {
    // omega = 1: tau_r = pi, phi = pi, E = 2 I_r + L (all closed forms)
    double E = 1.0, L = 0.4;
    RadialSolution sol(
        make(2, KineticModel::nonrelativistic(1.0), {PotentialTerm::harmonic(1.0)}),
        E, L);
    const OrbitGeometry& g = sol.geometry();
    CHECK(g.tau_r == doctest::Approx(oracle::pi).epsilon(1e-11));
    CHECK(g.phi == doctest::Approx(oracle::pi).epsilon(1e-11));
    CHECK(g.action_r == doctest::Approx(0.5 * (E - L)).epsilon(1e-11));
    CHECK(g.action == doctest::Approx(E / 2.0).epsilon(1e-11));  // I_r + L/2
}

TEST_CASE("1D linear well geometry matches the closed form") {
    RadialSolution sol(
        make(1, KineticModel::nonrelativistic(1.0), {PotentialTerm::linear(1.0)}),
        oracle::linwell_E, 0.0);
    const OrbitGeometry& g = sol.geometry();
    CHECK(g.r_inner == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(g.r_outer == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.tau_r == doctest::Approx(oracle::linwell_tau).epsilon(1e-11));
    CHECK(g.phi == 0.0);
    CHECK(g.action == doctest::Approx(oracle::linwell_action).epsilon(1e-11));
}

TEST_CASE("cubic-speed kernel in a harmonic well matches frozen values") {
    RadialSolution sol(
        make(1, KineticModel::power_law(1.0, 3.0), {PotentialTerm::harmonic(1.0)}),
        oracle::cubic_harm_E, 0.0);
    const OrbitGeometry& g = sol.geometry();
    CHECK(g.action == doctest::Approx(oracle::cubic_harm_action).epsilon(1e-12));
    CHECK(g.tau_r == doctest::Approx(oracle::cubic_harm_tau).epsilon(1e-10));
    CHECK(sol.average_kinetic().value ==
          doctest::Approx(oracle::cubic_harm_avg_T).epsilon(1e-10));
    CHECK(sol.average_potential().value ==
          doctest::Approx(oracle::cubic_harm_avg_V).epsilon(1e-10));
}

TEST_CASE("unit-speed kernel in a harmonic well: sawtooth circuit") {
    RadialSolution sol(
        make(1, KineticModel::power_law(1.0, 1.0), {PotentialTerm::harmonic(1.0)}),
        oracle::bb_E, 0.0);
    CHECK(sol.geometry().tau_r == doctest::Approx(oracle::bb_tau).epsilon(1e-11));
    CHECK(sol.geometry().action == doctest::Approx(oracle::bb_action).epsilon(1e-11));
}

TEST_CASE("turning point search reports the failure modes") {
    // positive energy: unbound outward
    CHECK_THROWS_AS(turning_points(kepler(), 0.5, oracle::kepler_L), UnboundError);
    // below the centrifugal floor (V_eff min is -2 at L = 1/2)
    CHECK_THROWS_AS(turning_points(kepler(), -2.5, oracle::kepler_L), DomainError);
    // head-on Coulomb: allowed region touches the singular origin
    SystemSpec c1 = kepler();
    c1.dimension = 1;
    CHECK_THROWS_AS(turning_points(c1, -0.5, 0.0), SingularityError);
    // L > 0 with a one-dimensional system is contradictory
    CHECK_THROWS_AS(turning_points(c1, -0.5, 0.3), DimensionError);
    CHECK_THROWS_AS(turning_points(kepler(), -0.5, -0.1), DomainError);
}

TEST_CASE("near-circular wells narrower than the scan are still found") {
    // E barely above the effective floor -2: well half-width ~ 8e-6
    TurningPoints tp = turning_points(kepler(), -2.0 + 2e-9, oracle::kepler_L);
    CHECK(tp.inner < 0.25);
    CHECK(tp.outer > 0.25);
    CHECK(tp.outer - tp.inner < 1e-3);
    RadialSolution sol(kepler(), -2.0 + 2e-9, oracle::kepler_L);
    // near-circular limit: tau -> 2 pi / omega_r with omega_r = sqrt(V_eff''/m) = 8.
    // At a depth of 2e-9 the subtraction E - V_eff leaves only ~7 digits, which
    // caps how well the turning points (and hence tau) can be resolved.
    CHECK(sol.geometry().tau_r == doctest::Approx(oracle::pi / 4.0).epsilon(1e-3));
}

TEST_CASE("double wells are ambiguous unless a window picks one") {
    // V = x^4 - 2 x^2 (+1 shift irrelevant): wells around +-1 below the barrier
    auto terms = std::vector<PotentialTerm>{PotentialTerm::power_law(1.0, 4.0),
                                            PotentialTerm::power_law(-2.0, 2.0)};
    SystemSpec sys = make(1, KineticModel::nonrelativistic(1.0), terms);
    try {
        turning_points(sys, -0.5, 0.0);
        FAIL("expected AmbiguousWellError");
    } catch (const AmbiguousWellError& e) {
        REQUIRE(e.wells().size() == 2);
        CHECK(e.wells()[0].second < 0.0);
        CHECK(e.wells()[1].first > 0.0);
    }
    RadialOptions right;
    right.window_lo = 0.0;
    TurningPoints tp = turning_points(sys, -0.5, 0.0, right);
    CHECK(tp.inner > 0.0);
    CHECK(tp.outer > tp.inner);
    RadialSolution sol(sys, -0.5, 0.0, right);
    CHECK(sol.geometry().tau_r > 0.0);
}

TEST_CASE("line-mode solutions handle asymmetric smooth wells") {
    // V = x^2/2 + 0.1 x^4 has no kinks; E = 2
    auto sys = make(1, KineticModel::nonrelativistic(1.0),
                    {PotentialTerm::harmonic(1.0), PotentialTerm::power_law(0.1, 4.0)});
    RadialSolution sol(sys, 2.0, 0.0);
    const OrbitGeometry& g = sol.geometry();
    CHECK(g.r_inner == doctest::Approx(-g.r_outer).epsilon(1e-12));
    CHECK(sys.hamiltonian(orbit_initial_state(sys, 2.0, 0.0)) ==
          doctest::Approx(2.0).epsilon(1e-10));
    // quartic stiffening shortens the period below the harmonic value
    CHECK(g.tau_r < 2 * oracle::pi);
    CHECK(g.tau_r == doctest::Approx(oracle::stiffwell_tau).epsilon(1e-10));
}

TEST_CASE("orbit averages agree between quadrature and closed form") {
    // harmonic equipartition at L > 0
    RadialSolution sol(
        make(2, KineticModel::nonrelativistic(1.0), {PotentialTerm::harmonic(1.0)}),
        1.0, 0.4);
    CHECK(sol.average_kinetic().value == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(sol.average_potential().value == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(sol.average_kinetic_virial().value ==
          doctest::Approx(2.0 * 0.5).epsilon(1e-10));
    CHECK(sol.average_potential_virial().value ==
          doctest::Approx(2.0 * 0.5).epsilon(1e-10));
}

TEST_CASE("orbit_initial_state sits on the energy shell") {
    for (double L : {0.0, 0.5}) {
        SystemSpec sys = L == 0.0 ? make(1, KineticModel::relativistic(1.0),
                                         {PotentialTerm::linear(1.0)})
                                  : kepler();
        double E = L == 0.0 ? 1.0 : oracle::kepler_E;
        PhaseState s = orbit_initial_state(sys, E, L);
        CHECK(sys.hamiltonian(s) == doctest::Approx(E).epsilon(1e-10));
        if (L > 0.0) {
            CHECK(cross(s.r, s.p).norm() == doctest::Approx(L).epsilon(1e-12));
            CHECK(s.r.norm() ==
                  doctest::Approx(oracle::kepler_r_inner).epsilon(1e-10));
            // perihelion momentum is purely tangential: L / r_inner
            CHECK(s.p.norm() ==
                  doctest::Approx(oracle::kepler_p_peri).epsilon(1e-10));
        }
    }
}

TEST_CASE("energy_at_action inverts the closed-form action maps") {
    // harmonic: E = I sqrt(k/m)
    auto h = make(1, KineticModel::nonrelativistic(1.5), {PotentialTerm::harmonic(2.0)});
    double Ih = 0.8;
    CHECK(energy_at_action(h, Ih, 0.0) ==
          doctest::Approx(Ih * std::sqrt(2.0 / 1.5)).epsilon(1e-10));

    // Kepler: E = -m kappa^2 / (2 I^2) independent of L
    CHECK(energy_at_action(kepler(), 1.0, 0.5) ==
          doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(energy_at_action(kepler(), 1.3, 0.4) ==
          doctest::Approx(-1.0 / (2.0 * 1.3 * 1.3)).epsilon(1e-10));

    // linear well: E = (3 pi b I / (4 sqrt(2m)))^{2/3}
    auto lw = make(1, KineticModel::nonrelativistic(1.0), {PotentialTerm::linear(1.0)});
    CHECK(energy_at_action(lw, oracle::linwell_action, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("energy_at_action rejects unreachable targets") {
    CHECK_THROWS_AS(energy_at_action(kepler(), -1.0, 0.5), DomainError);
    // Kepler total action cannot go below L (circular limit)
    CHECK_THROWS_AS(energy_at_action(kepler(), 0.3, 0.5), BracketError);
}

TEST_CASE("the action derivative equals the circuit time over 2 pi") {
    struct Case {
        SystemSpec sys;
        double E, L;
    };
    std::vector<Case> cases;
    cases.push_back({kepler(), -0.5, 0.5});
    cases.push_back({make(2, KineticModel::nonrelativistic(1.0),
                          {PotentialTerm::harmonic(1.0)}),
                     1.0, 0.3});
    cases.push_back({make(1, KineticModel::relativistic(1.0),
                          {PotentialTerm::linear(1.0)}),
                     0.8, 0.0});
    cases.push_back({make(1, KineticModel::power_law(1.0, 3.0),
                          {PotentialTerm::power_law(1.0, 4.0)}),
                     1.0, 0.0});
    for (auto& cs : cases) {
        RadialSolution sol(cs.sys, cs.E, cs.L);
        double tau = sol.geometry().tau_r;
        double h = 1e-5 * std::max(1.0, std::abs(cs.E));
        double Ip = RadialSolution(cs.sys, cs.E + h, cs.L).geometry().action;
        double Im = RadialSolution(cs.sys, cs.E - h, cs.L).geometry().action;
        CHECK((Ip - Im) / (2 * h) ==
              doctest::Approx(tau / (2 * oracle::pi)).epsilon(1e-6));
    }
}

TEST_CASE("node count stays modest for smooth orbits") {
    RadialOptions coarse;
    coarse.base_nodes = 24;
    RadialSolution a(kepler(), oracle::kepler_E, oracle::kepler_L, coarse);
    RadialSolution b(kepler(), oracle::kepler_E, oracle::kepler_L);
    CHECK(a.geometry().tau_r == doctest::Approx(b.geometry().tau_r).epsilon(1e-11));
}
