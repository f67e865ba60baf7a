#include <cmath>
#include <random>

#include "doctest.h"
#include "genkin/errors.hpp"
#include "genkin/models.hpp"

using namespace genkin;

namespace {

Vec vec2(double x, double y) {
    Vec v = Vec::zero(2);
    v.c[0] = x;
    v.c[1] = y;
    return v;
}

Vec vec3(double x, double y, double z) {
    Vec v = Vec::zero(3);
    v.c[0] = x;
    v.c[1] = y;
    v.c[2] = z;
    return v;
}

std::vector<KineticModel> kernel_zoo() {
    return {
        KineticModel::nonrelativistic(1.0),
        KineticModel::nonrelativistic(2.5),
        KineticModel::relativistic(1.0),
        KineticModel::relativistic(0.7, false),
        KineticModel::power_law(1.0, 3.0),
        KineticModel::power_law(0.8, 1.5),
        KineticModel::custom([](double x) { return std::sqrt(x + 1.0) - 1.0; },
                             [](double x) { return 0.5 / std::sqrt(x + 1.0); }),
    };
}

}  // namespace

TEST_CASE("built-in kernels evaluate their closed forms") {
    auto nr = KineticModel::nonrelativistic(2.0);
    CHECK(kinetic_eval(nr, 3.0) == doctest::Approx(0.75));
    CHECK(kinetic_prime(nr, 3.0) == doctest::Approx(0.25));

    auto rel = KineticModel::relativistic(1.0);
    CHECK(kinetic_eval(rel, 0.0) == 0.0);
    CHECK(kinetic_eval(rel, 3.0) == doctest::Approx(1.0));
    auto rel_raw = KineticModel::relativistic(1.0, false);
    CHECK(kinetic_eval(rel_raw, 0.0) == doctest::Approx(1.0));
    CHECK(kinetic_eval(rel_raw, 3.0) == doctest::Approx(2.0));

    auto pw = KineticModel::power_law(2.0, 3.0);
    CHECK(kinetic_eval(pw, 4.0) == doctest::Approx(16.0));
    CHECK(kinetic_prime(pw, 4.0) == doctest::Approx(6.0));
}

TEST_CASE("kinetic_inverse round-trips every kernel kind") {
    for (const auto& k : kernel_zoo()) {
        for (double x : {1e-8, 1e-3, 0.5, 1.0, 7.0, 1e3}) {
            double T = kinetic_eval(k, x);
            CHECK(kinetic_inverse(k, T) == doctest::Approx(x).epsilon(1e-10));
        }
    }
}

TEST_CASE("kinetic_inverse rejects energies below the kernel floor") {
    CHECK_THROWS_AS(kinetic_inverse(KineticModel::nonrelativistic(1.0), -0.1),
                    DomainError);
    // unsubtracted relativistic kernel: K(0) = m
    CHECK_THROWS_AS(kinetic_inverse(KineticModel::relativistic(1.0, false), 0.5),
                    DomainError);
    CHECK(kinetic_inverse(KineticModel::relativistic(1.0, false), 1.0) ==
          doctest::Approx(0.0));
}

TEST_CASE("kinetic_prime matches a finite difference of the kernel") {
    for (const auto& k : kernel_zoo()) {
        for (double x : {0.3, 1.0, 4.0, 50.0}) {
            double h = 1e-6 * x;
            double fd = (kinetic_eval(k, x + h) - kinetic_eval(k, x - h)) / (2 * h);
            CHECK(kinetic_prime(k, x) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("velocity map and momentum map are mutual inverses") {
    std::mt19937_64 rng(20240915);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const auto& k : kernel_zoo()) {
        if (k.kind == KineticKind::power_law && k.exponent == 1.0) continue;
        for (int rep = 0; rep < 20; ++rep) {
            Vec p = vec3(u(rng), u(rng), u(rng));
            Vec v = kinetic_velocity(k, p);
            Vec back = kinetic_momentum(k, v);
            for (int i = 0; i < 3; ++i)
                CHECK(back.c[i] == doctest::Approx(p.c[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("relativistic velocity reproduces p/sqrt(p^2+m^2)") {
    auto k = KineticModel::relativistic(1.0);
    Vec p = vec3(3.0, 4.0, 0.0);
    Vec v = kinetic_velocity(k, p);
    double gamma = std::sqrt(26.0);
    CHECK(v.c[0] == doctest::Approx(3.0 / gamma).epsilon(1e-14));
    CHECK(v.c[1] == doctest::Approx(4.0 / gamma).epsilon(1e-14));
    CHECK(v.norm() == doctest::Approx(5.0 / gamma).epsilon(1e-14));
}

TEST_CASE("kinetic_speed matches the velocity norm and stays finite at p = 0") {
    for (const auto& k : kernel_zoo()) {
        for (double pm : {1e-6, 0.3, 2.0}) {
            Vec p = vec2(pm, 0.0);
            CHECK(kinetic_speed(k, pm * pm) ==
                  doctest::Approx(kinetic_velocity(k, p).norm()).epsilon(1e-12));
        }
    }
    // unit-speed kernel: |v| = A everywhere, including the corner at p = 0
    auto bb = KineticModel::power_law(2.0, 1.0);
    CHECK(kinetic_speed(bb, 0.0) == doctest::Approx(2.0));
    CHECK(kinetic_speed(bb, 9.0) == doctest::Approx(2.0));
}

TEST_CASE("squared_speed is g(x) = 4 x K'(x)^2") {
    auto rel = KineticModel::relativistic(1.0);
    // g(x) = x / (x + m^2)
    for (double x : {0.1, 1.0, 10.0})
        CHECK(squared_speed(rel, x) == doctest::Approx(x / (x + 1.0)).epsilon(1e-14));
}

TEST_CASE("the unit-speed kernel is admissible but not invertible") {
    auto bb = KineticModel::power_law(1.0, 1.0);
    auto val = validate_kinetic(bb);
    CHECK(val.admissible);
    CHECK_FALSE(val.velocity_map_invertible);
    Vec v = vec2(0.5, 0.0);
    CHECK_THROWS_AS(kinetic_momentum(bb, v), NonInvertibleVelocityMap);
}

TEST_CASE("a decreasing custom kernel fails validation") {
    auto bad = KineticModel::custom([](double x) { return 1.0 / (1.0 + x); },
                                    [](double x) {
                                        double d = 1.0 + x;
                                        return -1.0 / (d * d);
                                    });
    auto val = validate_kinetic(bad);
    CHECK_FALSE(val.admissible);
    CHECK(val.min_kprime < 0.0);
    CHECK_FALSE(val.findings.empty());
}

TEST_CASE("healthy kernels pass validation") {
    for (const auto& k : kernel_zoo()) {
        auto val = validate_kinetic(k);
        CHECK(val.admissible);
        if (!(k.kind == KineticKind::power_law && k.exponent == 1.0))
            CHECK(val.velocity_map_invertible);
    }
}

TEST_CASE("potential terms evaluate their closed forms") {
    PotentialModel v;
    v.terms = {PotentialTerm::coulomb(2.0), PotentialTerm::harmonic(3.0),
               PotentialTerm::linear(0.5), PotentialTerm::power_law(1.5, 4.0)};
    Vec r = vec2(0.6, 0.8);  // |r| = 1
    CHECK(potential_eval(v, r) ==
          doctest::Approx(-2.0 + 1.5 + 0.5 + 1.5).epsilon(1e-14));
}

TEST_CASE("potential gradient matches finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.2, 1.5);
    PotentialModel v;
    v.terms = {PotentialTerm::coulomb(1.0), PotentialTerm::harmonic(2.0),
               PotentialTerm::linear(0.7), PotentialTerm::power_law(0.4, 3.0)};
    for (int rep = 0; rep < 20; ++rep) {
        Vec r = vec3(u(rng), u(rng), u(rng));
        Vec g = potential_gradient(v, r);
        for (int i = 0; i < 3; ++i) {
            Vec rp = r, rm = r;
            double h = 1e-6;
            rp.c[i] += h;
            rm.c[i] -= h;
            double fd = (potential_eval(v, rp) - potential_eval(v, rm)) / (2 * h);
            CHECK(g.c[i] == doctest::Approx(fd).epsilon(1e-6));
        }
        CHECK(potential_r_dot_grad(v, r) ==
              doctest::Approx(dot(r, g)).epsilon(1e-12));
        Vec f = potential_force(v, r);
        for (int i = 0; i < 3; ++i) CHECK(f.c[i] == doctest::Approx(-g.c[i]));
    }
}

TEST_CASE("potential classification flags") {
    PotentialModel coul;
    coul.terms = {PotentialTerm::coulomb(1.0)};
    CHECK(coul.central());
    CHECK(coul.singular_at_origin());
    CHECK(coul.limit_at_infinity() == doctest::Approx(0.0));

    PotentialModel conf;
    conf.terms = {PotentialTerm::harmonic(1.0), PotentialTerm::linear(1.0)};
    CHECK_FALSE(conf.singular_at_origin());
    CHECK(std::isinf(conf.limit_at_infinity()));
    CHECK(conf.limit_at_infinity() > 0);

    // |x|-type terms kink at the origin in 1D
    PotentialModel lin;
    lin.terms = {PotentialTerm::linear(1.0)};
    auto kinks = lin.kinks_1d();
    REQUIRE(kinks.size() == 1);
    CHECK(kinks[0] == 0.0);

    PotentialModel smooth;
    smooth.terms = {PotentialTerm::harmonic(1.0), PotentialTerm::power_law(1.0, 4.0)};
    CHECK(smooth.kinks_1d().empty());
}

TEST_CASE("hamiltonian sums kernel and potential and checks dimensions") {
    SystemSpec sys;
    sys.dimension = 2;
    sys.kinetic = KineticModel::nonrelativistic(1.0);
    sys.potential.terms = {PotentialTerm::harmonic(1.0)};
    PhaseState s;
    s.r = vec2(1.0, 0.0);
    s.p = vec2(0.0, 2.0);
    CHECK(sys.hamiltonian(s) == doctest::Approx(2.0 + 0.5).epsilon(1e-14));

    PhaseState bad;
    bad.r = vec3(1.0, 0.0, 0.0);
    bad.p = vec3(0.0, 0.0, 0.0);
    CHECK_THROWS_AS(sys.hamiltonian(bad), DimensionError);
}

TEST_CASE("virial terms vanish at rest and match closed forms") {
    SystemSpec sys;
    sys.dimension = 2;
    sys.kinetic = KineticModel::nonrelativistic(1.0);
    sys.potential.terms = {PotentialTerm::harmonic(3.0)};
    PhaseState s;
    s.r = vec2(2.0, 0.0);
    s.p = vec2(0.0, 0.0);
    auto vt = virial_terms(sys, s);
    CHECK(vt.kinetic_virial == 0.0);
    CHECK(vt.potential_virial == doctest::Approx(12.0));  // r V' = k r^2

    s.p = vec2(1.0, 1.0);
    vt = virial_terms(sys, s);
    CHECK(vt.kinetic_virial == doctest::Approx(2.0));  // 2 p^2 / 2m
}

TEST_CASE("resolve_binding rebinds parameters and reports analytic slopes") {
    SystemSpec sys;
    sys.dimension = 2;
    sys.kinetic = KineticModel::relativistic(1.0);
    sys.potential.terms = {PotentialTerm::coulomb(1.0), PotentialTerm::harmonic(2.0)};

    PhaseState s;
    s.r = vec2(0.8, 0.3);
    s.p = vec2(-0.2, 1.1);

    for (const char* path : {"kinetic.mass", "potential.terms[0].strength",
                             "potential.terms[1].stiffness"}) {
        CAPTURE(path);
        auto bind = resolve_binding(sys, path);
        CHECK(bind.target == path);

        SystemSpec moved = bind.rebind(bind.value * 1.5);
        CHECK(resolve_binding(moved, path).value ==
              doctest::Approx(bind.value * 1.5));

        // analytic dH/dlambda against a finite difference through rebind
        REQUIRE(bind.dH_dlambda);
        double h = 1e-6;
        double fd = (bind.rebind(bind.value + h).hamiltonian(s) -
                     bind.rebind(bind.value - h).hamiltonian(s)) /
                    (2 * h);
        CHECK(bind.dH_dlambda(sys, s) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("resolve_binding rejects unknown paths") {
    SystemSpec sys;
    sys.kinetic = KineticModel::nonrelativistic(1.0);
    sys.potential.terms = {PotentialTerm::harmonic(1.0)};
    CHECK_THROWS_AS(resolve_binding(sys, "kinetic.charm"), ConfigError);
    CHECK_THROWS_AS(resolve_binding(sys, "potential.terms[3].stiffness"), ConfigError);
    CHECK_THROWS_AS(resolve_binding(sys, "potential.terms[0].strength"), ConfigError);
}

TEST_CASE("kinetic mixtures interpolate pointwise") {
    auto a = KineticModel::relativistic(1.0);
    auto b = KineticModel::nonrelativistic(1.0);
    for (double mu : {0.0, 0.3, 1.0}) {
        auto m = mix_kinetics(a, b, mu);
        for (double x : {0.0, 0.4, 2.0, 9.0}) {
            double want =
                (1 - mu) * kinetic_eval(a, x) + mu * kinetic_eval(b, x);
            CHECK(kinetic_eval(m, x) == doctest::Approx(want).epsilon(1e-13));
            double wantp =
                (1 - mu) * kinetic_prime(a, x) + mu * kinetic_prime(b, x);
            CHECK(kinetic_prime(m, x) == doctest::Approx(wantp).epsilon(1e-13));
        }
        // inverse fallback round-trips through the mixture
        double T = kinetic_eval(m, 1.7);
        CHECK(kinetic_inverse(m, T) == doctest::Approx(1.7).epsilon(1e-10));
    }
}

TEST_CASE("potential mixtures and rescalings interpolate pointwise") {
    PotentialModel a, b;
    a.terms = {PotentialTerm::harmonic(1.0)};
    b.terms = {PotentialTerm::harmonic(1.0), PotentialTerm::power_law(0.1, 4.0)};
    Vec r = vec2(1.2, -0.3);
    auto m = mix_potentials(a, b, 0.25);
    CHECK(potential_eval(m, r) ==
          doctest::Approx(0.75 * potential_eval(a, r) + 0.25 * potential_eval(b, r))
              .epsilon(1e-13));
    auto sc = scale_potential(b, 2.0);
    CHECK(potential_eval(sc, r) == doctest::Approx(2.0 * potential_eval(b, r)));
    auto sk = scale_kinetic(KineticModel::relativistic(1.0), 3.0);
    CHECK(kinetic_eval(sk, 2.0) ==
          doctest::Approx(3.0 * kinetic_eval(KineticModel::relativistic(1.0), 2.0)));
}
