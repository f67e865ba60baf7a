#pragma once

#include <functional>
#include <string>
#include <vector>

#include "genkin/vec.hpp"

namespace genkin {

// ---------------------------------------------------------------------------
// Kinetic kernels T = K(p^2). K must be smooth and strictly increasing on
// x > 0; the velocity map v = 2 K'(p^2) p is invertible iff the squared-speed
// map g(x) = 4 x K'(x)^2 is strictly increasing.
// ---------------------------------------------------------------------------

enum class KineticKind { nonrelativistic, relativistic, power_law, custom };

struct KineticModel {
    KineticKind kind = KineticKind::nonrelativistic;
    double mass = 1.0;               // nonrelativistic / relativistic
    bool subtract_rest_mass = true;  // relativistic: K = sqrt(x+m^2) - m
    double amplitude = 1.0;          // power_law: K = A x^(beta/2)
    double exponent = 2.0;           // power_law beta

    // custom kernel: K and K' required; inverse and Q (inverse of g) optional,
    // bracketed root finds fill in when absent.
    std::function<double(double)> K, Kp, Kinv, Q;

    static KineticModel nonrelativistic(double m);
    static KineticModel relativistic(double m, bool subtract = true);
    static KineticModel power_law(double A, double beta);
    static KineticModel custom(std::function<double(double)> K,
                               std::function<double(double)> Kp,
                               std::function<double(double)> Kinv = nullptr,
                               std::function<double(double)> Q = nullptr);
};

double kinetic_eval(const KineticModel& k, double p2);    // T = K(p^2)
double kinetic_prime(const KineticModel& k, double p2);   // K'(p^2)
double kinetic_inverse(const KineticModel& k, double T);  // p^2 with K(p^2)=T
double squared_speed(const KineticModel& k, double x);    // g(x) = 4x K'(x)^2

// v = 2 K'(p^2) p. Returns the zero vector at p = 0 (symmetric limit for
// kernels whose K' diverges there).
Vec kinetic_velocity(const KineticModel& k, const Vec& p);

// |v| = 2 K'(p^2) |p| computed in a form that stays finite for power-law
// kernels with exponent < 2 (where K' alone diverges as p -> 0).
double kinetic_speed(const KineticModel& k, double p2);

// Inverse of the velocity map: p = v / (2 K'(Q(|v|^2))).
Vec kinetic_momentum(const KineticModel& k, const Vec& v);

struct KineticValidation {
    bool admissible = true;                // K finite, K' > 0 on samples
    bool velocity_map_invertible = true;   // g strictly increasing on samples
    double min_kprime = 0.0;
    std::vector<std::string> findings;
};
KineticValidation validate_kinetic(const KineticModel& k, double x_max = 1e6,
                                   int samples = 256);

// ---------------------------------------------------------------------------
// Potentials: sums of radial terms (built-ins depend on |r| only) plus
// optional custom callables.
// ---------------------------------------------------------------------------

enum class TermKind { coulomb, harmonic, linear, power_law, custom };

struct PotentialTerm {
    TermKind kind = TermKind::harmonic;
    double strength = 1.0;   // coulomb:  V = -strength / r
    double stiffness = 1.0;  // harmonic: V = stiffness r^2 / 2
    double slope = 1.0;      // linear:   V = slope * r
    double amplitude = 1.0;  // power_law: V = amplitude * r^exponent
    double exponent = 2.0;

    std::function<double(const Vec&)> V;  // custom
    std::function<Vec(const Vec&)> grad;  // custom, optional (FD fallback)
    double custom_scale = 1.0;            // multiplier applied to custom terms
    bool custom_central = true;
    std::vector<double> custom_kinks;     // interior non-smooth points (1D)

    static PotentialTerm coulomb(double strength);
    static PotentialTerm harmonic(double stiffness);
    static PotentialTerm linear(double slope);
    static PotentialTerm power_law(double amplitude, double exponent);
    static PotentialTerm custom(std::function<double(const Vec&)> V,
                                std::function<Vec(const Vec&)> grad = nullptr,
                                bool central = true,
                                std::vector<double> kinks = {});
};

struct PotentialModel {
    std::vector<PotentialTerm> terms;

    bool central() const;             // V depends on |r| only
    bool singular_at_origin() const;  // coulomb or negative-exponent power term
    // Limit of V as |r| -> infinity; +inf for confining potentials, NaN when
    // undetermined (custom terms).
    double limit_at_infinity() const;
    std::vector<double> kinks_1d() const;  // interior x where V is not smooth
};

double potential_eval(const PotentialModel& v, const Vec& r);
Vec potential_gradient(const PotentialModel& v, const Vec& r);
Vec potential_force(const PotentialModel& v, const Vec& r);  // -gradient
double potential_r_dot_grad(const PotentialModel& v, const Vec& r);

// ---------------------------------------------------------------------------
// Assembled system and parameter bindings.
// ---------------------------------------------------------------------------

struct SystemSpec {
    int dimension = 1;
    KineticModel kinetic;
    PotentialModel potential;

    double hamiltonian(const PhaseState& s) const;
};

struct VirialTerms {
    double kinetic_virial;    // 2 p^2 K'(p^2)
    double potential_virial;  // r . grad V
};
VirialTerms virial_terms(const SystemSpec& sys, const PhaseState& s);

// A named scalar parameter path into a system, e.g. "kinetic.mass" or
// "potential.terms[0].stiffness".
struct ResolvedBinding {
    std::string target;
    double value = 0.0;
    std::function<SystemSpec(double)> rebind;  // modified copy of the system
    // Analytic dH/dlambda at fixed (r, p); null for paths without a closed
    // form (callers fall back to finite differences through rebind).
    std::function<double(const SystemSpec&, const PhaseState&)> dH_dlambda;
};
ResolvedBinding resolve_binding(const SystemSpec& sys, const std::string& target);

// Mixtures and rescalings used by the comparison machinery.
KineticModel mix_kinetics(const KineticModel& a, const KineticModel& b, double mu);
PotentialModel mix_potentials(const PotentialModel& a, const PotentialModel& b,
                              double mu);
KineticModel scale_kinetic(const KineticModel& k, double c);
PotentialModel scale_potential(const PotentialModel& v, double c);

}  // namespace genkin
