#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "genkin/models.hpp"

namespace genkin {

struct RadialOptions {
    double quad_rel_tol = 1e-12;
    int base_nodes = 64;    // starting node count for the equispaced rule
    int max_nodes = 1 << 17;
    int ts_max_level = 12;  // tanh-sinh refinement levels (1D / L = 0 path)
    // Turning points are endpoints of the quadrature substitution; an offset
    // delta from the true zero costs ~sqrt(delta) in the circuit integrals,
    // so they are polished to machine precision by default.
    double root_rel_tol = 4e-16;
    double scale_hint = 1.0;  // turning-point search spans [1e-9, 1e12] * hint
    // optional restriction of the turning-point search window (e.g. to pick
    // one well out of an AmbiguousWellError)
    double window_lo = std::numeric_limits<double>::quiet_NaN();
    double window_hi = std::numeric_limits<double>::quiet_NaN();
    double newton_rel_tol = 1e-11;
    // optional energy bracket for energy_at_action
    double E_lo = std::numeric_limits<double>::quiet_NaN();
    double E_hi = std::numeric_limits<double>::quiet_NaN();
};

struct TurningPoints {
    double inner, outer;  // 1D: x_-, x_+ (inner may be negative)
};

// Roots of W = E - V - K(L^2/r^2), bracketed on a wide log grid and refined
// to relative 1e-12. Throws UnboundError (no outer turning point or missing
// inner wall), DomainError (E below the effective minimum), AmbiguousWellError
// (several wells; carries their brackets), DimensionError (L != 0 with D = 1,
// or non-central potential with D >= 2).
TurningPoints turning_points(const SystemSpec& sys, double E, double L,
                             const RadialOptions& opts = {});

struct OrbitGeometry {
    double E = 0.0, L = 0.0;
    double r_inner = 0.0, r_outer = 0.0;
    double tau_r = 0.0;     // radial period; full period for 1D systems
    double phi = 0.0;       // apsidal angle per circuit; 0 when L = 0
    double action_r = 0.0;  // I_r = (1/pi) int p_r dr
    double action = 0.0;    // I = I_r + L phi / (2 pi)
    double tau_error = 0.0, phi_error = 0.0, action_error = 0.0;
};

// Orbit quantity q(coord, p2): coord is the signed coordinate x for 1D/L=0
// wells and the radius r otherwise; p2 the squared momentum there.
using RadialQuantity = std::function<double(double coord, double p2)>;

// Turning points plus the period/angle/action integrals for one (E, L),
// evaluated on a shared quadrature grid that is reused for orbit averages.
class RadialSolution {
public:
    RadialSolution(const SystemSpec& sys, double E, double L,
                   const RadialOptions& opts = {});

    const OrbitGeometry& geometry() const { return geom_; }
    double E() const { return geom_.E; }
    double L() const { return geom_.L; }

    // Time average of q over one circuit, with a refinement error estimate.
    struct Average {
        double value, error;
    };
    Average average(const RadialQuantity& q) const;

    Average average_kinetic() const;
    Average average_potential() const;
    Average average_kinetic_virial() const;    // <2 p^2 K'(p^2)>
    Average average_potential_virial() const;  // <r . grad V>

private:
    struct Node {
        double coord, p2, tw;  // tw: time weight dt contribution
    };
    struct Grid {
        std::vector<Node> fine, coarse;  // last two refinement levels
        double tau_fine = 0.0, tau_coarse = 0.0;
    };
    void solve_central(const SystemSpec& sys, const RadialOptions& opts);
    void solve_line(const SystemSpec& sys, const RadialOptions& opts);

    const SystemSpec* sys_;
    SystemSpec sys_copy_;
    OrbitGeometry geom_;
    Grid grid_;
    bool line_mode_ = false;
};

OrbitGeometry orbit_geometry(const SystemSpec& sys, double E, double L,
                             const RadialOptions& opts = {});

RadialSolution::Average radial_average(const SystemSpec& sys, double E, double L,
                                       const RadialQuantity& q,
                                       const RadialOptions& opts = {});

// Solve I(E, L) = I_target for E with a bracketed Newton iteration using
// dI/dE ~ tau_r / (2 pi). BracketError when I_target is outside the bound
// range at this L.
double energy_at_action(const SystemSpec& sys, double I_target, double L,
                        const RadialOptions& opts = {});

// A phase-space point on the (E, L) orbit: at the inner turning point with
// purely tangential momentum for L > 0, at a turning point with p = 0 on the
// line otherwise. H(state) = E to turning-point accuracy.
PhaseState orbit_initial_state(const SystemSpec& sys, double E, double L,
                               const RadialOptions& opts = {});

}  // namespace genkin
