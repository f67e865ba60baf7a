#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "genkin/models.hpp"
#include "genkin/vec.hpp"

namespace genkin {

enum class Integrator { rk54, rk853 };

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = -1.0;  // negative: same as rel_tol
    Integrator method = Integrator::rk54;
    double drift_budget = 1e-6;   // max allowed relative energy drift
    double initial_step = 0.0;    // 0: automatic
    long max_steps = 20'000'000;
    // Minimum-radius guard (times the initial |r|) for potentials singular at
    // the origin; crossing it aborts with SingularityError.
    double singular_guard = 1e-8;
};

// Adaptive embedded Runge-Kutta solution of Hamilton's equations
//   dr/dt = 2 K'(p^2) p,   dp/dt = -grad V(r)
// with per-step dense output (5th-order pair by default, 8th-order behind the
// method switch).
class Trajectory {
public:
    const SystemSpec& system() const { return *sys_; }
    int dimension() const { return sys_->dimension; }
    double t_begin() const { return t0_; }
    double t_end() const { return t1_; }
    Integrator method() const { return method_; }

    PhaseState state_at(double t) const;  // RangeError outside [t_begin, t_end]
    const std::vector<PhaseState>& samples() const { return samples_; }
    long steps_accepted() const { return accepted_; }
    long steps_rejected() const { return rejected_; }

    double energy_drift() const { return drift_; }  // max relative drift seen
    double drift_budget() const { return budget_; }
    double energy_scale() const { return escale_; }
    double initial_energy() const { return E0_; }

private:
    friend Trajectory integrate(const SystemSpec&, const PhaseState&, double,
                                const IntegrateOptions&);
    struct Segment {
        double t0, h;
        // dense-output coefficient block, n_rcont x n doubles
        std::vector<double> rcont;
    };
    const Segment& segment_for(double t) const;

    std::shared_ptr<const SystemSpec> sys_;
    Integrator method_ = Integrator::rk54;
    double t0_ = 0.0, t1_ = 0.0;
    std::vector<PhaseState> samples_;
    std::vector<Segment> segments_;
    long accepted_ = 0, rejected_ = 0;
    double drift_ = 0.0, budget_ = 0.0, escale_ = 0.0, E0_ = 0.0;
};

Trajectory integrate(const SystemSpec& sys, const PhaseState& initial,
                     double t_end, const IntegrateOptions& opts = {});

enum class Boundedness { bound, unbound, undetermined };
Boundedness classify_boundedness(const SystemSpec& sys, const PhaseState& initial);

// Period extraction from a trajectory:
//  - D = 1: same-direction crossings of x = x_ref (reference taken at the
//    largest-|p| sample so crossings are transversal);
//  - central D >= 2: radial period from minima of |r| (r.p sign changes).
// Verified by phase-space (D=1) or radius (D>=2) return within tol * scale;
// throws NotPeriodicError when no verified period exists.
double find_period(const Trajectory& traj, double tol = 1e-6);

// J = r x p embedded in 3 components. DimensionError for D = 1.
Vec angular_momentum(const SystemSpec& sys, const PhaseState& s);

struct AverageReport {
    double value = 0.0;
    double quad_error = 0.0;    // quadrature refinement difference
    double window_error = 0.0;  // long-window doubling estimate (if requested)
    double window = 0.0;
};

using Quantity = std::function<double(const PhaseState&)>;

// Time average (1/W) int q(state(t)) dt over [t0, t0+window] evaluated on the
// dense output. With `long_window_estimate` the average is also computed over
// the half window and the difference reported. RangeError when the window
// leaves the trajectory span.
AverageReport time_average(const Trajectory& traj, const Quantity& q, double t0,
                           double window, bool long_window_estimate = false);

// Action integral I = (1/2pi) int |p| (ds/dt) dt over [t0, t1] (the integrand
// is |p| |dr/dt| since velocity and momentum are parallel).
double action_along(const Trajectory& traj, double t0, double t1);

// Common observables.
namespace quantities {
Quantity kinetic(const SystemSpec& sys);
Quantity potential(const SystemSpec& sys);
Quantity kinetic_virial(const SystemSpec& sys);    // 2 p^2 K'(p^2)
Quantity potential_virial(const SystemSpec& sys);  // r . grad V
Quantity r_dot_p();
}  // namespace quantities

// CSV export: header "t,r0,...,p0,...,H,J" with one row per accepted step,
// 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace genkin
