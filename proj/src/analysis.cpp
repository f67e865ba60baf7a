#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "genkin/dynamics.hpp"
#include "genkin/errors.hpp"
#include "genkin/quadrature.hpp"
#include "genkin/roots.hpp"

namespace genkin {

namespace {

// Integrate fn(t) over [a, b] segment-by-segment on the dense output (the
// interpolant is only C0 across step boundaries).
QuadResult integrate_dense(const Trajectory& traj,
                           const std::function<double(double)>& fn, double a,
                           double b, double rel_tol = 1e-12) {
    QuadResult total;
    const auto& samples = traj.samples();
    // Window-wide magnitude of fn, so each segment gets an absolute error
    // floor; a relative test alone never converges where fn crosses zero.
    double scale = 0.0;
    for (const auto& s : samples)
        if (s.t >= a && s.t <= b) scale = std::max(scale, std::abs(fn(s.t)));
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        double lo = std::max(a, samples[i].t);
        double hi = std::min(b, samples[i + 1].t);
        if (hi <= lo) continue;
        QuadResult q = gauss_adaptive(fn, lo, hi, rel_tol,
                                      rel_tol * scale * (hi - lo));
        total.value += q.value;
        total.error += q.error;
    }
    return total;
}

double traj_scale(const Trajectory& traj) {
    double rmax = 0.0, pmax = 0.0;
    for (const auto& s : traj.samples()) {
        rmax = std::max(rmax, s.r.norm());
        pmax = std::max(pmax, s.p.norm());
    }
    return std::max(rmax + pmax, 1e-300);
}

}  // namespace

Boundedness classify_boundedness(const SystemSpec& sys, const PhaseState& initial) {
    double E = sys.hamiltonian(initial);
    double vinf = sys.potential.limit_at_infinity();
    if (std::isinf(vinf)) return vinf > 0 ? Boundedness::bound : Boundedness::unbound;
    if (std::isfinite(vinf)) {
        double escape = vinf + kinetic_eval(sys.kinetic, 0.0);
        return E < escape ? Boundedness::bound : Boundedness::unbound;
    }
    // custom potential: probe by integration, promote to unbound on escape
    double r0 = std::max(initial.r.norm(), 1.0);
    double v0 = std::max(kinetic_velocity(sys.kinetic, initial.p).norm(), 0.1);
    IntegrateOptions opts;
    opts.rel_tol = 1e-8;
    opts.drift_budget = 1.0;
    try {
        Trajectory probe = integrate(sys, initial, initial.t + 200.0 * r0 / v0, opts);
        for (const auto& s : probe.samples())
            if (s.r.norm() > 1e3 * r0) return Boundedness::unbound;
    } catch (const Error&) {
        return Boundedness::undetermined;
    }
    return Boundedness::undetermined;
}

Vec angular_momentum(const SystemSpec& sys, const PhaseState& s) {
    if (sys.dimension < 2)
        throw DimensionError("angular_momentum undefined for D = 1");
    if (s.r.dim() != sys.dimension || s.p.dim() != sys.dimension)
        throw DimensionError("angular_momentum: state dimension mismatch");
    return cross(s.r, s.p);
}

double find_period(const Trajectory& traj, double tol) {
    const auto& samples = traj.samples();
    if (samples.size() < 8)
        throw NotPeriodicError("trajectory too short for period detection");
    const SystemSpec& sys = traj.system();
    const double scale = traj_scale(traj);

    if (sys.dimension == 1) {
        // reference at the largest-|p| sample: crossings there are transversal.
        // Keep it in the first half of the span so returns can still occur.
        double t_mid = 0.5 * (samples.front().t + samples.back().t);
        size_t ref = 0;
        for (size_t i = 0; i < samples.size() && samples[i].t <= t_mid; ++i)
            if (std::abs(samples[i].p[0]) > std::abs(samples[ref].p[0])) ref = i;
        const double x_ref = samples[ref].r[0], t_ref = samples[ref].t;
        const double dir = samples[ref].p[0] >= 0 ? 1.0 : -1.0;
        auto fx = [&](double t) { return traj.state_at(t).r[0] - x_ref; };

        std::vector<double> cands;
        bool armed = false;  // wait until x leaves the reference point
        for (size_t i = ref; i + 1 < samples.size() && cands.size() < 6; ++i) {
            double f0 = samples[i].r[0] - x_ref, f1 = samples[i + 1].r[0] - x_ref;
            if (!armed) {
                if (std::abs(f0) > 1e-10 * scale) armed = true;
                else continue;
            }
            if (f0 == 0.0 || std::signbit(f0) == std::signbit(f1)) continue;
            double tc = find_root(fx, samples[i].t, samples[i + 1].t, f0, f1);
            PhaseState sc = traj.state_at(tc);
            if (sc.p[0] * dir > 1e-10 * scale) cands.push_back(tc - t_ref);
        }
        for (double tau : cands) {
            PhaseState s1 = traj.state_at(t_ref + tau);
            double dev = (s1.r - samples[ref].r).norm() + (s1.p - samples[ref].p).norm();
            if (dev <= tol * scale) return tau;
        }
        throw NotPeriodicError("no verified same-direction return found (D = 1)");
    }

    if (!sys.potential.central())
        throw NotPeriodicError(
            "period detection for D >= 2 requires a central potential");

    // radial period: minima of |r|, i.e. r.p crossing - -> +
    auto frp = [&](double t) {
        PhaseState s = traj.state_at(t);
        return dot(s.r, s.p);
    };
    std::vector<double> minima;
    for (size_t i = 0; i + 1 < samples.size() && minima.size() < 24; ++i) {
        double f0 = dot(samples[i].r, samples[i].p);
        double f1 = dot(samples[i + 1].r, samples[i + 1].p);
        if (f0 < 0.0 && f1 > 0.0)
            minima.push_back(find_root(frp, samples[i].t, samples[i + 1].t, f0, f1));
    }
    if (minima.size() < 2)
        throw NotPeriodicError("fewer than two radial minima in the trajectory");
    double tau = 0.0;
    for (size_t i = 0; i + 1 < minima.size(); ++i) tau += minima[i + 1] - minima[i];
    tau /= (minima.size() - 1);
    for (size_t i = 0; i + 1 < minima.size(); ++i) {
        if (std::abs((minima[i + 1] - minima[i]) - tau) > std::max(tol * tau, 1e-12))
            throw NotPeriodicError("radial minima are not equally spaced");
    }
    double rmin0 = traj.state_at(minima[0]).r.norm();
    double rmin1 = traj.state_at(minima[1]).r.norm();
    if (std::abs(rmin0 - rmin1) > tol * scale)
        throw NotPeriodicError("radial minima do not return to the same radius");
    return tau;
}

AverageReport time_average(const Trajectory& traj, const Quantity& q, double t0,
                           double window, bool long_window_estimate) {
    if (!(window > 0.0)) throw RangeError("time_average: window must be positive");
    double lo = std::min(traj.t_begin(), traj.t_end());
    double hi = std::max(traj.t_begin(), traj.t_end());
    double pad = 1e-9 * (hi - lo);
    if (t0 < lo - pad || t0 + window > hi + pad)
        throw RangeError("time_average: window outside trajectory span");

    auto fn = [&](double t) { return q(traj.state_at(t)); };
    AverageReport rep;
    rep.window = window;
    QuadResult full = integrate_dense(traj, fn, t0, t0 + window);
    rep.value = full.value / window;
    rep.quad_error = full.error / window;
    if (long_window_estimate) {
        QuadResult half = integrate_dense(traj, fn, t0, t0 + 0.5 * window);
        rep.window_error = std::abs(half.value / (0.5 * window) - rep.value);
    }
    return rep;
}

double action_along(const Trajectory& traj, double t0, double t1) {
    if (t1 < t0) throw RangeError("action_along: t1 < t0");
    if (t1 == t0) return 0.0;
    const KineticModel& kin = traj.system().kinetic;
    auto fn = [&](double t) {
        PhaseState s = traj.state_at(t);
        // |p| |dr/dt|; velocity and momentum are parallel along the motion
        return s.p.norm() * kinetic_velocity(kin, s.p).norm();
    };
    QuadResult q = integrate_dense(traj, fn, t0, t1);
    return q.value / (2.0 * 3.14159265358979323846);
}

namespace quantities {

Quantity kinetic(const SystemSpec& sys) {
    KineticModel k = sys.kinetic;
    return [k](const PhaseState& s) { return kinetic_eval(k, s.p.norm2()); };
}
Quantity potential(const SystemSpec& sys) {
    PotentialModel v = sys.potential;
    return [v](const PhaseState& s) { return potential_eval(v, s.r); };
}
Quantity kinetic_virial(const SystemSpec& sys) {
    SystemSpec c = sys;
    return [c](const PhaseState& s) { return virial_terms(c, s).kinetic_virial; };
}
Quantity potential_virial(const SystemSpec& sys) {
    SystemSpec c = sys;
    return [c](const PhaseState& s) { return virial_terms(c, s).potential_virial; };
}
Quantity r_dot_p() {
    return [](const PhaseState& s) { return dot(s.r, s.p); };
}

}  // namespace quantities

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    int d = traj.dimension();
    os << "t";
    for (int i = 0; i < d; ++i) os << ",r" << i;
    for (int i = 0; i < d; ++i) os << ",p" << i;
    os << ",H,J\n";
    const SystemSpec& sys = traj.system();
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const auto& s : traj.samples()) {
        put(s.t);
        for (int i = 0; i < d; ++i) {
            os << ',';
            put(s.r[i]);
        }
        for (int i = 0; i < d; ++i) {
            os << ',';
            put(s.p[i]);
        }
        os << ',';
        put(sys.hamiltonian(s));
        os << ',';
        put(d >= 2 ? cross(s.r, s.p).norm() : 0.0);
        os << '\n';
    }
}

}  // namespace genkin
