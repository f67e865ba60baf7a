#include "genkin/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "genkin/errors.hpp"

namespace genkin {
namespace {

// Potential along the first axis: signed x in 1D, radius |x| otherwise.
double coord_V(const SystemSpec& sys, double x) {
    Vec r = Vec::zero(sys.dimension);
    r.c[0] = sys.dimension == 1 ? x : std::abs(x);
    return potential_eval(sys.potential, r);
}

PhaseState coord_state(const SystemSpec& sys, double coord, double p2) {
    PhaseState st;
    st.t = 0.0;
    st.r = Vec::zero(sys.dimension);
    st.r.c[0] = sys.dimension == 1 ? coord : std::abs(coord);
    st.p = Vec::zero(sys.dimension);
    st.p.c[0] = std::sqrt(std::max(p2, 0.0));
    return st;
}

double finish(TheoremReport& rep, double fallback_scale) {
    rep.scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    if (rep.scale == 0.0) rep.scale = std::max(std::abs(fallback_scale), 1.0);
    rep.residual = std::abs(rep.lhs - rep.rhs) / rep.scale;
    rep.passed = rep.residual <= rep.tolerance;
    return rep.residual;
}

}  // namespace

TheoremReport check_virial(const SystemSpec& sys, double E, double L,
                           const VirialOptions& opts) {
    TheoremReport rep;
    rep.kind = "virial";
    rep.tolerance = opts.tolerance;

    RadialSolution sol(sys, E, L, opts.radial);
    rep.diagnostics["E"] = E;
    rep.diagnostics["L"] = L;
    rep.diagnostics["r_inner"] = sol.geometry().r_inner;
    rep.diagnostics["r_outer"] = sol.geometry().r_outer;
    rep.diagnostics["tau_r"] = sol.geometry().tau_r;
    rep.diagnostics["action"] = sol.geometry().action;

    if (!opts.use_trajectory) {
        auto kv = sol.average_kinetic_virial();
        auto pv = sol.average_potential_virial();
        rep.lhs = kv.value;
        rep.rhs = pv.value;
        rep.diagnostics["lhs_quad_error"] = kv.error;
        rep.diagnostics["rhs_quad_error"] = pv.error;
    } else {
        PhaseState s0 = orbit_initial_state(sys, E, L, opts.radial);
        double tau = sol.geometry().tau_r;
        double whole = std::max(1.0, std::floor(opts.periods));
        Trajectory traj = integrate(sys, s0, (whole + 0.25) * tau, opts.integrate);
        auto kv = time_average(traj, quantities::kinetic_virial(sys), 0.0,
                               whole * tau, true);
        auto pv = time_average(traj, quantities::potential_virial(sys), 0.0,
                               whole * tau, true);
        rep.lhs = kv.value;
        rep.rhs = pv.value;
        rep.diagnostics["lhs_quad_error"] = kv.quad_error;
        rep.diagnostics["rhs_quad_error"] = pv.quad_error;
        rep.diagnostics["lhs_window_error"] = kv.window_error;
        rep.diagnostics["rhs_window_error"] = pv.window_error;
        rep.diagnostics["periods"] = whole;
        rep.diagnostics["energy_drift"] = traj.energy_drift();
    }
    finish(rep, E);
    return rep;
}

TheoremReport check_hellmann_feynman(const SystemSpec& sys,
                                     const std::string& target, double I,
                                     double L,
                                     const HellmannFeynmanOptions& opts) {
    TheoremReport rep;
    rep.kind = "hellmann_feynman";
    rep.tolerance = opts.tolerance;

    ResolvedBinding bind = resolve_binding(sys, target);
    double lam = bind.value;
    double h = opts.rel_step * (std::abs(lam) > 0.0 ? std::abs(lam) : 1.0);

    auto E_of = [&](double v) {
        SystemSpec s2 = bind.rebind(v);
        return energy_at_action(s2, I, L, opts.radial);
    };
    double E0 = E_of(lam);
    double D1 = (E_of(lam + h) - E_of(lam - h)) / (2.0 * h);
    double D2 = (E_of(lam + 0.5 * h) - E_of(lam - 0.5 * h)) / h;
    rep.lhs = (4.0 * D2 - D1) / 3.0;  // Richardson-extrapolated dE/dlambda

    RadialSolution sol(sys, E0, L, opts.radial);
    auto q = [&](double coord, double p2) {
        PhaseState st = coord_state(sys, coord, p2);
        if (bind.dH_dlambda) return bind.dH_dlambda(sys, st);
        double dl = 1e-6 * (std::abs(lam) > 0.0 ? std::abs(lam) : 1.0);
        return (bind.rebind(lam + dl).hamiltonian(st) -
                bind.rebind(lam - dl).hamiltonian(st)) /
               (2.0 * dl);
    };
    auto avg = sol.average(q);
    rep.rhs = avg.value;

    rep.diagnostics["lambda"] = lam;
    rep.diagnostics["step"] = h;
    rep.diagnostics["E_at_lambda"] = E0;
    rep.diagnostics["derivative_coarse"] = D1;
    rep.diagnostics["derivative_fine"] = D2;
    rep.diagnostics["rhs_quad_error"] = avg.error;
    rep.diagnostics["tau_r"] = sol.geometry().tau_r;
    finish(rep, E0);
    return rep;
}

TheoremReport check_comparison(const SystemSpec& lower, const SystemSpec& upper,
                               double I, double L,
                               const ComparisonOptions& opts) {
    if (lower.dimension != upper.dimension)
        throw DimensionError("check_comparison: systems must share a dimension");

    TheoremReport rep;
    rep.kind = "comparison";
    rep.tolerance = opts.tolerance;

    double E1 = energy_at_action(lower, I, L, opts.radial);
    double E2 = energy_at_action(upper, I, L, opts.radial);
    double scale = std::max({std::abs(E1), std::abs(E2), 1e-300});

    TurningPoints w1 = turning_points(lower, E1, L, opts.radial);
    TurningPoints w2 = turning_points(upper, E2, L, opts.radial);
    bool line = lower.dimension == 1 || L == 0.0;

    // Pointwise dominance. The kinetic and potential differences depend on
    // independent variables, so inf(H2 - H1) = inf(dK) + inf(dV); sample both
    // over the orbit-relevant ranges with seeded jitter.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jit(0.0, 1.0);
    const int N = std::max(10, opts.dominance_samples);

    double min_dV = std::numeric_limits<double>::max(), min_dV_at = 0.0;
    {
        double A = std::min(w1.inner, w2.inner);
        double B = std::max(w1.outer, w2.outer);
        int valid = 0;
        for (int i = 0; i < N; ++i) {
            double x;
            if (line) {
                double pad = 0.05 * (B - A);
                x = (A - pad) + (B - A + 2.0 * pad) * (i + jit(rng)) / N;
            } else {
                double rlo = 0.5 * A, rhi = 2.0 * B;
                x = rlo * std::pow(rhi / rlo, (i + jit(rng)) / N);
            }
            double dv;
            try {
                dv = coord_V(upper, x) - coord_V(lower, x);
            } catch (const std::exception&) {
                continue;
            }
            if (!std::isfinite(dv)) continue;
            ++valid;
            if (dv < min_dV) {
                min_dV = dv;
                min_dV_at = x;
            }
        }
        if (valid < N / 2)
            throw NumericalError(
                "check_comparison: potentials not evaluable over the sampled range");
    }

    double min_dK = std::numeric_limits<double>::max(), min_dK_at = 0.0;
    {
        auto p2_cap = [&](const SystemSpec& s, double E,
                          const TurningPoints& w) {
            double vmin = std::numeric_limits<double>::max();
            for (int i = 0; i <= 32; ++i) {
                double x = w.inner + (w.outer - w.inner) * i / 32.0;
                try {
                    vmin = std::min(vmin, coord_V(s, x));
                } catch (const std::exception&) {
                }
            }
            double K0 = kinetic_eval(s.kinetic, 0.0);
            double T = E - vmin;
            if (!(T > K0)) return 1.0;
            return kinetic_inverse(s.kinetic, T);
        };
        double p2hi =
            10.0 * std::max(p2_cap(lower, E1, w1), p2_cap(upper, E2, w2));
        if (!(p2hi > 0.0) || !std::isfinite(p2hi)) p2hi = 1.0;
        double p2lo = 1e-12 * p2hi;
        for (int i = -1; i < N; ++i) {
            double p2 = i < 0 ? 0.0
                              : p2lo * std::pow(p2hi / p2lo, (i + jit(rng)) / N);
            double dk = kinetic_eval(upper.kinetic, p2) -
                        kinetic_eval(lower.kinetic, p2);
            if (!std::isfinite(dk)) continue;
            if (dk < min_dK) {
                min_dK = dk;
                min_dK_at = p2;
            }
        }
    }

    rep.diagnostics["min_kinetic_gap"] = min_dK;
    rep.diagnostics["min_potential_gap"] = min_dV;
    if (min_dK + min_dV < -1e-9 * scale) {
        double where = min_dK < min_dV ? min_dK_at : min_dV_at;
        double H1 = kinetic_eval(lower.kinetic, min_dK_at) +
                    coord_V(lower, min_dV_at);
        double H2 = kinetic_eval(upper.kinetic, min_dK_at) +
                    coord_V(upper, min_dV_at);
        throw DominanceError(
            "check_comparison: the upper Hamiltonian dips below the lower one "
            "(witness at p^2 = " +
                std::to_string(min_dK_at) + ", coord = " +
                std::to_string(min_dV_at) + ")",
            where, H1, H2);
    }

    // Straight-line family H_mu = (1-mu) H1 + mu H2.
    auto system_at = [&](double mu) {
        SystemSpec s;
        s.dimension = lower.dimension;
        s.kinetic = mix_kinetics(lower.kinetic, upper.kinetic, mu);
        s.potential = mix_potentials(lower.potential, upper.potential, mu);
        return s;
    };
    auto gap_average = [&](const SystemSpec& smu, double Emu) {
        RadialSolution sol(smu, Emu, L, opts.radial);
        return sol.average([&](double coord, double p2) {
            return (kinetic_eval(upper.kinetic, p2) -
                    kinetic_eval(lower.kinetic, p2)) +
                   (coord_V(upper, coord) - coord_V(lower, coord));
        });
    };

    const int M = std::max(3, opts.mu_points);
    std::vector<double> mus(M), Es(M);
    bool mixes_admissible = true;
    double min_mix_kprime = std::numeric_limits<double>::max();
    double dH_mid = 0.0, dH_mid_err = 0.0;
    for (int i = 0; i < M; ++i) {
        double mu = double(i) / (M - 1);
        SystemSpec smu = system_at(mu);
        KineticValidation kv = validate_kinetic(smu.kinetic);
        mixes_admissible = mixes_admissible && kv.admissible;
        min_mix_kprime = std::min(min_mix_kprime, kv.min_kprime);
        double Emu = energy_at_action(smu, I, L, opts.radial);
        auto gap = gap_average(smu, Emu);
        mus[i] = mu;
        Es[i] = Emu;
        std::map<std::string, double> row;
        row["mu"] = mu;
        row["E"] = Emu;
        row["gap_average"] = gap.value;
        row["gap_average_error"] = gap.error;
        rep.table.push_back(std::move(row));
        if (std::abs(mu - 0.5) < 1e-12) {
            dH_mid = gap.value;
            dH_mid_err = gap.error;
        }
    }

    double worst_drop = 0.0;
    for (int i = 0; i + 1 < M; ++i)
        worst_drop = std::max(worst_drop, Es[i] - Es[i + 1]);

    // Slope bridge at mu = 1/2: dE/dmu should equal <H2 - H1> on the mu orbit.
    bool have_mid = M % 2 == 1;
    if (!have_mid) {
        SystemSpec smid = system_at(0.5);
        double Emid = energy_at_action(smid, I, L, opts.radial);
        auto gap = gap_average(smid, Emid);
        dH_mid = gap.value;
        dH_mid_err = gap.error;
    }
    auto E_at_mu = [&](double mu) {
        return energy_at_action(system_at(mu), I, L, opts.radial);
    };
    double hmu = 0.02;
    double D1 = (E_at_mu(0.5 + hmu) - E_at_mu(0.5 - hmu)) / (2.0 * hmu);
    double D2 = (E_at_mu(0.5 + 0.5 * hmu) - E_at_mu(0.5 - 0.5 * hmu)) / hmu;
    double slope = (4.0 * D2 - D1) / 3.0;
    double bridge_resid =
        std::abs(slope - dH_mid) / std::max(scale, std::abs(dH_mid));

    rep.lhs = E1;
    rep.rhs = E2;
    rep.scale = scale;
    rep.residual = std::max(0.0, E1 - E2) / scale;
    bool ordered = E2 - E1 >= -opts.tolerance * scale;
    bool monotone = worst_drop <= opts.tolerance * scale;
    bool bridge_ok = bridge_resid <= opts.slope_tolerance;
    rep.passed = ordered && monotone && bridge_ok && mixes_admissible;

    rep.diagnostics["E_lower"] = E1;
    rep.diagnostics["E_upper"] = E2;
    rep.diagnostics["worst_monotonicity_drop"] = worst_drop;
    rep.diagnostics["slope_at_half"] = slope;
    rep.diagnostics["gap_average_at_half"] = dH_mid;
    rep.diagnostics["gap_average_at_half_error"] = dH_mid_err;
    rep.diagnostics["bridge_residual"] = bridge_resid;
    rep.diagnostics["end_consistency_lower"] = std::abs(Es.front() - E1);
    rep.diagnostics["end_consistency_upper"] = std::abs(Es.back() - E2);
    rep.diagnostics["min_mix_kprime"] = min_mix_kprime;
    rep.diagnostics["mixes_admissible"] = mixes_admissible ? 1.0 : 0.0;
    return rep;
}

}  // namespace genkin
