#include "genkin/radial.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "genkin/errors.hpp"
#include "genkin/quadrature.hpp"
#include "genkin/roots.hpp"

namespace genkin {
namespace {

constexpr double kPi = 3.14159265358979323846;

// 1D systems and L = 0 central orbits both live on a line through the origin;
// everything else reduces to the radius alone.
bool is_line(const SystemSpec& sys, double L) {
    return sys.dimension == 1 || L == 0.0;
}

// Potential along the scan coordinate: signed x in line mode (central systems
// probed through the origin see the radius |x|), plain radius otherwise.
double line_V(const SystemSpec& sys, double x) {
    Vec r = Vec::zero(sys.dimension);
    r.c[0] = sys.dimension == 1 ? x : std::abs(x);
    return potential_eval(sys.potential, r);
}

double line_dV(const SystemSpec& sys, double x) {
    Vec r = Vec::zero(sys.dimension);
    if (sys.dimension == 1) {
        r.c[0] = x;
        return potential_gradient(sys.potential, r).c[0];
    }
    r.c[0] = std::abs(x);
    double g = potential_gradient(sys.potential, r).c[0];
    return x < 0.0 ? -g : g;
}

// W = E - V_eff, with V_eff = V + K(L^2/r^2) off the line and V + K(0) on it.
// Turning points are the simple zeros of W.
std::function<double(double)> make_W(const SystemSpec& sys, double E, double L) {
    double K0 = kinetic_eval(sys.kinetic, 0.0);
    if (is_line(sys, L))
        return [&sys, E, K0](double x) { return E - line_V(sys, x) - K0; };
    return [&sys, E, L](double r) {
        return E - line_V(sys, r) - kinetic_eval(sys.kinetic, L * L / (r * r));
    };
}

double safe_eval(const std::function<double(double)>& f, double x) {
    try {
        double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// Log-spaced scan abscissas covering 21 decades around the scale hint,
// mirrored through the origin in line mode and clipped to any explicit window.
std::vector<double> scan_grid(const SystemSpec& sys, double L,
                              const RadialOptions& opts) {
    double hscale = opts.scale_hint > 0.0 ? opts.scale_hint : 1.0;
    const int per_decade = 30, decades = 21;
    std::vector<double> pos;
    pos.reserve(decades * per_decade + 1);
    for (int i = 0; i <= decades * per_decade; ++i)
        pos.push_back(1e-9 * hscale * std::pow(10.0, double(i) / per_decade));
    std::vector<double> xs;
    if (is_line(sys, L)) {
        xs.reserve(2 * pos.size() + 1);
        for (auto it = pos.rbegin(); it != pos.rend(); ++it) xs.push_back(-*it);
        xs.push_back(0.0);
        xs.insert(xs.end(), pos.begin(), pos.end());
    } else {
        xs = std::move(pos);
    }
    if (std::isfinite(opts.window_lo) || std::isfinite(opts.window_hi)) {
        double lo = std::isfinite(opts.window_lo) ? opts.window_lo : -1e300;
        double hi = std::isfinite(opts.window_hi) ? opts.window_hi : 1e300;
        std::vector<double> clipped;
        if (std::isfinite(opts.window_lo)) clipped.push_back(lo);
        for (double x : xs)
            if (x > lo && x < hi) clipped.push_back(x);
        if (std::isfinite(opts.window_hi)) clipped.push_back(hi);
        xs = std::move(clipped);
    }
    return xs;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
    const double g = 0.3819660112501051;
    auto val = [&](double x) {
        double v = safe_eval(f, x);
        return std::isnan(v) ? -std::numeric_limits<double>::max() : v;
    };
    double x1 = a + g * (b - a), x2 = b - g * (b - a);
    double f1 = val(x1), f2 = val(x2);
    for (int i = 0; i < 120; ++i) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + g * (b - a);
            f1 = val(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - g * (b - a);
            f2 = val(x2);
        }
        if (b - a <= 1e-14 * (std::abs(a) + std::abs(b)) + 1e-300) break;
    }
    return 0.5 * (a + b);
}

}  // namespace

TurningPoints turning_points(const SystemSpec& sys, double E, double L,
                             const RadialOptions& opts) {
    if (sys.dimension < 1 || sys.dimension > 3)
        throw DimensionError("turning_points: dimension must be 1, 2, or 3");
    if (L < 0.0) throw DomainError("turning_points: L must be >= 0");
    if (sys.dimension == 1 && L != 0.0)
        throw DimensionError("turning_points: L must be 0 in one dimension");
    if (sys.dimension >= 2 && !sys.potential.central())
        throw DimensionError(
            "turning_points: radial analysis needs a central potential");

    bool line = is_line(sys, L);
    auto W = make_W(sys, E, L);
    auto Ws = [&](double x) { return safe_eval(W, x); };

    std::vector<double> xs = scan_grid(sys, L, opts);
    std::vector<double> ws(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) ws[i] = Ws(xs[i]);

    int first = -1, last = -1;
    for (size_t i = 0; i < xs.size(); ++i)
        if (!std::isnan(ws[i])) {
            if (first < 0) first = int(i);
            last = int(i);
        }
    if (first < 0)
        throw DomainError(
            "turning_points: potential not evaluable in the search window");

    bool any_pos = false;
    for (double w : ws)
        if (w > 0.0) any_pos = true;

    std::vector<std::pair<double, double>> brackets;
    for (size_t i = 0; i + 1 < xs.size(); ++i)
        if (!std::isnan(ws[i]) && !std::isnan(ws[i + 1]) &&
            (ws[i] > 0.0) != (ws[i + 1] > 0.0))
            brackets.push_back({xs[i], xs[i + 1]});

    if (!any_pos) {
        // The well may be narrower than the scan spacing (energies just above
        // the floor): climb to the top of W from the best sample and retry.
        int ib = first;
        for (int i = first; i <= last; ++i)
            if (!std::isnan(ws[i]) && (std::isnan(ws[ib]) || ws[i] > ws[ib]))
                ib = i;
        int il = ib - 1, ir = ib + 1;
        while (il >= first && std::isnan(ws[il])) --il;
        while (ir <= last && std::isnan(ws[ir])) ++ir;
        if (il < first || ir > last)
            throw DomainError(
                "turning_points: no classically allowed region at this energy");
        double xstar = golden_max(Ws, xs[il], xs[ir]);
        if (!(Ws(xstar) > 0.0))
            throw DomainError(
                "turning_points: energy is below the floor of the effective "
                "potential");
        brackets = {{xs[il], xstar}, {xstar, xs[ir]}};
    }

    if (ws[first] > 0.0) {
        if (line)
            throw UnboundError("turning_points: no turning point on the lower side");
        throw UnboundError(
            "turning_points: no inner turning point; the orbit reaches the origin");
    }
    if (ws[last] > 0.0)
        throw UnboundError(
            "turning_points: no outer turning point; the orbit is unbound at "
            "this energy");

    RootOptions ro;
    ro.rel_tol = opts.root_rel_tol;
    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (const auto& br : brackets)
        roots.push_back(find_root(W, br.first, br.second, ro));
    std::sort(roots.begin(), roots.end());
    if (roots.empty() || roots.size() % 2 != 0)
        throw NumericalError(
            "turning_points: unresolved sign structure in the effective potential");

    std::vector<std::pair<double, double>> wells;
    for (size_t i = 0; i + 1 < roots.size(); i += 2)
        wells.push_back({roots[i], roots[i + 1]});
    if (wells.size() > 1)
        throw AmbiguousWellError(
            "turning_points: several classically allowed wells; restrict the "
            "search window to pick one",
            wells);

    TurningPoints tp{wells[0].first, wells[0].second};
    if (line && sys.potential.singular_at_origin() && tp.inner < 0.0 &&
        tp.outer > 0.0)
        throw SingularityError(
            "turning_points: the allowed region spans the singular point at "
            "the origin");
    return tp;
}

RadialSolution::RadialSolution(const SystemSpec& sys, double E, double L,
                               const RadialOptions& opts)
    : sys_(nullptr), sys_copy_(sys) {
    sys_ = &sys_copy_;
    geom_.E = E;
    geom_.L = L;
    TurningPoints tp = turning_points(sys_copy_, E, L, opts);
    geom_.r_inner = tp.inner;
    geom_.r_outer = tp.outer;
    line_mode_ = is_line(sys_copy_, L);
    if (line_mode_)
        solve_line(sys_copy_, opts);
    else
        solve_central(sys_copy_, opts);
}

// L > 0: substitute r = c - d cos(u). The half-circuit integrands become
// smooth periodic functions of u, so the equispaced midpoint rule converges
// spectrally; doubling the node count supplies the error estimate and the
// penultimate grid.
void RadialSolution::solve_central(const SystemSpec& sys,
                                   const RadialOptions& opts) {
    const KineticModel& kin = sys.kinetic;
    const double E = geom_.E, L = geom_.L;
    const double a = geom_.r_inner, b = geom_.r_outer;
    const double d = 0.5 * (b - a);
    const double K0 = kinetic_eval(kin, 0.0);

    // |d(p_r^2)/dr| at each end: substituted for the direct evaluation where
    // cancellation in p^2 - L^2/r^2 would otherwise dominate
    auto pr2_slope = [&](double e) {
        double p2e = L * L / (e * e);
        double kp = kinetic_prime(kin, p2e);
        return std::abs(-line_dV(sys, e) / kp + 2.0 * L * L / (e * e * e));
    };
    const double P1a = pr2_slope(a), P1b = pr2_slope(b);

    auto run_level = [&](int n, std::vector<Node>& nodes, double& tau,
                         double& phi, double& Ir) {
        nodes.clear();
        nodes.reserve(n);
        double st = 0.0, sp = 0.0, si = 0.0;
        const double w = kPi / n;
        for (int j = 0; j < n; ++j) {
            double u = (j + 0.5) * kPi / n;
            double sh2 = std::sin(0.5 * u), ch2 = std::cos(0.5 * u);
            double sa = 2.0 * d * sh2 * sh2;  // r - a
            double sb = 2.0 * d * ch2 * ch2;  // b - r
            double r = sa <= sb ? a + sa : b - sb;
            double s_near = std::min(sa, sb);
            double T = E - line_V(sys, r);
            double lb = L * L / (r * r);
            double p2 = T > K0 ? kinetic_inverse(kin, T) : lb;
            double pr2 = p2 - lb;
            if (!(pr2 > 0.0) || s_near < 1e-9 * (b - a)) {
                pr2 = s_near * (sa <= sb ? P1a : P1b);
                p2 = lb + pr2;
            }
            double sh = std::sqrt(pr2 / (sa * sb));  // |p_r| = d sin(u) sh
            double kp = kinetic_prime(kin, p2);
            double su = std::sin(u);
            double ft = 1.0 / (kp * sh);
            st += ft;
            sp += 2.0 * L / (r * r * sh);
            si += sh * su * su;
            nodes.push_back({r, p2, w * ft});
        }
        tau = w * st;
        phi = w * sp;
        Ir = (d * d / n) * si;
    };

    int n = std::max(16, opts.base_nodes);
    double t0, p0, i0, t1, p1, i1;
    run_level(n, grid_.coarse, t0, p0, i0);
    for (;;) {
        n *= 2;
        run_level(n, grid_.fine, t1, p1, i1);
        geom_.tau_error = std::abs(t1 - t0);
        geom_.phi_error = std::abs(p1 - p0);
        double ir_err = std::abs(i1 - i0);
        geom_.action_error = ir_err + L / (2.0 * kPi) * geom_.phi_error;
        bool ok = geom_.tau_error <= opts.quad_rel_tol * std::abs(t1) &&
                  geom_.phi_error <= opts.quad_rel_tol * std::abs(p1) &&
                  ir_err <= opts.quad_rel_tol * (std::abs(i1) + 1e-300);
        if (ok || 2 * n > opts.max_nodes) break;
        grid_.coarse = std::move(grid_.fine);
        t0 = t1;
        p0 = p1;
        i0 = i1;
    }
    geom_.tau_r = t1;
    geom_.phi = p1;
    geom_.action_r = i1;
    geom_.action = i1 + L * p1 / (2.0 * kPi);
    grid_.tau_fine = t1;
    grid_.tau_coarse = t0;
}

// 1D / L = 0: tanh-sinh on each smooth piece of [x_-, x_+] (split at interior
// kinks of V). Near a turning point the raw E - V loses digits, so nodes are
// addressed by their exact distance s to the endpoint and W is replaced by a
// local cubic W ~ c1 s + c2 s^2 + c3 s^3 fitted against the analytic slope.
void RadialSolution::solve_line(const SystemSpec& sys,
                                const RadialOptions& opts) {
    const KineticModel& kin = sys.kinetic;
    const double E = geom_.E;
    const double K0 = kinetic_eval(kin, 0.0);
    const double x_lo = geom_.r_inner, x_hi = geom_.r_outer;

    auto Wraw = [&](double x) { return E - line_V(sys, x) - K0; };

    std::vector<double> cuts{x_lo};
    for (double k : sys.potential.kinks_1d())
        if (k > x_lo + 1e-12 * (x_hi - x_lo) && k < x_hi - 1e-12 * (x_hi - x_lo))
            cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(x_hi);

    struct Model {
        double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    };
    auto make_model = [&](double xe, int dir, double len) {
        double c1 = -dir * line_dV(sys, xe);
        if (!(c1 > 0.0))
            throw NumericalError(
                "orbit quadrature: degenerate turning point (flat potential)");
        double hf = 1e-3 * len;
        double R1 = Wraw(xe + dir * hf) - c1 * hf;
        double R2 = Wraw(xe + dir * 2.0 * hf) - c1 * 2.0 * hf;
        double c2 = (8.0 * R1 - R2) / (4.0 * hf * hf);
        double c3 = (R2 - 4.0 * c2 * hf * hf) / (8.0 * hf * hf * hf);
        return Model{c1, c2, c3};
    };

    double tau = 0.0, act = 0.0, tau_err = 0.0, act_err = 0.0;
    grid_.fine.clear();
    grid_.coarse.clear();
    double tw_fine = 0.0, tw_coarse = 0.0;

    for (size_t pi = 0; pi + 1 < cuts.size(); ++pi) {
        double pa = cuts[pi], pb = cuts[pi + 1];
        bool turnL = pi == 0, turnR = pi + 2 == cuts.size();
        double len = pb - pa;
        Model mL, mR;
        if (turnL) mL = make_model(pa, +1, len);
        if (turnR) mR = make_model(pb, -1, len);
        double s_switch = 1e-6 * len;

        auto W_at = [&](double x, double s, int side) {
            bool turn = side < 0 ? turnL : turnR;
            if (turn) {
                double W = s >= s_switch ? Wraw(x) : -1.0;
                if (!(W > 0.0)) {
                    const Model& m = side < 0 ? mL : mR;
                    W = s * (m.c1 + s * (m.c2 + s * m.c3));
                    if (!(W > 0.0)) W = s * m.c1;
                }
                return W;
            }
            return std::max(Wraw(x), 0.0);
        };

        struct Rec {
            double x, p2, wt;  // wt: node weight times the 1/speed integrand
            int level;
        };
        std::vector<Rec> recs;
        double sum_t = 0.0, sum_i = 0.0;
        double vt = 0.0, vi = 0.0, vt_prev = 0.0, vi_prev = 0.0;
        double et = 0.0, ei = 0.0;
        bool have_prev = false;
        int final_lev = 0;
        for (int lev = 0;; ++lev) {
            for (const TanhSinhNode& nd : tanh_sinh_level(lev, pa, pb)) {
                double W = W_at(nd.x, nd.s_near, nd.side);
                double p2 = W > 0.0 ? kinetic_inverse(kin, W + K0) : 0.0;
                double spd = kinetic_speed(kin, p2);
                double ftau = spd > 0.0 ? 1.0 / spd : 0.0;
                if (!std::isfinite(ftau)) ftau = 0.0;
                sum_t += nd.weight * ftau;
                sum_i += nd.weight * std::sqrt(p2);
                recs.push_back({nd.x, p2, nd.weight * ftau, lev});
            }
            double hl = std::ldexp(0.5, -lev);
            vt = hl * sum_t;
            vi = hl * sum_i;
            if (have_prev) {
                et = std::abs(vt - vt_prev);
                ei = std::abs(vi - vi_prev);
                bool ok = et <= opts.quad_rel_tol * (std::abs(vt) + 1e-300) &&
                          ei <= opts.quad_rel_tol * (std::abs(vi) + 1e-300);
                if (ok || lev >= opts.ts_max_level) {
                    final_lev = lev;
                    break;
                }
            } else if (lev >= opts.ts_max_level) {
                final_lev = lev;
                et = std::abs(vt);
                ei = std::abs(vi);
                break;
            }
            vt_prev = vt;
            vi_prev = vi;
            have_prev = true;
        }

        tau += vt;
        act += vi;
        tau_err += et;
        act_err += ei;
        double hfin = std::ldexp(0.5, -final_lev);
        for (const Rec& rc : recs) {
            grid_.fine.push_back({rc.x, rc.p2, hfin * rc.wt});
            tw_fine += hfin * rc.wt;
            if (rc.level < final_lev) {
                grid_.coarse.push_back({rc.x, rc.p2, 2.0 * hfin * rc.wt});
                tw_coarse += 2.0 * hfin * rc.wt;
            }
        }
    }

    geom_.tau_r = 2.0 * tau;  // out and back
    geom_.phi = 0.0;
    geom_.action_r = act / kPi;
    geom_.action = geom_.action_r;
    geom_.tau_error = 2.0 * tau_err;
    geom_.phi_error = 0.0;
    geom_.action_error = act_err / kPi;
    grid_.tau_fine = tw_fine;
    grid_.tau_coarse = tw_coarse;
}

RadialSolution::Average RadialSolution::average(const RadialQuantity& q) const {
    auto acc = [&](const std::vector<Node>& ns) {
        double sw = 0.0, sq = 0.0;
        for (const Node& nd : ns) {
            double v = q(nd.coord, nd.p2);
            if (!std::isfinite(v))
                throw NumericalError(
                    "orbit average: quantity not finite at a quadrature node");
            sw += nd.tw;
            sq += nd.tw * v;
        }
        if (!(sw > 0.0))
            throw NumericalError("orbit average: degenerate quadrature grid");
        return sq / sw;
    };
    double vf = acc(grid_.fine);
    double vc = acc(grid_.coarse);
    return {vf, std::abs(vf - vc)};
}

RadialSolution::Average RadialSolution::average_kinetic() const {
    const KineticModel& kin = sys_copy_.kinetic;
    return average([&kin](double, double p2) { return kinetic_eval(kin, p2); });
}

RadialSolution::Average RadialSolution::average_potential() const {
    const SystemSpec& s = sys_copy_;
    return average([&s](double x, double) { return line_V(s, x); });
}

RadialSolution::Average RadialSolution::average_kinetic_virial() const {
    const KineticModel& kin = sys_copy_.kinetic;
    return average([&kin](double, double p2) {
        return p2 > 0.0 ? std::sqrt(p2) * kinetic_speed(kin, p2) : 0.0;
    });
}

RadialSolution::Average RadialSolution::average_potential_virial() const {
    const SystemSpec& s = sys_copy_;
    return average([&s](double x, double) {
        Vec r = Vec::zero(s.dimension);
        r.c[0] = s.dimension == 1 ? x : std::abs(x);
        return potential_r_dot_grad(s.potential, r);
    });
}

OrbitGeometry orbit_geometry(const SystemSpec& sys, double E, double L,
                             const RadialOptions& opts) {
    return RadialSolution(sys, E, L, opts).geometry();
}

RadialSolution::Average radial_average(const SystemSpec& sys, double E, double L,
                                       const RadialQuantity& q,
                                       const RadialOptions& opts) {
    return RadialSolution(sys, E, L, opts).average(q);
}

PhaseState orbit_initial_state(const SystemSpec& sys, double E, double L,
                               const RadialOptions& opts) {
    TurningPoints tp = turning_points(sys, E, L, opts);
    PhaseState s;
    s.t = 0.0;
    s.r = Vec::zero(sys.dimension);
    s.p = Vec::zero(sys.dimension);
    if (is_line(sys, L)) {
        s.r.c[0] = tp.outer;
    } else {
        s.r.c[0] = tp.inner;
        s.p.c[1] = L / tp.inner;
    }
    return s;
}

double energy_at_action(const SystemSpec& sys, double I_target, double L,
                        const RadialOptions& opts) {
    if (!(I_target > 0.0))
        throw DomainError("energy_at_action: the action must be positive");
    bool line = is_line(sys, L);
    double K0 = kinetic_eval(sys.kinetic, 0.0);

    auto veff = [&](double x) {
        return line ? line_V(sys, x) + K0
                    : line_V(sys, x) +
                          kinetic_eval(sys.kinetic, L * L / (x * x));
    };
    std::vector<double> xs = scan_grid(sys, L, opts);
    int ib = -1;
    double E_floor = std::numeric_limits<double>::max();
    for (size_t i = 0; i < xs.size(); ++i) {
        double v = safe_eval(veff, xs[i]);
        if (!std::isnan(v) && v < E_floor) {
            E_floor = v;
            ib = int(i);
        }
    }
    if (ib < 0)
        throw DomainError(
            "energy_at_action: potential not evaluable in the search window");
    if (ib > 0 && ib + 1 < int(xs.size())) {
        double xstar = golden_max([&](double x) { return -veff(x); },
                                  xs[ib - 1], xs[ib + 1]);
        double v = safe_eval(veff, xstar);
        if (!std::isnan(v)) E_floor = std::min(E_floor, v);
    }

    std::unique_ptr<RadialSolution> cache;
    double cacheE = std::numeric_limits<double>::quiet_NaN();
    auto solve = [&](double E) -> const RadialSolution& {
        if (!(E == cacheE)) {
            cache = std::make_unique<RadialSolution>(sys, E, L, opts);
            cacheE = E;
        }
        return *cache;
    };

    double E_lo = std::isfinite(opts.E_lo)
                      ? opts.E_lo
                      : E_floor + 1e-9 * std::max(1.0, std::abs(E_floor));
    double vinf = sys.potential.limit_at_infinity();
    double E_hi;
    if (std::isfinite(opts.E_hi)) {
        E_hi = opts.E_hi;
    } else if (std::isfinite(vinf)) {
        double escape = vinf + K0;
        E_hi = escape - 1e-9 * std::max(1.0, std::abs(escape));
        if (!(E_hi > E_lo))
            throw BracketError(
                "energy_at_action: empty energy range below escape");
    } else {
        // confining (or undetermined) tail: grow the energy until the action
        // passes the target, backing off when a probe leaves the bound regime
        double lo_ok = E_lo;
        double step = std::max(1.0, std::abs(E_floor));
        double cand = E_floor + step;
        bool found = false;
        E_hi = E_lo;
        for (int it = 0; it < 120 && !found; ++it) {
            try {
                if (solve(cand).geometry().action >= I_target) {
                    E_hi = cand;
                    found = true;
                } else {
                    lo_ok = cand;
                    step *= 4.0;
                    cand = E_floor + step;
                }
            } catch (const Error&) {
                cand = 0.5 * (lo_ok + cand);
                if (cand - lo_ok < 1e-12 * std::max(1.0, std::abs(lo_ok)))
                    throw BracketError(
                        "energy_at_action: could not bracket the requested "
                        "action");
            }
        }
        if (!found)
            throw BracketError(
                "energy_at_action: could not bracket the requested action");
        E_lo = std::max(E_lo, lo_ok);
    }

    double f_lo = solve(E_lo).geometry().action - I_target;
    if (f_lo > 0.0)
        throw BracketError(
            "energy_at_action: the action lies below the smallest bound orbit "
            "at this angular momentum");
    if (f_lo == 0.0) return E_lo;
    // Just below the escape energy the outer turning point can run past the
    // search range; retreat toward the floor until the orbit is resolvable.
    bool soft_hi = !std::isfinite(opts.E_hi) && std::isfinite(vinf);
    double f_hi = 0.0;
    for (bool have_hi = false; !have_hi;) {
        try {
            f_hi = solve(E_hi).geometry().action - I_target;
            have_hi = true;
        } catch (const Error&) {
            if (!soft_hi) throw;
            E_hi = E_lo + 0.5 * (E_hi - E_lo);
            if (E_hi - E_lo < 1e-12 * std::max(1.0, std::abs(E_lo)))
                throw BracketError(
                    "energy_at_action: could not bracket the requested action");
        }
    }
    if (f_hi < 0.0)
        throw BracketError(
            "energy_at_action: no bound orbit reaches the requested action");

    auto F = [&](double E) { return solve(E).geometry().action - I_target; };
    auto dF = [&](double E) { return solve(E).geometry().tau_r / (2.0 * kPi); };
    return newton_bracketed(F, dF, E_lo, E_hi, opts.newton_rel_tol);
}

}  // namespace genkin
