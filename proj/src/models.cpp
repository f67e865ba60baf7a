#include "genkin/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genkin/errors.hpp"
#include "genkin/roots.hpp"

namespace genkin {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

// ---------------------------------------------------------------- kinetics --

KineticModel KineticModel::nonrelativistic(double m) {
    if (!(m > 0.0)) throw DomainError("nonrelativistic kernel needs mass > 0");
    KineticModel k;
    k.kind = KineticKind::nonrelativistic;
    k.mass = m;
    return k;
}

KineticModel KineticModel::relativistic(double m, bool subtract) {
    if (!(m > 0.0)) throw DomainError("relativistic kernel needs mass > 0");
    KineticModel k;
    k.kind = KineticKind::relativistic;
    k.mass = m;
    k.subtract_rest_mass = subtract;
    return k;
}

KineticModel KineticModel::power_law(double A, double beta) {
    if (!(A > 0.0) || !(beta > 0.0))
        throw DomainError("power-law kernel needs amplitude > 0 and exponent > 0");
    KineticModel k;
    k.kind = KineticKind::power_law;
    k.amplitude = A;
    k.exponent = beta;
    return k;
}

KineticModel KineticModel::custom(std::function<double(double)> K,
                                  std::function<double(double)> Kp,
                                  std::function<double(double)> Kinv,
                                  std::function<double(double)> Q) {
    if (!K || !Kp) throw DomainError("custom kernel needs K and K' callables");
    KineticModel k;
    k.kind = KineticKind::custom;
    k.K = std::move(K);
    k.Kp = std::move(Kp);
    k.Kinv = std::move(Kinv);
    k.Q = std::move(Q);
    return k;
}

double kinetic_eval(const KineticModel& k, double p2) {
    if (p2 < 0.0) throw DomainError("kinetic_eval: p^2 < 0");
    double T;
    switch (k.kind) {
        case KineticKind::nonrelativistic:
            T = p2 / (2.0 * k.mass);
            break;
        case KineticKind::relativistic:
            T = std::sqrt(p2 + k.mass * k.mass) - (k.subtract_rest_mass ? k.mass : 0.0);
            break;
        case KineticKind::power_law:
            T = k.amplitude * std::pow(p2, 0.5 * k.exponent);
            break;
        case KineticKind::custom:
            T = k.K(p2);
            break;
        default:
            T = kNaN;
    }
    if (!std::isfinite(T)) throw NumericalError("kinetic_eval: non-finite K(p^2)");
    return T;
}

double kinetic_prime(const KineticModel& k, double p2) {
    if (p2 < 0.0) throw DomainError("kinetic_prime: p^2 < 0");
    switch (k.kind) {
        case KineticKind::nonrelativistic:
            return 0.5 / k.mass;
        case KineticKind::relativistic:
            return 0.5 / std::sqrt(p2 + k.mass * k.mass);
        case KineticKind::power_law:
            // beta < 2 diverges at p2 = 0, beta > 2 vanishes there.
            return 0.5 * k.amplitude * k.exponent * std::pow(p2, 0.5 * k.exponent - 1.0);
        case KineticKind::custom:
            return k.Kp(p2);
    }
    return kNaN;
}

double kinetic_inverse(const KineticModel& k, double T) {
    double T0 = (k.kind == KineticKind::relativistic && !k.subtract_rest_mass)
                    ? k.mass
                    : (k.kind == KineticKind::custom ? kinetic_eval(k, 0.0) : 0.0);
    if (T < T0) throw DomainError("kinetic_inverse: T below K(0)");
    switch (k.kind) {
        case KineticKind::nonrelativistic:
            return 2.0 * k.mass * T;
        case KineticKind::relativistic: {
            double Ts = k.subtract_rest_mass ? T : T - k.mass;
            return Ts * (Ts + 2.0 * k.mass);
        }
        case KineticKind::power_law:
            return std::pow(T / k.amplitude, 2.0 / k.exponent);
        case KineticKind::custom: {
            if (k.Kinv) return k.Kinv(T);
            if (T == T0) return 0.0;
            auto f = [&](double x) { return k.K(x) - T; };
            auto br = grow_bracket(f, 0.0, std::max(1.0, std::abs(T)), 0.0, 1e300);
            return find_root(f, br.lo, br.hi, br.flo, br.fhi);
        }
    }
    return kNaN;
}

double squared_speed(const KineticModel& k, double x) {
    if (x < 0.0) throw DomainError("squared_speed: p^2 < 0");
    switch (k.kind) {
        case KineticKind::nonrelativistic:
            return x / (k.mass * k.mass);
        case KineticKind::relativistic:
            return x / (x + k.mass * k.mass);
        case KineticKind::power_law: {
            double ab = k.amplitude * k.exponent;
            return ab * ab * std::pow(x, k.exponent - 1.0);
        }
        case KineticKind::custom: {
            double kp = k.Kp(x);
            return 4.0 * x * kp * kp;
        }
    }
    return kNaN;
}

Vec kinetic_velocity(const KineticModel& k, const Vec& p) {
    double p2 = p.norm2();
    if (p2 == 0.0) return Vec::zero(p.dim());
    if (k.kind == KineticKind::power_law) {
        // |v| = A beta |p|^(beta-1), evaluated via the unit vector so small
        // momenta cannot overflow for beta < 2.
        double pn = std::sqrt(p2);
        double s = k.amplitude * k.exponent * std::pow(pn, k.exponent - 1.0) / pn;
        return s * p;
    }
    double kp = kinetic_prime(k, p2);
    if (!(kp > 0.0) || !std::isfinite(kp))
        throw AdmissibilityError("kinetic_velocity: K'(p^2) not positive");
    return (2.0 * kp) * p;
}

double kinetic_speed(const KineticModel& k, double p2) {
    if (p2 < 0.0) throw DomainError("kinetic_speed: p^2 < 0");
    if (k.kind == KineticKind::power_law)
        return k.amplitude * k.exponent * std::pow(p2, 0.5 * (k.exponent - 1.0));
    if (p2 == 0.0) return 0.0;
    return 2.0 * kinetic_prime(k, p2) * std::sqrt(p2);
}

Vec kinetic_momentum(const KineticModel& k, const Vec& v) {
    double y = v.norm2();
    if (y == 0.0) return Vec::zero(v.dim());
    double x;  // p^2 = Q(|v|^2)
    switch (k.kind) {
        case KineticKind::nonrelativistic:
            x = k.mass * k.mass * y;
            break;
        case KineticKind::relativistic:
            if (y >= 1.0)
                throw DomainError("kinetic_momentum: |v| >= 1 unreachable for relativistic kernel");
            x = k.mass * k.mass * y / (1.0 - y);
            break;
        case KineticKind::power_law: {
            double b = k.exponent;
            if (b == 1.0)
                throw NonInvertibleVelocityMap(
                    "kinetic_momentum: T = A|p| has constant speed; velocity map not invertible");
            double ab = k.amplitude * b;
            x = std::pow(y / (ab * ab), 1.0 / (b - 1.0));
            break;
        }
        case KineticKind::custom: {
            if (k.Q) {
                x = k.Q(y);
            } else {
                auto f = [&](double x_) { return squared_speed(k, x_) - y; };
                try {
                    auto br = grow_bracket(f, 1e-300, 1.0, 0.0, 1e300);
                    x = find_root(f, br.lo, br.hi, br.flo, br.fhi);
                } catch (const BracketError&) {
                    throw DomainError(
                        "kinetic_momentum: |v|^2 outside the squared-speed map's range");
                }
            }
            break;
        }
        default:
            x = kNaN;
    }
    if (!std::isfinite(x) || x < 0.0)
        throw NumericalError("kinetic_momentum: invalid Q(|v|^2)");
    // p = v / (2 K'(x)); for power-law kernels use the stable magnitude form.
    if (k.kind == KineticKind::power_law) {
        double pn = std::sqrt(x), vn = std::sqrt(y);
        return (pn / vn) * v;
    }
    double kp = kinetic_prime(k, x);
    if (!(kp > 0.0)) throw AdmissibilityError("kinetic_momentum: K' not positive");
    return (1.0 / (2.0 * kp)) * v;
}

KineticValidation validate_kinetic(const KineticModel& k, double x_max, int samples) {
    if (!(x_max > 0.0) || samples < 8)
        throw RangeError("validate_kinetic: need x_max > 0 and samples >= 8");
    KineticValidation rep;
    rep.min_kprime = kInf;

    double K0;
    try {
        K0 = kinetic_eval(k, 0.0);
        (void)K0;
    } catch (const Error& e) {
        rep.admissible = false;
        rep.findings.push_back(std::string("K(0) not finite: ") + e.what());
    }

    // log-spaced samples on (0, x_max]
    const double x_min = x_max * 1e-12;
    double prevK = -kInf, prevG = -kInf;
    bool k_increasing = true, g_increasing = true, kp_positive = true;
    for (int i = 0; i < samples; ++i) {
        double x = x_min * std::pow(x_max / x_min, double(i) / (samples - 1));
        double Kx, kp, g;
        try {
            Kx = kinetic_eval(k, x);
            kp = kinetic_prime(k, x);
            g = squared_speed(k, x);
        } catch (const Error& e) {
            rep.admissible = false;
            rep.findings.push_back("evaluation failed at x = " + std::to_string(x) +
                                   ": " + e.what());
            break;
        }
        if (!(kp > 0.0) || !std::isfinite(Kx)) kp_positive = false;
        if (std::isfinite(kp)) rep.min_kprime = std::min(rep.min_kprime, kp);
        if (Kx <= prevK) k_increasing = false;
        if (g <= prevG) g_increasing = false;
        prevK = Kx;
        prevG = g;
    }
    if (!kp_positive) {
        rep.admissible = false;
        rep.findings.push_back("K' not strictly positive on sampled x > 0");
    }
    if (!k_increasing) {
        rep.admissible = false;
        rep.findings.push_back("K not strictly increasing on sampled x > 0");
    }
    if (!g_increasing) {
        rep.velocity_map_invertible = false;
        rep.findings.push_back(
            "squared-speed map g(x) = 4x K'(x)^2 not strictly increasing; "
            "momentum-from-velocity is not well defined");
    }
    return rep;
}

// -------------------------------------------------------------- potentials --

PotentialTerm PotentialTerm::coulomb(double strength) {
    PotentialTerm t;
    t.kind = TermKind::coulomb;
    t.strength = strength;
    return t;
}
PotentialTerm PotentialTerm::harmonic(double stiffness) {
    PotentialTerm t;
    t.kind = TermKind::harmonic;
    t.stiffness = stiffness;
    return t;
}
PotentialTerm PotentialTerm::linear(double slope) {
    PotentialTerm t;
    t.kind = TermKind::linear;
    t.slope = slope;
    return t;
}
PotentialTerm PotentialTerm::power_law(double amplitude, double exponent) {
    PotentialTerm t;
    t.kind = TermKind::power_law;
    t.amplitude = amplitude;
    t.exponent = exponent;
    return t;
}
PotentialTerm PotentialTerm::custom(std::function<double(const Vec&)> V,
                                    std::function<Vec(const Vec&)> grad,
                                    bool central, std::vector<double> kinks) {
    if (!V) throw DomainError("custom potential term needs a callable");
    PotentialTerm t;
    t.kind = TermKind::custom;
    t.V = std::move(V);
    t.grad = std::move(grad);
    t.custom_central = central;
    t.custom_kinks = std::move(kinks);
    return t;
}

namespace {

double term_eval(const PotentialTerm& t, const Vec& r) {
    double rn = r.norm();
    switch (t.kind) {
        case TermKind::coulomb:
            if (rn == 0.0) throw DomainError("coulomb term undefined at r = 0");
            return -t.strength / rn;
        case TermKind::harmonic:
            return 0.5 * t.stiffness * rn * rn;
        case TermKind::linear:
            return t.slope * rn;
        case TermKind::power_law:
            if (rn == 0.0 && t.exponent < 0.0)
                throw DomainError("power-law term undefined at r = 0");
            return t.amplitude * std::pow(rn, t.exponent);
        case TermKind::custom:
            return t.custom_scale * t.V(r);
    }
    return kNaN;
}

Vec custom_grad_fd(const PotentialTerm& t, const Vec& r) {
    // central differences, h = max(1e-6, 1e-6 |r|)
    double h = std::max(1e-6, 1e-6 * r.norm());
    Vec g = Vec::zero(r.dim());
    for (int i = 0; i < r.dim(); ++i) {
        Vec rp = r, rm = r;
        rp[i] += h;
        rm[i] -= h;
        g[i] = t.custom_scale * (t.V(rp) - t.V(rm)) / (2.0 * h);
    }
    return g;
}

Vec term_gradient(const PotentialTerm& t, const Vec& r) {
    double rn = r.norm();
    switch (t.kind) {
        case TermKind::coulomb:
            if (rn == 0.0) throw DomainError("coulomb gradient undefined at r = 0");
            return (t.strength / (rn * rn * rn)) * r;
        case TermKind::harmonic:
            return t.stiffness * r;
        case TermKind::linear:
            if (rn == 0.0) throw DomainError("linear gradient undefined at r = 0");
            return (t.slope / rn) * r;
        case TermKind::power_law: {
            if (rn == 0.0) {
                if (t.exponent >= 2.0) return Vec::zero(r.dim());
                throw DomainError("power-law gradient undefined at r = 0");
            }
            return (t.amplitude * t.exponent * std::pow(rn, t.exponent - 2.0)) * r;
        }
        case TermKind::custom:
            if (t.grad) {
                Vec g = t.grad(r);
                return t.custom_scale * g;
            }
            return custom_grad_fd(t, r);
    }
    return Vec::zero(r.dim());
}

}  // namespace

bool PotentialModel::central() const {
    for (const auto& t : terms)
        if (t.kind == TermKind::custom && !t.custom_central) return false;
    return true;
}

bool PotentialModel::singular_at_origin() const {
    for (const auto& t : terms) {
        if (t.kind == TermKind::coulomb) return true;
        if (t.kind == TermKind::power_law && t.exponent < 0.0) return true;
    }
    return false;
}

double PotentialModel::limit_at_infinity() const {
    // The largest growth exponent with a nonzero net coefficient decides;
    // terms that decay contribute nothing, constants accumulate.
    std::vector<std::pair<double, double>> grow;  // (exponent, coefficient)
    auto add = [&](double e, double c) {
        for (auto& g : grow)
            if (g.first == e) {
                g.second += c;
                return;
            }
        grow.push_back({e, c});
    };
    double lim = 0.0;
    for (const auto& t : terms) {
        switch (t.kind) {
            case TermKind::coulomb:
                break;  // -> 0
            case TermKind::harmonic:
                add(2.0, 0.5 * t.stiffness);
                break;
            case TermKind::linear:
                add(1.0, t.slope);
                break;
            case TermKind::power_law:
                if (t.exponent > 0.0) add(t.exponent, t.amplitude);
                if (t.exponent == 0.0) lim += t.amplitude;
                break;  // negative exponent -> 0
            case TermKind::custom:
                return kNaN;  // undetermined
        }
    }
    std::sort(grow.begin(), grow.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& g : grow) {
        if (g.second > 0.0) return kInf;
        if (g.second < 0.0) return -kInf;
    }
    return lim;
}

std::vector<double> PotentialModel::kinks_1d() const {
    std::vector<double> ks;
    auto add = [&](double x) {
        for (double k : ks)
            if (k == x) return;
        ks.push_back(x);
    };
    for (const auto& t : terms) {
        switch (t.kind) {
            case TermKind::linear:
                add(0.0);
                break;
            case TermKind::power_law: {
                double a = t.exponent;
                bool even = a == std::round(a) && std::fmod(std::round(a), 2.0) == 0.0;
                if (!even) add(0.0);  // |x|^a not smooth at 0
                break;
            }
            case TermKind::coulomb:
                add(0.0);
                break;
            case TermKind::custom:
                for (double k : t.custom_kinks) add(k);
                break;
            default:
                break;
        }
    }
    std::sort(ks.begin(), ks.end());
    return ks;
}

double potential_eval(const PotentialModel& v, const Vec& r) {
    double s = 0.0;
    for (const auto& t : v.terms) s += term_eval(t, r);
    if (!std::isfinite(s)) throw NumericalError("potential_eval: non-finite V(r)");
    return s;
}

Vec potential_gradient(const PotentialModel& v, const Vec& r) {
    Vec g = Vec::zero(r.dim());
    for (const auto& t : v.terms) g += term_gradient(t, r);
    if (!g.finite()) throw NumericalError("potential_gradient: non-finite gradient");
    return g;
}

Vec potential_force(const PotentialModel& v, const Vec& r) {
    return -1.0 * potential_gradient(v, r);
}

double potential_r_dot_grad(const PotentialModel& v, const Vec& r) {
    // Exact Euler relation per built-in term: r . grad(B r^a) = a * term.
    double s = 0.0;
    for (const auto& t : v.terms) {
        switch (t.kind) {
            case TermKind::coulomb:
                s += -term_eval(t, r);
                break;
            case TermKind::harmonic:
                s += 2.0 * term_eval(t, r);
                break;
            case TermKind::linear:
                s += term_eval(t, r);
                break;
            case TermKind::power_law:
                s += t.exponent * term_eval(t, r);
                break;
            case TermKind::custom:
                s += dot(r, term_gradient(t, r));
                break;
        }
    }
    return s;
}

// ------------------------------------------------------------------ system --

double SystemSpec::hamiltonian(const PhaseState& s) const {
    if (s.r.dim() != dimension || s.p.dim() != dimension)
        throw DimensionError("hamiltonian: state dimension mismatch");
    return kinetic_eval(kinetic, s.p.norm2()) + potential_eval(potential, s.r);
}

VirialTerms virial_terms(const SystemSpec& sys, const PhaseState& s) {
    double p2 = s.p.norm2();
    double kin;
    if (p2 == 0.0) {
        // limit of 2 p^2 K'(p^2): beta K(p^2)/ ... -> 0 for every admissible kernel
        kin = 0.0;
    } else {
        kin = 2.0 * p2 * kinetic_prime(sys.kinetic, p2);
    }
    return {kin, potential_r_dot_grad(sys.potential, s.r)};
}

// ---------------------------------------------------------------- bindings --

namespace {

struct FieldRef {
    double* field;
    std::function<double(const SystemSpec&, const PhaseState&)> dH;
};

// Locate the addressed scalar inside `sys` (which must outlive the result)
// and build the matching analytic dH/dlambda when one exists.
FieldRef locate(SystemSpec& sys, const std::string& target) {
    auto bad = [&](const std::string& why) {
        throw ConfigError("binding target '" + target + "': " + why);
    };
    if (target.rfind("kinetic.", 0) == 0) {
        std::string f = target.substr(8);
        auto& k = sys.kinetic;
        if (f == "mass") {
            if (k.kind == KineticKind::nonrelativistic)
                return {&k.mass, [](const SystemSpec& s, const PhaseState& st) {
                            double m = s.kinetic.mass;
                            return -st.p.norm2() / (2.0 * m * m);
                        }};
            if (k.kind == KineticKind::relativistic)
                return {&k.mass, [](const SystemSpec& s, const PhaseState& st) {
                            double m = s.kinetic.mass;
                            double e = m / std::sqrt(st.p.norm2() + m * m);
                            return s.kinetic.subtract_rest_mass ? e - 1.0 : e;
                        }};
            bad("kernel has no mass parameter");
        }
        if (f == "amplitude") {
            if (k.kind != KineticKind::power_law) bad("kernel has no amplitude");
            return {&k.amplitude, [](const SystemSpec& s, const PhaseState& st) {
                        return std::pow(st.p.norm2(), 0.5 * s.kinetic.exponent);
                    }};
        }
        if (f == "exponent") {
            if (k.kind != KineticKind::power_law) bad("kernel has no exponent");
            return {&k.exponent, [](const SystemSpec& s, const PhaseState& st) {
                        double p2 = st.p.norm2();
                        if (p2 <= 0.0) return 0.0;
                        return kinetic_eval(s.kinetic, p2) * 0.5 * std::log(p2);
                    }};
        }
        bad("unknown kinetic field (expected mass, amplitude or exponent)");
    }
    if (target.rfind("potential.terms[", 0) == 0) {
        auto close = target.find(']');
        if (close == std::string::npos) bad("missing ']'");
        int idx = -1;
        try {
            idx = std::stoi(target.substr(16, close - 16));
        } catch (...) {
            bad("bad term index");
        }
        if (idx < 0 || idx >= int(sys.potential.terms.size()))
            bad("term index out of range");
        if (close + 1 >= target.size() || target[close + 1] != '.')
            bad("expected '.' after term index");
        std::string f = target.substr(close + 2);
        auto& t = sys.potential.terms[idx];
        auto term_value = [idx](const SystemSpec& s, const PhaseState& st) {
            return term_eval(s.potential.terms[idx], st.r);
        };
        switch (t.kind) {
            case TermKind::coulomb:
                if (f == "strength")
                    return {&t.strength, [idx](const SystemSpec& s, const PhaseState& st) {
                                return term_eval(s.potential.terms[idx], st.r) /
                                       s.potential.terms[idx].strength;
                            }};
                bad("coulomb term exposes 'strength'");
                break;
            case TermKind::harmonic:
                if (f == "stiffness")
                    return {&t.stiffness, [idx](const SystemSpec& s, const PhaseState& st) {
                                return term_eval(s.potential.terms[idx], st.r) /
                                       s.potential.terms[idx].stiffness;
                            }};
                bad("harmonic term exposes 'stiffness'");
                break;
            case TermKind::linear:
                if (f == "slope")
                    return {&t.slope, [](const SystemSpec&, const PhaseState& st) {
                                return st.r.norm();
                            }};
                bad("linear term exposes 'slope'");
                break;
            case TermKind::power_law:
                if (f == "amplitude")
                    return {&t.amplitude, [idx](const SystemSpec& s, const PhaseState& st) {
                                return std::pow(st.r.norm(),
                                                s.potential.terms[idx].exponent);
                            }};
                if (f == "exponent")
                    return {&t.exponent, [idx, term_value](const SystemSpec& s,
                                                           const PhaseState& st) {
                                double rn = st.r.norm();
                                if (rn <= 0.0) return 0.0;
                                return term_value(s, st) * std::log(rn);
                            }};
                bad("power-law term exposes 'amplitude' and 'exponent'");
                break;
            case TermKind::custom:
                if (f == "scale")
                    return {&t.custom_scale,
                            [idx](const SystemSpec& s, const PhaseState& st) {
                                return term_eval(s.potential.terms[idx], st.r) /
                                       s.potential.terms[idx].custom_scale;
                            }};
                bad("custom term exposes 'scale'");
                break;
        }
        bad("unknown term field");
    }
    bad("unrecognized path (expected kinetic.* or potential.terms[i].*)");
    return {nullptr, nullptr};  // unreachable
}

}  // namespace

ResolvedBinding resolve_binding(const SystemSpec& sys, const std::string& target) {
    SystemSpec probe = sys;  // locate() validates against a copy
    FieldRef ref = locate(probe, target);
    ResolvedBinding rb;
    rb.target = target;
    rb.value = *ref.field;
    rb.dH_dlambda = ref.dH;
    rb.rebind = [sys, target](double v) {
        SystemSpec out = sys;
        *locate(out, target).field = v;
        return out;
    };
    return rb;
}

// ---------------------------------------------------------------- mixtures --

KineticModel mix_kinetics(const KineticModel& a, const KineticModel& b, double mu) {
    if (mu == 0.0) return a;
    if (mu == 1.0) return b;
    auto K = [a, b, mu](double x) {
        return (1.0 - mu) * kinetic_eval(a, x) + mu * kinetic_eval(b, x);
    };
    auto Kp = [a, b, mu](double x) {
        return (1.0 - mu) * kinetic_prime(a, x) + mu * kinetic_prime(b, x);
    };
    return KineticModel::custom(K, Kp);
}

PotentialModel mix_potentials(const PotentialModel& a, const PotentialModel& b,
                              double mu) {
    if (mu == 0.0) return a;
    if (mu == 1.0) return b;
    PotentialModel out;
    auto push_scaled = [&out](const PotentialTerm& t, double c) {
        PotentialTerm s = t;
        switch (t.kind) {
            case TermKind::coulomb: s.strength *= c; break;
            case TermKind::harmonic: s.stiffness *= c; break;
            case TermKind::linear: s.slope *= c; break;
            case TermKind::power_law: s.amplitude *= c; break;
            case TermKind::custom: s.custom_scale *= c; break;
        }
        out.terms.push_back(std::move(s));
    };
    for (const auto& t : a.terms) push_scaled(t, 1.0 - mu);
    for (const auto& t : b.terms) push_scaled(t, mu);
    return out;
}

KineticModel scale_kinetic(const KineticModel& k, double c) {
    if (!(c > 0.0)) throw DomainError("scale_kinetic: factor must be positive");
    auto K = [k, c](double x) { return c * kinetic_eval(k, x); };
    auto Kp = [k, c](double x) { return c * kinetic_prime(k, x); };
    auto Kinv = [k, c](double T) { return kinetic_inverse(k, T / c); };
    return KineticModel::custom(K, Kp, Kinv);
}

PotentialModel scale_potential(const PotentialModel& v, double c) {
    PotentialModel out = v;
    for (auto& t : out.terms) {
        switch (t.kind) {
            case TermKind::coulomb: t.strength *= c; break;
            case TermKind::harmonic: t.stiffness *= c; break;
            case TermKind::linear: t.slope *= c; break;
            case TermKind::power_law: t.amplitude *= c; break;
            case TermKind::custom: t.custom_scale *= c; break;
        }
    }
    return out;
}

}  // namespace genkin
