#include "genkin/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genkin/errors.hpp"

namespace genkin {

double find_root(const Fn1& f, double a, double b, const RootOptions& opts) {
    return find_root(f, a, b, f(a), f(b), opts);
}

// Brent-style: keep (a, fa) and (b, fb) straddling the root with |fb| <= |fa|,
// prefer interpolation, force bisection when progress stalls.
double find_root(const Fn1& f, double a, double b, double fa, double fb,
                 const RootOptions& opts) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) == std::signbit(fb))
        throw BracketError("find_root: no sign change on bracket");

    double c = a, fc = fa;  // previous iterate
    double d = b - a, e = d;
    for (int it = 0; it < opts.max_iter; ++it) {
        if (std::signbit(fb) == std::signbit(fc)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol = 2.0 * opts.rel_tol * std::abs(b) + 0.5 * opts.abs_tol +
                     4.0 * std::numeric_limits<double>::epsilon();
        double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;

        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = e = m;  // bisection
        } else {
            double p, q;
            double s = fb / fa;
            if (a == c) {  // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {  // inverse quadratic
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = e = m;
            }
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
        fb = f(b);
        if (fb == 0.0) return b;
    }
    throw NumericalError("find_root: max iterations exceeded");
}

BracketResult grow_bracket(const Fn1& f, double lo, double hi, double lo_limit,
                           double hi_limit, int max_steps) {
    double flo = f(lo), fhi = f(hi);
    for (int i = 0; i < max_steps; ++i) {
        if (std::signbit(flo) != std::signbit(fhi) || flo == 0.0 || fhi == 0.0)
            return {lo, hi, flo, fhi};
        bool grew = false;
        if (hi < hi_limit) {
            hi = std::min(hi_limit, hi * 2.0 + 1e-300);
            fhi = f(hi);
            grew = true;
        }
        if (std::signbit(flo) != std::signbit(fhi)) return {lo, hi, flo, fhi};
        if (lo > lo_limit) {
            lo = std::max(lo_limit, lo * 0.5);
            flo = f(lo);
            grew = true;
        }
        if (!grew) break;
    }
    throw BracketError("grow_bracket: no sign change within limits");
}

double newton_bracketed(const Fn1& f, const Fn1& df, double a, double b,
                        double rel_tol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) == std::signbit(fb))
        throw BracketError("newton_bracketed: no sign change on bracket");
    double x = 0.5 * (a + b), fx = f(x);
    for (int it = 0; it < max_iter; ++it) {
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        if (std::abs(b - a) <= rel_tol * scale) return 0.5 * (a + b);

        double dfx = df(x);
        double step = (dfx != 0.0 && std::isfinite(dfx)) ? -fx / dfx : 0.0;
        double xn = x + step;
        if (step == 0.0 || xn <= a || xn >= b)  // leave bracket -> bisect
            xn = 0.5 * (a + b);
        if (std::abs(xn - x) <= rel_tol * scale) return xn;
        x = xn;
        fx = f(x);
    }
    throw NumericalError("newton_bracketed: max iterations exceeded");
}

}  // namespace genkin
