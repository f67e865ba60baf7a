#pragma once

#include <functional>

namespace genkin {

using Fn1 = std::function<double(double)>;

struct RootOptions {
    double rel_tol = 1e-14;   // on the abscissa
    double abs_tol = 0.0;
    int max_iter = 200;
};

// Bracketed root of f on [a, b] (f(a), f(b) of opposite sign): secant /
// inverse-quadratic steps safeguarded by bisection. Throws BracketError when
// the bracket does not straddle a sign change, NumericalError on iteration
// exhaustion.
double find_root(const Fn1& f, double a, double b, const RootOptions& opts = {});
double find_root(const Fn1& f, double a, double b, double fa, double fb,
                 const RootOptions& opts = {});

// Geometric bracket growth for an increasing-then-whatever f: expands [lo, hi]
// from a seed until f changes sign or the limits are hit.
struct BracketResult {
    double lo, hi, flo, fhi;
};
BracketResult grow_bracket(const Fn1& f, double lo, double hi, double lo_limit,
                           double hi_limit, int max_steps = 200);

// Newton iteration with derivative `df`, safeguarded by a maintained sign
// bracket [a, b] (falls back to bisection when a step leaves the bracket or
// stalls). Converges on |step| <= rel_tol * scale.
double newton_bracketed(const Fn1& f, const Fn1& df, double a, double b,
                        double rel_tol = 1e-12, int max_iter = 100);

}  // namespace genkin
