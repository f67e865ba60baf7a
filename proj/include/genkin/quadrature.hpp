#pragma once

#include <functional>
#include <vector>

namespace genkin {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // difference between the last two refinements
    int levels = 0;
};

// Integrand for endpoint-singular integrals: receives the abscissa, the exact
// distance to the nearer endpoint (computed without cancellation), and which
// end is nearer (-1 = lower, +1 = upper).
using EndpointFn = std::function<double(double x, double s_near, int side)>;

struct TanhSinhOptions {
    double rel_tol = 1e-13;
    double abs_floor = 0.0;   // treat |value| below this as zero for rel test
    int max_level = 12;
    double t_max = 4.0;       // truncation of the double-exponential variable
};

// Tanh-sinh (double-exponential) quadrature on [a, b]. Handles integrable
// algebraic endpoint singularities with exponential convergence. Nodes are
// generated from their distance to the endpoints so integrands can stay
// accurate arbitrarily close to a singular end.
QuadResult tanh_sinh(const EndpointFn& f, double a, double b,
                     const TanhSinhOptions& opts = {});

// Same node set applied to several integrands at once; shared per-node state
// can be computed in `prepare` and reused by each integrand.
struct TanhSinhNode {
    double x, s_near, weight;
    int side;
};
std::vector<QuadResult> tanh_sinh_many(
    const std::function<void(const TanhSinhNode&, std::vector<double>&)>& eval,
    int n_integrands, double a, double b, const TanhSinhOptions& opts = {});

// Nodes introduced at a given refinement level (level 0 is the initial coarse
// sweep). Levels nest: the trapezoid value through level L is
// 0.5^(L+1) * sum over levels 0..L of weight * f. Exposed so callers that
// need the node set itself (e.g. for reusing a converged grid) can drive the
// accumulation themselves.
std::vector<TanhSinhNode> tanh_sinh_level(int level, double a, double b,
                                          double t_max = 4.0);

// Adaptive Gauss-Legendre (7-point, bisection refinement) for smooth
// integrands on [a, b]; used for time averages over dense trajectory output.
// `abs_tol` is an absolute error floor for the whole interval: without it a
// purely relative test grinds to max_depth wherever the integrand passes
// through zero, even though those stretches contribute nothing.
QuadResult gauss_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-12, double abs_tol = 0.0,
                          int max_depth = 30);

}  // namespace genkin
