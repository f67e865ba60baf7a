#include "genkin/quadrature.hpp"

#include <cmath>

#include "genkin/errors.hpp"

namespace genkin {
namespace {

constexpr double kPi = 3.14159265358979323846;

TanhSinhNode make_node(double t, double a, double b) {
    double hw = 0.5 * (b - a);
    double u = 0.5 * kPi * std::sinh(t);
    double e2 = std::exp(-2.0 * std::abs(u));
    double s = (b - a) * e2 / (1.0 + e2);  // distance to nearer endpoint
    double w = hw * 0.5 * kPi * std::cosh(t) * 4.0 * e2 / ((1.0 + e2) * (1.0 + e2));
    int side = t >= 0.0 ? +1 : -1;
    double x = side > 0 ? b - s : a + s;
    return {x, s, w, side};
}

}  // namespace

std::vector<TanhSinhNode> tanh_sinh_level(int level, double a, double b,
                                          double t_max) {
    std::vector<TanhSinhNode> out;
    double h = std::ldexp(0.5, -level);
    if (level == 0) {
        for (double t = -t_max; t <= t_max + 1e-12; t += h)
            out.push_back(make_node(t, a, b));
    } else {
        for (double t = -t_max + h; t < t_max; t += 2.0 * h)
            out.push_back(make_node(t, a, b));
    }
    return out;
}

std::vector<QuadResult> tanh_sinh_many(
    const std::function<void(const TanhSinhNode&, std::vector<double>&)>& eval,
    int n_integrands, double a, double b, const TanhSinhOptions& opts) {
    std::vector<double> sums(n_integrands, 0.0), prev(n_integrands, 0.0);
    std::vector<double> vals(n_integrands, 0.0);
    std::vector<QuadResult> out(n_integrands);

    auto accumulate = [&](double t, double h_weight) {
        TanhSinhNode nd = make_node(t, a, b);
        eval(nd, vals);
        for (int i = 0; i < n_integrands; ++i) {
            double c = nd.weight * vals[i];
            if (std::isfinite(c)) sums[i] += h_weight * c;
        }
    };

    double h = 0.5;
    for (double t = -opts.t_max; t <= opts.t_max + 1e-12; t += h)
        accumulate(t, h);
    prev = sums;

    int level = 1;
    for (; level <= opts.max_level; ++level) {
        h *= 0.5;
        for (int i = 0; i < n_integrands; ++i) sums[i] = 0.5 * prev[i];
        for (double t = -opts.t_max + h; t < opts.t_max; t += 2.0 * h)
            accumulate(t, h);
        bool done = true;
        for (int i = 0; i < n_integrands; ++i) {
            out[i].error = std::abs(sums[i] - prev[i]);
            if (out[i].error > opts.rel_tol * (std::abs(sums[i]) + opts.abs_floor))
                done = false;
        }
        prev = sums;
        if (done) break;
    }
    for (int i = 0; i < n_integrands; ++i) {
        out[i].value = sums[i];
        out[i].levels = level;
        if (!std::isfinite(out[i].value))
            throw NumericalError("tanh_sinh: non-finite integral");
    }
    return out;
}

QuadResult tanh_sinh(const EndpointFn& f, double a, double b,
                     const TanhSinhOptions& opts) {
    auto eval = [&](const TanhSinhNode& nd, std::vector<double>& v) {
        v[0] = f(nd.x, nd.s_near, nd.side);
    };
    return tanh_sinh_many(eval, 1, a, b, opts)[0];
}

namespace {

const double kGx[4] = {0.0, 0.4058451513773971669066064,
                       0.7415311855993944398638648,
                       0.9491079123427585245261897};
const double kGw[4] = {0.4179591836734693877551020,
                       0.3818300505051189449503698,
                       0.2797053914892766679014678,
                       0.1294849661688696932706114};

double gauss7(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = kGw[0] * f(c);
    for (int i = 1; i < 4; ++i)
        s += kGw[i] * (f(c - hw * kGx[i]) + f(c + hw * kGx[i]));
    return s * hw;
}

void gauss_rec(const std::function<double(double)>& f, double a, double b,
               double whole, double rel_tol, double abs_tol, int depth,
               int max_depth, QuadResult& acc) {
    double m = 0.5 * (a + b);
    double left = gauss7(f, a, m), right = gauss7(f, m, b);
    double diff = std::abs(left + right - whole);
    if (depth >= max_depth || diff <= rel_tol * std::abs(left + right) ||
        diff <= abs_tol || diff < 1e-300) {
        acc.value += left + right;
        acc.error += diff;
        acc.levels = std::max(acc.levels, depth);
        return;
    }
    // split the absolute budget with the interval
    gauss_rec(f, a, m, left, rel_tol, 0.5 * abs_tol, depth + 1, max_depth, acc);
    gauss_rec(f, m, b, right, rel_tol, 0.5 * abs_tol, depth + 1, max_depth, acc);
}

}  // namespace

QuadResult gauss_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol,
                          int max_depth) {
    QuadResult acc;
    if (a == b) return acc;
    gauss_rec(f, a, b, gauss7(f, a, b), rel_tol, abs_tol, 0, max_depth, acc);
    return acc;
}

}  // namespace genkin
