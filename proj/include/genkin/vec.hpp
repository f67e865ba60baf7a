#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

#include "genkin/errors.hpp"

namespace genkin {

// Small fixed-capacity vector for D = 1..3 phase-space components.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int n = 0;

    Vec() = default;
    Vec(std::initializer_list<double> xs) {
        n = 0;
        for (double x : xs) {
            if (n >= 3) throw DimensionError("Vec supports at most 3 components");
            c[n++] = x;
        }
    }
    static Vec zero(int dim) {
        Vec v;
        v.n = dim;
        return v;
    }

    int dim() const { return n; }
    double operator[](int i) const { return c[i]; }
    double& operator[](int i) { return c[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n; ++i) c[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }

    friend double dot(const Vec& a, const Vec& b) {
        double s = 0.0;
        for (int i = 0; i < a.n; ++i) s += a.c[i] * b.c[i];
        return s;
    }
    double norm2() const { return dot(*this, *this); }
    double norm() const { return std::sqrt(norm2()); }

    // 3-vector cross product; 1- and 2-D inputs are embedded in the plane.
    friend Vec cross(const Vec& a, const Vec& b) {
        auto ax = a.c[0], ay = a.n > 1 ? a.c[1] : 0.0, az = a.n > 2 ? a.c[2] : 0.0;
        auto bx = b.c[0], by = b.n > 1 ? b.c[1] : 0.0, bz = b.n > 2 ? b.c[2] : 0.0;
        Vec r{ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx};
        return r;
    }

    bool finite() const {
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(c[i])) return false;
        return true;
    }
};

struct PhaseState {
    double t = 0.0;
    Vec r, p;
};

}  // namespace genkin
