#include <cmath>
#include <random>

#include "doctest.h"
#include "genkin/errors.hpp"
#include "genkin/quadrature.hpp"
#include "genkin/roots.hpp"

using namespace genkin;

TEST_CASE("find_root solves cos x = 0 to near machine precision") {
    double r = find_root([](double x) { return std::cos(x); }, 1.0, 2.0);
    CHECK(r == doctest::Approx(1.5707963267948966).epsilon(1e-14));
}

TEST_CASE("find_root honours a tight relative tolerance") {
    RootOptions ro;
    ro.rel_tol = 4e-16;
    double r = find_root([](double x) { return x * x * x - 2.0; }, 1.0, 2.0, ro);
    CHECK(std::abs(r - std::cbrt(2.0)) <= 4.0 * 4e-16 * std::cbrt(2.0));
}

TEST_CASE("find_root rejects a bracket without a sign change") {
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                    BracketError);
}

TEST_CASE("find_root accepts an endpoint that is already a root") {
    double r = find_root([](double x) { return x - 1.0; }, 1.0, 2.0);
    CHECK(r == 1.0);
}

TEST_CASE("grow_bracket expands until the function changes sign") {
    auto f = [](double x) { return x - 10.0; };
    BracketResult br = grow_bracket(f, 0.0, 1.0, -1e6, 1e6);
    CHECK(br.flo * br.fhi <= 0.0);
    CHECK(br.lo <= 10.0);
    CHECK(br.hi >= 10.0);
}

TEST_CASE("grow_bracket gives up at the domain limits") {
    CHECK_THROWS_AS(grow_bracket([](double x) { return x + 20.0; }, 0.0, 1.0, -4.0, 4.0),
                    BracketError);
}

TEST_CASE("newton_bracketed converges with the exact derivative") {
    auto f = [](double x) { return x * x - 2.0; };
    auto df = [](double x) { return 2.0 * x; };
    double r = newton_bracketed(f, df, 0.0, 2.0);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("newton_bracketed still converges with a badly scaled derivative") {
    auto f = [](double x) { return x * x - 2.0; };
    auto df = [](double x) { return 0.25 * 2.0 * x; };  // 4x too small
    double r = newton_bracketed(f, df, 0.0, 2.0);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("tanh-sinh integrates endpoint singularities to machine precision") {
    // int_0^1 x^{-1/2} dx = 2, using the cancellation-free endpoint distance
    QuadResult v = tanh_sinh(
        [](double x, double s_near, int side) {
            return 1.0 / std::sqrt(side < 0 ? s_near : x);
        },
        0.0, 1.0);
    CHECK(v.value == doctest::Approx(2.0).epsilon(1e-13));

    // int_0^1 log(1/x) dx = 1
    QuadResult w = tanh_sinh(
        [](double x, double s_near, int side) {
            return -std::log(side < 0 ? s_near : x);
        },
        0.0, 1.0);
    CHECK(w.value == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("tanh-sinh integrates smooth functions and reports small errors") {
    QuadResult v = tanh_sinh([](double x, double, int) { return std::sin(x); },
                             0.0, 3.14159265358979323846);
    CHECK(v.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(v.error <= 1e-10);
}

TEST_CASE("tanh_sinh_many shares one node set across integrands") {
    auto rs = tanh_sinh_many(
        [](const TanhSinhNode& nd, std::vector<double>& out) {
            out[0] = nd.x;
            out[1] = nd.x * nd.x;
        },
        2, 0.0, 1.0);
    CHECK(rs[0].value == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rs[1].value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("tanh_sinh_level node sets accumulate to the full integral") {
    // value through level L = 0.5^{L+1} * sum over levels 0..L of w_i f(x_i)
    const int L = 8;
    double acc = 0.0;
    for (int lev = 0; lev <= L; ++lev)
        for (const auto& nd : tanh_sinh_level(lev, 0.0, 2.0))
            acc += nd.weight * nd.x * nd.x;
    CHECK(std::ldexp(acc, -(L + 1)) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("gauss_adaptive matches closed forms") {
    QuadResult q = gauss_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(q.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(q.error <= 1e-10);
}

TEST_CASE("gauss_adaptive honours an absolute error floor") {
    auto f = [](double x) { return std::exp(3.0 * x); };
    QuadResult tight = gauss_adaptive(f, 0.0, 2.0, 1e-13);
    QuadResult loose = gauss_adaptive(f, 0.0, 2.0, 1e-13, 1.0);
    CHECK(loose.levels <= tight.levels);
    CHECK(loose.value == doctest::Approx(tight.value).epsilon(1e-2));
    CHECK(tight.value ==
          doctest::Approx((std::exp(6.0) - 1.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("gauss_adaptive integrates random polynomials exactly") {
    std::mt19937_64 rng(20240915);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int rep = 0; rep < 25; ++rep) {
        double c[6];
        for (double& x : c) x = coef(rng);
        auto f = [&](double x) {
            double acc = 0.0;
            for (int k = 5; k >= 0; --k) acc = acc * x + c[k];
            return acc;
        };
        double exact = 0.0;
        for (int k = 0; k <= 5; ++k)
            exact += c[k] * (std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
        QuadResult q = gauss_adaptive(f, -1.0, 2.0);
        CHECK(q.value == doctest::Approx(exact).epsilon(1e-12));
    }
}
