#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fracsheet/field.hpp"
#include "fracsheet/generators.hpp"
#include "fracsheet/rng.hpp"
#include "fracsheet/smoothing.hpp"

using namespace fracsheet;

TEST_CASE("build_prefix totals and additivity") {
    SUBCASE("constant field integrates to c * area") {
        const Grid2D g(1, 1, 9, 9);
        const FieldSample f(g, 2.5);
        const IntegralImage s = build_prefix(f);
        CHECK(s.rectangle(0, 0, 8, 8) == doctest::Approx(2.5).epsilon(1e-14));
    }
    SUBCASE("bilinear total converges to 1/4") {
        double prev_err = 1.0;
        for (int n : {9, 17, 33, 65}) {
            const Grid2D g(1, 1, n, n);
            const FieldSample f = sample_function(g, [](double a, double b) { return a * b; });
            const double total = build_prefix(f).rectangle(0, 0, n - 1, n - 1);
            const double err = std::abs(total - 0.25);
            CHECK(err < prev_err + 1e-15);
            prev_err = err;
        }
        CHECK(prev_err <= 1e-4);
    }
    SUBCASE("split additivity is exact") {
        const Grid2D g(1, 1, 9, 9);
        auto engine = make_engine(Seed{3, 3});
        std::uniform_int_distribution<int> dist(-(1 << 16), 1 << 16);
        FieldSample f(g);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j) f(i, j) = std::ldexp(double(dist(engine)), -8);
        const IntegralImage s = build_prefix(f);
        for (int a = 1; a < 8; ++a) {
            const double left = s.rectangle(0, 0, a, 6);
            const double right = s.rectangle(a, 0, 8, 6);
            const double whole = s.rectangle(0, 0, 8, 6);
            CHECK(left + right == whole);
        }
    }
    SUBCASE("rectangle reads equal direct quadrature") {
        const Grid2D g(1, 1, 65, 65);
        auto engine = make_engine(Seed{9, 0});
        std::uniform_real_distribution<double> pos(0.5, 1.5);
        FieldSample f(g);
        for (int i = 0; i < 65; ++i)
            for (int j = 0; j < 65; ++j) f(i, j) = pos(engine);
        const IntegralImage s = build_prefix(f);
        std::uniform_int_distribution<int> idx(0, 55);
        for (int k = 0; k < 50; ++k) {
            const int i0 = idx(engine), j0 = idx(engine);
            const int i1 = i0 + 4 + idx(engine) % 5, j1 = j0 + 4 + idx(engine) % 5;
            double direct = 0.0;
            const double cell = 0.25 * g.mesh1() * g.mesh2();
            for (int a = i0; a < i1; ++a)
                for (int b = j0; b < j1; ++b)
                    direct += cell * (f(a, b) + f(a + 1, b) + f(a, b + 1) + f(a + 1, b + 1));
            CHECK(std::abs(s.rectangle(i0, j0, i1, j1) - direct) <=
                  1e-12 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("smooth closed forms") {
    SUBCASE("constant field is a fixed point") {
        const Grid2D g(1, 1, 9, 9, 2, 2);
        const FieldSample f(g, -4.25);
        const FieldSample out = smooth(f, SmoothingParams(2));
        for (int i = 0; i < out.rows(); ++i)
            for (int j = 0; j < out.cols(); ++j) CHECK(out(i, j) == -4.25);
    }
    SUBCASE("bilinear field is smoothed exactly") {
        const Grid2D g(1, 1, 9, 9, 2, 2);
        const FieldSample f = sample_function(g, [](double a, double b) { return a * b; });
        const FieldSample out = smooth(f, SmoothingParams(2));  // eps = 0.25
        CHECK(out(4, 4) == doctest::Approx(0.390625).epsilon(1e-15));
        for (int i = 0; i < out.rows(); ++i)
            for (int j = 0; j < out.cols(); ++j) {
                const double t1 = g.x(i), t2 = g.y(j);
                CHECK(out(i, j) ==
                      doctest::Approx((t1 + 0.125) * (t2 + 0.125)).epsilon(1e-13));
            }
    }
    SUBCASE("quadratic field shows the trapezoid error scale") {
        const Grid2D g(1, 1, 129, 129, 32, 32);
        const FieldSample f = sample_function(g, [](double a, double b) { return a * a * b; });
        const FieldSample out = smooth(f, SmoothingParams(32));  // eps = 0.25
        const double eps = 0.25, t1 = 0.5, t2 = 0.5;
        const double want =
            (std::pow(t1 + eps, 3.0) - std::pow(t1, 3.0)) / (3.0 * eps) * (t2 + 0.5 * eps);
        // composite trapezoid error for f'' = 2 b is h^2/6 per unit
        const double h = g.mesh1();
        CHECK(std::abs(out(64, 64) - want) <= h * h / 6.0 + 1e-12);
    }
    SUBCASE("insufficient padding names the requirement") {
        const Grid2D g(1, 1, 9, 9, 1, 1);
        const FieldSample f(g, 0.0);
        CHECK_THROWS_WITH_AS(smooth(f, SmoothingParams(3)),
                             doctest::Contains("pad1 >= 3"), std::invalid_argument);
    }
}

TEST_CASE("smooth is linear and contracts the sup norm") {
    const Grid2D g(1, 1, 17, 17, 4, 4);
    const FieldSample a = sample_fbs(g, HurstPair(0.7, 0.6), Seed{31, 0});
    const FieldSample b = sample_fbs(g, HurstPair(0.6, 0.8), Seed{31, 1});
    FieldSample combo(g);
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) combo(i, j) = 2.0 * a(i, j) - 0.5 * b(i, j);
    const FieldSample sa = smooth(a, SmoothingParams(3));
    const FieldSample sb = smooth(b, SmoothingParams(3));
    const FieldSample sc = smooth(combo, SmoothingParams(3));
    double max_dev = 0.0, max_in = 0.0, max_out = 0.0;
    for (int i = 0; i < sc.rows(); ++i)
        for (int j = 0; j < sc.cols(); ++j) {
            max_dev = std::max(max_dev,
                               std::abs(sc(i, j) - (2.0 * sa(i, j) - 0.5 * sb(i, j))));
            max_out = std::max(max_out, std::abs(sa(i, j)));
        }
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) max_in = std::max(max_in, std::abs(a(i, j)));
    CHECK(max_dev <= 1e-12);
    CHECK(max_out <= max_in);
}

TEST_CASE("smoothing error decays linearly in eps for the bilinear field") {
    const Grid2D g(1, 1, 65, 65, 8, 8);
    const FieldSample f = sample_function(g, [](double a, double b) { return a * b; });
    const double h = g.mesh1();
    for (int k : {1, 2, 4, 8}) {
        const FieldSample out = smooth(f, SmoothingParams(k));
        const double eps = k * h;
        // d(t) = (eps/2)(t1 + t2) + eps^2/4 exactly
        for (int i : {0, 16, 48})
            for (int j : {8, 32, 64}) {
                const double t1 = g.x(i), t2 = g.y(j);
                const double want = 0.5 * eps * (t1 + t2) + 0.25 * eps * eps;
                CHECK(out(i, j) - f(i, j) == doctest::Approx(want).epsilon(1e-10));
            }
    }
}

TEST_CASE("difference_field forms and errors") {
    const Grid2D g(1, 1, 9, 9);
    const FieldSample f = sample_function(g, [](double a, double b) { return a + 2 * b; });
    SUBCASE("g - f and zero cases") {
        const FieldSample zero(g, 0.0);
        const FieldSample d1 = difference_field(f, f);
        for (double v : d1.values()) CHECK(v == 0.0);
        const FieldSample d2 = difference_field(zero, f);
        CHECK(d2.values() == f.values());
    }
    SUBCASE("restricts to the common region") {
        const Grid2D padded(1, 1, 9, 9, 3, 3);
        const FieldSample big = sample_function(padded, [](double a, double b) { return a * b; });
        const FieldSample small = sample_function(g, [](double, double) { return 1.0; });
        const FieldSample d = difference_field(big, small);
        CHECK(d.rows() == 9);
        CHECK(d.cols() == 9);
        CHECK(d(2, 2) == doctest::Approx(1.0 - big(2, 2)).epsilon(1e-15));
    }
    SUBCASE("mesh mismatch is rejected") {
        const Grid2D other(1, 1, 17, 9);
        const FieldSample f2(other, 0.0);
        CHECK_THROWS_AS(difference_field(f, f2), std::invalid_argument);
    }
}

TEST_CASE("smoothed fbs difference variance is stationary along the diagonal") {
    const Grid2D g(1, 1, 17, 17, 4, 4);
    const int R = 400;
    const int k = 4;
    std::array<double, 3> var{0, 0, 0};
    const std::array<int, 3> nodes{4, 8, 12};
    for (int r = 0; r < R; ++r) {
        const FieldSample f = sample_fbs(g, HurstPair(0.7, 0.7), Seed{71, (std::uint64_t)r});
        const FieldSample d = difference_field(f, smooth(f, SmoothingParams(k)));
        for (int m = 0; m < 3; ++m) var[m] += d(nodes[m], nodes[m]) * d(nodes[m], nodes[m]);
    }
    for (auto& v : var) v /= R;
    // each pair of diagonal variances within 5 relative standard errors
    const double se = std::sqrt(2.0 / R);
    for (int m = 1; m < 3; ++m)
        CHECK(std::abs(var[m] / var[0] - 1.0) <= 5.0 * (2.0 * se));
}
