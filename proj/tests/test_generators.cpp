#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "fracsheet/generators.hpp"
#include "fracsheet/kernel.hpp"
#include "fracsheet/rng.hpp"

using namespace fracsheet;

TEST_CASE("fbm_covariance closed forms") {
    CHECK(fbm_covariance(1.0, 2.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(0.3, 0.2, 0.5) == doctest::Approx(0.2).epsilon(1e-12));
    for (double H : {0.3, 0.5, 0.8})
        CHECK(fbm_covariance(1.0, 1.0, H) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(2.0, 1.0, 0.75) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("fbs_covariance closed forms") {
    const HurstPair H(0.6, 0.7);
    CHECK(fbs_covariance({1, 1}, {1, 1}, H) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbs_covariance({1, 2}, {3, 1}, HurstPair(0.5, 0.5)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // vanishes when either point sits on a coordinate axis
    CHECK(fbs_covariance({0, 0.7}, {0.5, 0.9}, H) == 0.0);
    CHECK(fbs_covariance({0.5, 0.9}, {0.3, 0}, H) == 0.0);
}

TEST_CASE("fbs increment variance identities") {
    const HurstPair H(0.6, 0.7);
    CHECK(fbs_increment_variance({0.2, 0.3}, {0.7, 0.8}, H) ==
          doctest::Approx(std::pow(0.5, 2.6)).epsilon(1e-14));
    CHECK(fbs_increment_variance({0.4, 0.9}, {0.4, 0.9}, H) == 0.0);

    // 16-term expansion through fbs_covariance agrees with the closed form
    auto engine = make_engine(Seed{91, 0});
    std::uniform_real_distribution<double> u01(0.05, 0.95), uh(0.51, 0.95);
    const double sg[4] = {1, -1, -1, 1};
    for (int k = 0; k < 100; ++k) {
        const double s1 = u01(engine), s2 = u01(engine);
        const double t1 = s1 + (1.0 - s1) * u01(engine), t2 = s2 + (1.0 - s2) * u01(engine);
        const HurstPair hp(uh(engine), uh(engine));
        const std::array<std::array<double, 2>, 4> c{
            {{t1, t2}, {s1, t2}, {t1, s2}, {s1, s2}}};
        double expansion = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) expansion += sg[a] * sg[b] * fbs_covariance(c[a], c[b], hp);
        CHECK(std::abs(expansion - fbs_increment_variance({s1, s2}, {t1, t2}, hp)) <= 1e-12);
    }
}

TEST_CASE("Kronecker-Cholesky reconstruction is exact to round-off") {
    const Grid2D g(1, 1, 8, 8);
    CHECK(fbs_reconstruction_error(g, HurstPair(0.6, 0.7)) <= 1e-10);
}

TEST_CASE("sample_fbs boundary rows are exactly zero") {
    const Grid2D g(1, 1, 9, 7, 2, 1);
    const FieldSample f = sample_fbs(g, HurstPair(0.7, 0.7), Seed{5, 0});
    for (int i = 0; i < g.rows(); ++i) CHECK(f(i, 0) == 0.0);
    for (int j = 0; j < g.cols(); ++j) CHECK(f(0, j) == 0.0);
    CHECK(f.all_finite());
}

TEST_CASE("sample_fbs empirical Gram matches the covariance") {
    const Grid2D g(1, 1, 5, 5);
    const HurstPair H(0.6, 0.7);
    const int R = 2000;
    const int n = g.rows() * g.cols();
    std::vector<double> acc(static_cast<std::size_t>(n) * n, 0.0);
    for (int r = 0; r < R; ++r) {
        const FieldSample f = sample_fbs(g, H, Seed{123, static_cast<std::uint64_t>(r)});
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                acc[static_cast<std::size_t>(a) * n + b] += f(a / 5, a % 5) * f(b / 5, b % 5);
    }
    double worst_z = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const std::array<double, 2> pa{g.x(a / 5), g.y(a % 5)};
            const std::array<double, 2> pb{g.x(b / 5), g.y(b % 5)};
            const double want = fbs_covariance(pa, pb, H);
            const double va = fbs_covariance(pa, pa, H), vb = fbs_covariance(pb, pb, H);
            const double se = std::sqrt((va * vb + want * want) / R);
            if (se == 0.0) continue;
            worst_z = std::max(worst_z,
                               std::abs(acc[static_cast<std::size_t>(a) * n + b] / R - want) / se);
        }
    CHECK(worst_z <= 5.0);
}

TEST_CASE("sample_fbs margins look Gaussian") {
    const Grid2D g(1, 1, 4, 4);
    const HurstPair H(0.7, 0.6);
    const int R = 2000;
    // standardized margin at an interior node
    std::vector<double> xs(R);
    for (int r = 0; r < R; ++r)
        xs[r] = sample_fbs(g, H, Seed{321, static_cast<std::uint64_t>(r)})(2, 2);
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= R;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : xs) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= R;
    m3 /= R;
    m4 /= R;
    const double skew = m3 / std::pow(m2, 1.5);
    const double ex_kurt = m4 / (m2 * m2) - 3.0;
    CHECK(std::abs(skew) <= 0.15);
    CHECK(std::abs(ex_kurt) <= 0.3);
}

TEST_CASE("validate_hurst accepts and rejects correctly") {
    const Grid2D g(1, 1, 9, 9);

    SUBCASE("constant functions have zero ratios") {
        const auto spec = constant_hurst_spec(0.7, 0.6);
        const auto rep = validate_hurst(spec, g);
        CHECK(rep.max_holder_ratio == 0.0);
        CHECK(rep.max_rectangle_ratio == 0.0);
        CHECK(rep.pass());
    }
    SUBCASE("bilinear preset matches its closed-form bound") {
        auto spec = bilinear_hurst_spec(1.0, 1.0);
        spec.c1 = 0.2;
        spec.c2 = 0.2;  // the analytic bound for this function
        const auto rep = validate_hurst(spec, g);
        CHECK(rep.max_rectangle_ratio <= 0.2 + 1e-12);
        CHECK(rep.pass());
    }
    SUBCASE("a jump violates the Hoelder condition") {
        HurstFunctionSpec spec = constant_hurst_spec(0.6, 0.6);
        spec.evaluator = [](double t1, double) {
            return std::array<double, 2>{t1 < 0.5 ? 0.6 : 0.75, 0.6};
        };
        spec.c1 = 0.5;
        spec.c2 = 0.5;
        const auto rep = validate_hurst(spec, Grid2D(1, 1, 33, 33));
        CHECK_FALSE(rep.holder_ok);
    }
    SUBCASE("evaluator outside (1/2,1) is rejected") {
        HurstFunctionSpec spec = constant_hurst_spec(0.6, 0.6);
        spec.evaluator = [](double, double) { return std::array<double, 2>{0.45, 0.6}; };
        CHECK_THROWS_AS(validate_hurst(spec, g), std::invalid_argument);
    }
}

TEST_CASE("sample_wiener increment statistics") {
    const UGrid u = UGrid::build(1.0, 1.0 / 8, 16.0);
    const auto w = sample_wiener(u, u, Seed{17, 0});

    SUBCASE("same seed reproduces the matrix") {
        const auto w2 = sample_wiener(u, u, Seed{17, 0});
        CHECK(w.dw == w2.dw);
    }
    SUBCASE("pooled variance over cell area is 1") {
        double acc = 0.0;
        const int count = u.cells() * u.cells();
        for (int a = 0; a < u.cells(); ++a)
            for (int b = 0; b < u.cells(); ++b) {
                const double z = w.at(a, b);
                acc += z * z / (u.width(a) * u.width(b));
            }
        CHECK(std::abs(acc / count - 1.0) <= 3.0 / std::sqrt(static_cast<double>(count)));
    }
    SUBCASE("disjoint region sums are uncorrelated within MC error") {
        const int R = 600;
        double prod = 0.0;
        for (int r = 0; r < R; ++r) {
            const auto wr = sample_wiener(u, u, Seed{18, static_cast<std::uint64_t>(r)});
            double s1 = 0.0, s2 = 0.0;
            const int half = u.cells() / 2;
            for (int a = 0; a < half; ++a)
                for (int b = 0; b < u.cells(); ++b) s1 += wr.at(a, b);
            for (int a = half; a < u.cells(); ++a)
                for (int b = 0; b < u.cells(); ++b) s2 += wr.at(a, b);
            prod += s1 * s2;
        }
        // corr estimate scaled by the region variances (areas)
        double area1 = 0.0, area2 = 0.0;
        const int half = u.cells() / 2;
        for (int a = 0; a < half; ++a)
            for (int b = 0; b < u.cells(); ++b) area1 += u.width(a) * u.width(b);
        for (int a = half; a < u.cells(); ++a)
            for (int b = 0; b < u.cells(); ++b) area2 += u.width(a) * u.width(b);
        const double corr = (prod / R) / std::sqrt(area1 * area2);
        CHECK(std::abs(corr) <= 4.0 / std::sqrt(static_cast<double>(R)));
    }
}

TEST_CASE("sample_mbs structure and degeneration") {
    const Grid2D g(1, 1, 3, 3);
    const auto spec = constant_hurst_spec(0.7, 0.7);
    const UGrid u = UGrid::build(1.0, 1.0 / 32, truncation_for_tolerance(1.0, 0.85, 1e-8));

    SUBCASE("vanishes on the coordinate axes") {
        const auto w = sample_wiener(u, u, Seed{44, 0});
        const FieldSample f = sample_mbs(g, spec, w);
        for (int i = 0; i < 3; ++i) {
            CHECK(f(i, 0) == 0.0);
            CHECK(f(0, i) == 0.0);
        }
    }
    SUBCASE("node variance matches the normalizer product") {
        const auto w = sample_wiener(u, u, Seed{44, 0});
        const double var = mbs_node_variance(g, spec, w, 2, 2);
        const double c = ch_constant(0.7);
        CHECK(var == doctest::Approx(1.0 / std::pow(c, 4.0)).epsilon(5e-3));
    }
    SUBCASE("variance is stable under u-grid refinement") {
        const UGrid uf = UGrid::build(1.0, 1.0 / 64, truncation_for_tolerance(1.0, 0.85, 1e-8));
        const auto w = sample_wiener(u, u, Seed{44, 0});
        const auto wf = sample_wiener(uf, uf, Seed{44, 0});
        const double v0 = mbs_node_variance(g, spec, w, 2, 2);
        const double v1 = mbs_node_variance(g, spec, wf, 2, 2);
        CHECK(std::abs(v0 - v1) / v1 <= 1e-2);
    }
    SUBCASE("empirical variance agrees at modest replica count") {
        const int R = 300;
        double s2 = 0.0;
        for (int r = 0; r < R; ++r) {
            const auto w = sample_wiener(u, u, Seed{55, static_cast<std::uint64_t>(r)});
            const double v = sample_mbs(g, spec, w)(2, 2);
            s2 += v * v;
        }
        const double want = mbs_node_variance(g, spec, sample_wiener(u, u, Seed{55, 0}), 2, 2);
        const double se = want * std::sqrt(2.0 / R);
        CHECK(std::abs(s2 / R - want) <= 5.0 * se);
    }
    SUBCASE("u-grid must cover the padded domain") {
        const Grid2D padded(1, 1, 3, 3, 2, 2);
        const UGrid small = UGrid::build(1.0, 1.0 / 8, 4.0);
        const auto w = sample_wiener(small, small, Seed{1, 0});
        CHECK_THROWS_AS(sample_mbs(padded, spec, w), std::invalid_argument);
    }
}

TEST_CASE("constant-H mbs correlation matches scaled fbs covariance") {
    // Gaussian second moments: corr(Y_t, Y_s) should equal
    // fbs_covariance * C^{-2} C^{-2}; checked by Monte Carlo on two nodes.
    const Grid2D g(1, 1, 3, 3);
    const auto spec = constant_hurst_spec(0.7, 0.6);
    const UGrid u = UGrid::build(1.0, 1.0 / 32, truncation_for_tolerance(1.0, 0.85, 1e-8));
    const int R = 400;
    double cross = 0.0;
    for (int r = 0; r < R; ++r) {
        const auto w = sample_wiener(u, u, Seed{77, static_cast<std::uint64_t>(r)});
        const FieldSample f = sample_mbs(g, spec, w);
        cross += f(1, 1) * f(2, 2);
    }
    const double c1 = ch_constant(0.7), c2 = ch_constant(0.6);
    const double want =
        fbs_covariance({0.5, 0.5}, {1.0, 1.0}, HurstPair(0.7, 0.6)) / (c1 * c1 * c2 * c2);
    const double scale = std::sqrt(fbs_covariance({0.5, 0.5}, {0.5, 0.5}, HurstPair(0.7, 0.6)) *
                                   fbs_covariance({1, 1}, {1, 1}, HurstPair(0.7, 0.6))) /
                         (c1 * c1 * c2 * c2);
    CHECK(std::abs(cross / R - want) <= 5.0 * scale / std::sqrt(static_cast<double>(R)) + 0.02 * want);
}

TEST_CASE("HurstPair validation and lambda") {
    CHECK(HurstPair(0.7, 0.6).lambda() == doctest::Approx(1.2).epsilon(1e-15));
    CHECK_THROWS_AS(HurstPair(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(HurstPair(0.5, 1.0), std::invalid_argument);
}
