#include "doctest.h"

#include <cmath>
#include <random>

#include "fracsheet/errors.hpp"
#include "fracsheet/kernel.hpp"
#include "fracsheet/rng.hpp"

using namespace fracsheet;

namespace {
const KernelQuad kQuad = KernelQuad::for_range(1.0, 0.85);
}

TEST_CASE("volterra_kernel pointwise values") {
    SUBCASE("h = 1/2 is the exact indicator") {
        CHECK(volterra_kernel(1.0, 0.5, 0.5) == 1.0);
        CHECK(volterra_kernel(1.0, 0.0, 0.5) == 1.0);
        CHECK(volterra_kernel(1.0, -0.2, 0.5) == 0.0);
        CHECK(volterra_kernel(1.0, 1.0, 0.5) == 0.0);
    }
    SUBCASE("closed-form point") {
        CHECK(volterra_kernel(1.0, -1.0, 0.75) ==
              doctest::Approx(std::pow(2.0, 0.25) - 1.0).epsilon(1e-15));
    }
    SUBCASE("vanishes for u >= t") {
        CHECK(volterra_kernel(1.0, 2.0, 0.8) == 0.0);
        auto engine = make_engine(Seed{3, 0});
        std::uniform_real_distribution<double> ut(0.0, 2.0), uh(0.55, 0.95);
        for (int k = 0; k < 200; ++k) {
            const double t = ut(engine);
            const double u = t + ut(engine);
            CHECK(volterra_kernel(t, u, uh(engine)) == 0.0);
        }
    }
    SUBCASE("rejects h outside the window") {
        CHECK_THROWS_AS(volterra_kernel(1.0, 0.0, 0.4), std::invalid_argument);
        CHECK_THROWS_AS(volterra_kernel(1.0, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(volterra_kernel(-1.0, 0.0, 0.7), std::invalid_argument);
    }
}

TEST_CASE("kernel_dh closed forms and singularities") {
    SUBCASE("only the first term for u in (0,t)") {
        for (double u : {0.1, 0.4, 0.9}) {
            const double h = 0.72;
            const double want = std::pow(1.0 - u, h - 0.5) * std::log(1.0 - u);
            CHECK(kernel_dh(1.0, u, h) == doctest::Approx(want).epsilon(1e-15));
        }
    }
    SUBCASE("pinned point with t-u = e") {
        // t = 1, u = 1 - e: ln(t-u) = 1, -u = e-1
        const double e = std::exp(1.0);
        const double u = 1.0 - e;
        for (double h : {0.6, 0.75}) {
            const double want =
                std::pow(e, h - 0.5) - std::pow(e - 1.0, h - 0.5) * std::log(e - 1.0);
            CHECK(kernel_dh(1.0, u, h) == doctest::Approx(want).epsilon(1e-14));
        }
    }
    SUBCASE("domain errors exactly at the log singularities") {
        CHECK_THROWS_AS(kernel_dh(1.0, 1.0, 0.7), std::domain_error);
        CHECK_THROWS_AS(kernel_dh(1.0, 0.0, 0.7), std::domain_error);
        CHECK_THROWS_AS(kernel_dhh(1.0, 1.0, 0.7), std::domain_error);
        CHECK_THROWS_AS(kernel_dhh(1.0, 0.0, 0.7), std::domain_error);
    }
}

TEST_CASE("kernel_dhh matches a central finite difference") {
    // step 1e-4 on volterra_kernel in h
    const double t = 1.0, u = -0.3, h = 0.7, step = 1e-4;
    const double fd = (volterra_kernel(t, u, h + step) - 2.0 * volterra_kernel(t, u, h) +
                       volterra_kernel(t, u, h - step)) /
                      (step * step);
    CHECK(kernel_dhh(t, u, h) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("kernel_dh matches finite differences at random points") {
    auto engine = make_engine(Seed{77, 0});
    std::uniform_real_distribution<double> ut(0.3, 1.0), uu(-2.0, 0.9), uh(0.58, 0.82);
    const double step = 1e-4;
    for (int k = 0; k < 100; ++k) {
        const double t = ut(engine);
        double u = uu(engine);
        if (u > t - 0.05) u = t - 0.05;                  // stay away from u = t
        if (std::abs(u) < 0.05) u = u < 0 ? -0.05 : 0.05;  // and from u = 0
        const double h = uh(engine);
        const double fd = (volterra_kernel(t, u, h + step) - volterra_kernel(t, u, h - step)) /
                          (2.0 * step);
        CHECK(kernel_dh(t, u, h) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("ch_constant values") {
    CHECK(ch_constant(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(ch_constant(0.7) - ch_constant(0.7 + 1e-6)) <= 1e-4);
    CHECK_THROWS_AS(ch_constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ch_constant(1.0), std::invalid_argument);

    // quadrature oracle: C_H^{-2} t^{2H} equals the kernel L2 norm
    const double c = ch_constant(0.75);
    CHECK(kernel_l2_norm(1.0, 0.75, kQuad) == doctest::Approx(1.0 / (c * c)).epsilon(1e-4));
}

TEST_CASE("kernel_l2_norm closed forms") {
    SUBCASE("indicator case integrates to t") {
        CHECK(kernel_l2_norm(1.0, 0.5, kQuad) == 1.0);
        CHECK(kernel_l2_norm(0.25, 0.5, kQuad) == 0.25);
    }
    SUBCASE("matches C_H^{-2} at t = 1") {
        const double c = ch_constant(0.7);
        CHECK(kernel_l2_norm(1.0, 0.7, kQuad) == doctest::Approx(1.0 / (c * c)).epsilon(1e-4));
    }
    SUBCASE("self-similar scaling t^{2h}") {
        const KernelQuad q2 = KernelQuad::for_range(2.0, 0.85);
        const double ratio = kernel_l2_norm(2.0, 0.6, q2) / kernel_l2_norm(1.0, 0.6, q2);
        CHECK(ratio == doctest::Approx(std::pow(2.0, 1.2)).epsilon(1e-5));
    }
    SUBCASE("truncation below the tail bound is rejected") {
        KernelQuad small = kQuad;
        small.truncation = 4.0;  // far below the 1e-8 requirement
        CHECK_THROWS_AS(kernel_l2_norm(1.0, 0.7, small), TruncationError);
    }
}

TEST_CASE("kernel_deriv_l2_norms positivity and stabilization") {
    for (double h : {0.6, 0.7, 0.8}) {
        const auto [d1, d2] = kernel_deriv_l2_norms(1.0, h, kQuad);
        CHECK(d1 > 0.0);
        CHECK(d2 > 0.0);
    }
    const auto base = kernel_deriv_l2_norms(1.0, 0.7, kQuad);
    const auto fine = kernel_deriv_l2_norms(1.0, 0.7, kQuad.refined());
    CHECK(std::abs(base.first - fine.first) / fine.first <= 1e-3);
    CHECK(std::abs(base.second - fine.second) / fine.second <= 1e-3);
}

TEST_CASE("first derivative integral matches the bilinear-form finite difference") {
    // F(h1,h2) = int f(.,h1) f(.,h2) du; d2F/dh1 dh2 at h1=h2=h equals
    // int (d_h f)^2 du.
    const double h = 0.7, d = 1e-3;
    const double fpp = (kernel_inner_product(1.0, h + d, 1.0, h + d, kQuad) -
                        kernel_inner_product(1.0, h + d, 1.0, h - d, kQuad) -
                        kernel_inner_product(1.0, h - d, 1.0, h + d, kQuad) +
                        kernel_inner_product(1.0, h - d, 1.0, h - d, kQuad)) /
                       (4.0 * d * d);
    const double direct = kernel_deriv_l2_norms(1.0, h, kQuad).first;
    CHECK(direct == doctest::Approx(fpp).epsilon(1e-3));
}

TEST_CASE("all three kernel integrals are finite and refinement-stable on the window") {
    for (double h : {0.55, 0.65, 0.8}) {
        for (double t : {0.25, 1.0}) {
            const double f0 = kernel_l2_norm(t, h, kQuad);
            const auto [d1, d2] = kernel_deriv_l2_norms(t, h, kQuad);
            const double f0r = kernel_l2_norm(t, h, kQuad.refined());
            const auto [d1r, d2r] = kernel_deriv_l2_norms(t, h, kQuad.refined());
            CHECK(std::isfinite(f0));
            CHECK(std::isfinite(d1));
            CHECK(std::isfinite(d2));
            CHECK(std::abs(f0 - f0r) / f0r <= 1e-3);
            CHECK(std::abs(d1 - d1r) / d1r <= 1e-3);
            CHECK(std::abs(d2 - d2r) / d2r <= 1e-3);
        }
    }
}

TEST_CASE("tail bound shrinks with M and picks a sufficient truncation") {
    CHECK(kernel_tail_bound(1.0, 0.7, 1e6) < kernel_tail_bound(1.0, 0.7, 1e3));
    for (double h : {0.55, 0.7, 0.8}) {
        const double M = truncation_for_tolerance(1.0, h, 1e-8);
        CHECK(kernel_tail_bound(1.0, h, M) == doctest::Approx(1e-8).epsilon(1e-6));
    }
}

TEST_CASE("HurstWindow enforces its chain") {
    CHECK_NOTHROW(HurstWindow(0.525, 0.85, 0.55, 0.8));
    CHECK_THROWS_AS(HurstWindow(0.5, 0.85, 0.55, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(HurstWindow(0.6, 0.85, 0.55, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(HurstWindow(0.525, 0.85, 0.7, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(HurstWindow(0.525, 1.0, 0.55, 0.8), std::invalid_argument);
}
