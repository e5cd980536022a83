#include "fracsheet/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fracsheet/errors.hpp"

namespace fracsheet {

namespace {

constexpr double kIndicatorH = 0.5;

void check_hurst_exponent(double h) {
    if (h == kIndicatorH) return;  // exact indicator special case for oracles
    if (!(h > 0.5 && h < 1.0))
        throw std::invalid_argument("Hurst exponent must lie in (1/2, 1), got " + std::to_string(h));
}

}  // namespace

HurstWindow::HurstWindow(double mu, double nu, double h_min, double h_max)
    : mu(mu), nu(nu), h_min(h_min), h_max(h_max) {
    if (!(0.5 < mu && mu < h_min && h_min <= h_max && h_max < nu && nu < 1.0))
        throw std::invalid_argument("HurstWindow: need 1/2 < mu < h_min <= h_max < nu < 1");
}

double volterra_kernel(double t, double u, double h) {
    if (!(t >= 0.0)) throw std::invalid_argument("volterra_kernel: t must be >= 0");
    check_hurst_exponent(h);
    if (h == kIndicatorH) return (u >= 0.0 && u < t) ? 1.0 : 0.0;
    const double e = h - 0.5;
    double v = 0.0;
    if (t - u > 0.0) v += std::pow(t - u, e);
    if (-u > 0.0) v -= std::pow(-u, e);
    return v;
}

double kernel_dh(double t, double u, double h) {
    if (!(t >= 0.0)) throw std::invalid_argument("kernel_dh: t must be >= 0");
    check_hurst_exponent(h);
    if (u == t || u == 0.0)
        throw std::domain_error("kernel_dh: logarithmic singularity at u = t or u = 0");
    const double e = h - 0.5;
    double v = 0.0;
    if (t - u > 0.0) v += std::pow(t - u, e) * std::log(t - u);
    if (-u > 0.0) v -= std::pow(-u, e) * std::log(-u);
    return v;
}

double kernel_dhh(double t, double u, double h) {
    if (!(t >= 0.0)) throw std::invalid_argument("kernel_dhh: t must be >= 0");
    check_hurst_exponent(h);
    if (u == t || u == 0.0)
        throw std::domain_error("kernel_dhh: logarithmic singularity at u = t or u = 0");
    const double e = h - 0.5;
    double v = 0.0;
    if (t - u > 0.0) {
        const double l = std::log(t - u);
        v += std::pow(t - u, e) * l * l;
    }
    if (-u > 0.0) {
        const double l = std::log(-u);
        v -= std::pow(-u, e) * l * l;
    }
    return v;
}

double ch_constant(double H) {
    if (!(H > 0.0 && H < 1.0)) throw std::invalid_argument("ch_constant: H must lie in (0,1)");
    const double num = std::sqrt(2.0 * H * std::sin(std::numbers::pi * H) * std::tgamma(2.0 * H));
    return num / std::tgamma(H + 0.5);
}

double kernel_tail_bound(double t, double h, double M) {
    if (!(M > 0.0)) throw std::invalid_argument("kernel_tail_bound: M must be positive");
    const double e = h - 0.5;
    return t * t * e * e * std::pow(M, 2.0 * h - 2.0) / (2.0 - 2.0 * h);
}

double truncation_for_tolerance(double t, double h, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("truncation_for_tolerance: tol must be positive");
    if (h == kIndicatorH) return 1.0;  // indicator kernel has no tail
    const double e = h - 0.5;
    // Solve t^2 e^2 M^{2h-2} / (2-2h) = tol * t^{2h}.
    const double rhs = tol * std::pow(t, 2.0 * h) * (2.0 - 2.0 * h) / (t * t * e * e);
    return std::pow(rhs, 1.0 / (2.0 * h - 2.0));
}

double kernel_l2_norm(double t, double h, const KernelQuad& q) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_l2_norm: t must be positive");
    check_hurst_exponent(h);
    if (h != kIndicatorH) {
        const double tail = kernel_tail_bound(t, h, q.truncation);
        if (tail > q.tail_tol * std::pow(t, 2.0 * h))
            throw TruncationError("kernel_l2_norm: truncation " + std::to_string(q.truncation) +
                                  " misses the declared tail tolerance; need M >= " +
                                  std::to_string(truncation_for_tolerance(t, h, q.tail_tol)));
    } else {
        return t;  // indicator kernel: integral of 1 over [0, t)
    }
    const double sing[] = {0.0, t};
    return integrate_u(-q.truncation, t, sing, q, [&](double u) {
        const double f = volterra_kernel(t, u, h);
        return f * f;
    });
}

std::pair<double, double> kernel_deriv_l2_norms(double t, double h, const KernelQuad& q) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_deriv_l2_norms: t must be positive");
    check_hurst_exponent(h);
    if (h == kIndicatorH)
        throw std::invalid_argument("kernel_deriv_l2_norms: h = 1/2 special case has no derivative");
    KernelQuad mq = q;
    mq.rule = KernelQuad::Rule::midpoint;  // endpoints would hit the log singularities
    const double sing[] = {0.0, t};
    const double d1 = integrate_u(-mq.truncation, t, sing, mq, [&](double u) {
        const double g = kernel_dh(t, u, h);
        return g * g;
    });
    const double d2 = integrate_u(-mq.truncation, t, sing, mq, [&](double u) {
        const double g = kernel_dhh(t, u, h);
        return g * g;
    });
    return {d1, d2};
}

double kernel_inner_product(double ta, double ha, double tb, double hb, const KernelQuad& q) {
    if (!(ta > 0.0) || !(tb > 0.0))
        throw std::invalid_argument("kernel_inner_product: times must be positive");
    check_hurst_exponent(ha);
    check_hurst_exponent(hb);
    const double hi = std::max(ta, tb);
    const double sing[] = {0.0, ta, tb};
    return integrate_u(-q.truncation, hi, sing, q, [&](double u) {
        return volterra_kernel(ta, u, ha) * volterra_kernel(tb, u, hb);
    });
}

}  // namespace fracsheet
