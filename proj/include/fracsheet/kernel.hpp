#pragma once

#include <utility>

#include "fracsheet/quadrature.hpp"

namespace fracsheet {

/// Standing Hurst window 1/2 < mu < h_min <= h_max < nu < 1.
struct HurstWindow {
    double mu, nu, h_min, h_max;
    HurstWindow(double mu, double nu, double h_min, double h_max);
};

/// Volterra kernel f(t,u,h) = (t-u)_+^{h-1/2} - (-u)_+^{h-1/2}.
/// h = 1/2 is accepted as the exact indicator-kernel special case
/// (1 on [0,t)); otherwise h must lie in (1/2, 1).
double volterra_kernel(double t, double u, double h);

/// First and second h-derivatives of the kernel; terms whose positive part
/// vanishes contribute zero. Throws std::domain_error exactly at the
/// logarithmic singularities u = t and u = 0.
double kernel_dh(double t, double u, double h);
double kernel_dhh(double t, double u, double h);

/// Normalizer C_H = sqrt(2 H sin(pi H) Gamma(2H)) / Gamma(H + 1/2); the
/// Volterra representation of fBm has variance C_H^{-2} t^{2H}.
double ch_constant(double H);

/// Upper bound on the truncated tail: the mean-value estimate
/// |f| <= (h-1/2) t (-u)^{h-3/2} for u < -M gives
///   int_{-inf}^{-M} f^2 du <= t^2 (h-1/2)^2 M^{2h-2} / (2-2h).
double kernel_tail_bound(double t, double h, double M);

/// Smallest M with kernel_tail_bound(t,h,M) <= tol * t^{2h}.
double truncation_for_tolerance(double t, double h, double tol);

/// Quadrature of int f(t,u,h)^2 du over [-M, t]; equals C_h^{-2} t^{2h} in
/// the continuum. Throws TruncationError when the declared tail tolerance
/// cannot be met at q.truncation.
double kernel_l2_norm(double t, double h, const KernelQuad& q);

/// Quadrature of int (d_h f)^2 du and int (d_hh f)^2 du (always midpoint).
std::pair<double, double> kernel_deriv_l2_norms(double t, double h, const KernelQuad& q);

/// Quadrature of int f(ta,u,ha) f(tb,u,hb) du; the building block for the
/// separable lemma checks.
double kernel_inner_product(double ta, double ha, double tb, double hb, const KernelQuad& q);

}  // namespace fracsheet
