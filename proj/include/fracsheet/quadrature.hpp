#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracsheet {

/// Quadrature settings for kernel integrals over the u line. The paper
/// integrates over all of R; we truncate at -M with an auditable tail
/// bound (see kernel.hpp) and refine the mesh geometrically toward the
/// integrand's singular points so the log factors of the Hurst
/// derivatives converge.
struct KernelQuad {
    double truncation = 100.0;  // integrate u over [-M, t]
    int nodes_per_unit = 512;   // base uniform density on [-1, t]
    enum class Rule { midpoint, trapezoid };
    Rule rule = Rule::midpoint;
    double tail_tol = 1e-8;     // declared relative tail tolerance
    int grade_levels = 20;      // factor-2 refinement depth at singular points
    double tail_ratio = 1.05;   // geometric cell growth beyond u = -1

    /// Same rule with doubled truncation and node density.
    KernelQuad refined() const;

    /// Truncation sized from the tail bound at the largest Hurst value in
    /// play (the tail mass grows with h).
    static KernelQuad for_range(double t_max, double h_max, double tail_tol = 1e-8,
                                int nodes_per_unit = 512);
};

struct QuadCell {
    double lo, hi;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

/// Partition of [lo, hi] into cells: uniform at `nodes_per_unit` density on
/// [max(lo,-1), hi], geometric (ratio q.tail_ratio) below -1, and factor-2
/// graded refinement of the cells adjacent to each singular point. Cell
/// midpoints never coincide with a singular point.
std::vector<QuadCell> build_u_mesh(double lo, double hi, std::span<const double> singular,
                                   const KernelQuad& q);

/// Midpoint (or trapezoid) rule over build_u_mesh cells. Trapezoid
/// evaluates cell endpoints and is only valid for integrands finite at the
/// singular points.
double integrate_u(double lo, double hi, std::span<const double> singular, const KernelQuad& q,
                   const std::function<double(double)>& fn);

}  // namespace fracsheet
