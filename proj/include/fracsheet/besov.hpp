#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fracsheet/field.hpp"

namespace fracsheet {

/// Parameters of the two-parameter Besov-type norms.
///
/// The singular inner integrals are discretized by product integration:
/// the increment is interpolated piecewise-linearly between grid nodes and
/// multiplied by the exact per-cell moments of the weight
/// (u - s)^{-1-beta}. Increments vanish at the singular endpoint by
/// construction, so every moment that would diverge multiplies an exact
/// zero. This is exact for bilinear fields and first order or better in
/// the mesh for smooth ones.
struct BesovParams {
    double beta1, beta2;
    /// Sup-search stride: 1 = exhaustive over all grid pairs; > 1 = coarse
    /// lattice pass followed by exhaustive refinement around the best
    /// candidates; 0 = auto (1 up to 48 nodes per axis, else 2).
    int stride = 0;
    int refine_top = 16;  // candidates refined in the two-stage search
    int threads = 0;     // 0 = hardware concurrency

    BesovParams(double beta1, double beta2) : beta1(beta1), beta2(beta2) {}
};

/// Norm value with its argmax pair and the per-term breakdown there.
/// For the W1 norm the terms are (rectangle ratio, axis-1 integral,
/// axis-2 integral, double integral); for the W0 norm they are
/// (|f(t)|, phi1, phi2, phi3) and s is (0,0).
struct NormReport {
    double value = 0.0;
    std::array<double, 4> terms{0.0, 0.0, 0.0, 0.0};
    std::array<int, 2> s{0, 0};
    std::array<int, 2> t{0, 0};
};

/// sup_t of |f(t)| + phi1 + phi2 + phi3 over the unpadded region.
NormReport w0_norm(const FieldSample& f, const BesovParams& p);

/// sup over grid pairs 0 <= s < t <= T of the four-term W1 functional.
NormReport w1_norm(const FieldSample& f, const BesovParams& p);

struct RefinementRow {
    int n;        // nodes per axis
    double mesh;
    double w0, w1;
};

/// Evaluates both norms for an analytic field on nested grids; used to
/// calibrate quadrature error before the stochastic experiments.
std::vector<RefinementRow> norm_refinement_study(const std::function<double(double, double)>& fn,
                                                 const BesovParams& p, std::span<const int> sizes,
                                                 double T1 = 1.0, double T2 = 1.0);

}  // namespace fracsheet
