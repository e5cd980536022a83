#pragma once

#include <vector>

#include "fracsheet/field.hpp"

namespace fracsheet {

/// Averaging window expressed in grid cells per axis: eps_i = k_i * h_i.
struct SmoothingParams {
    int k1, k2;
    explicit SmoothingParams(int k) : k1(k), k2(k) {}
    SmoothingParams(int k1, int k2) : k1(k1), k2(k2) {}
};

/// Summed-area table of the per-cell trapezoid integrals: S(i,j) is the
/// integral of the bilinear reconstruction of the field over
/// [0,x_i] x [0,y_j]. Rectangle integrals come back exactly (to round-off)
/// from four corner reads.
class IntegralImage {
public:
    IntegralImage(int rows, int cols, double h1, double h2);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double at(int i, int j) const { return s_[static_cast<std::size_t>(i) * cols_ + j]; }
    double& at(int i, int j) { return s_[static_cast<std::size_t>(i) * cols_ + j]; }

    /// Integral over [x_{i0}, x_{i1}] x [y_{j0}, y_{j1}].
    double rectangle(int i0, int j0, int i1, int j1) const;

private:
    int rows_, cols_;
    double h1_, h2_;
    std::vector<double> s_;
};

/// One O(n^2) pass building the table.
IntegralImage build_prefix(const FieldSample& f);

/// Sliding-window average (1/eps^2) int_{[t, t+eps]} f, evaluated with the
/// per-cell trapezoid rule in O(1) per node via the prefix table. The
/// output lives on the unpadded region only. Throws std::invalid_argument
/// when the padding cannot cover the window, naming the required pad.
FieldSample smooth(const FieldSample& f, const SmoothingParams& p);

/// Pointwise g - f on the common (unpadded-compatible) region.
FieldSample difference_field(const FieldSample& f, const FieldSample& g);

}  // namespace fracsheet
