#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fracsheet/grid.hpp"

namespace fracsheet {

/// One realization of a scalar field sampled on a Grid2D, padding included.
/// Row-major storage, axis-1 index major. Value semantics; the grid is
/// stored by value (it is six numbers).
class FieldSample {
public:
    FieldSample(const Grid2D& grid, double fill = 0.0);
    FieldSample(const Grid2D& grid, std::vector<double> values);

    const Grid2D& grid() const { return grid_; }
    int rows() const { return grid_.rows(); }
    int cols() const { return grid_.cols(); }

    double operator()(int i, int j) const { return values_[idx(i, j)]; }
    double& operator()(int i, int j) { return values_[idx(i, j)]; }

    const std::vector<double>& values() const { return values_; }

    /// True when every entry is finite.
    bool all_finite() const;

    /// Reinterprets the trailing cells of each axis as padding, shrinking
    /// the nominal domain accordingly. Used when a padded field arrives
    /// without grid metadata (CSV round trips).
    FieldSample with_padding(int pad1, int pad2) const;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * grid_.cols() + j;
    }

    Grid2D grid_;
    std::vector<double> values_;
};

/// Two-parameter rectangular increment
///   delta_s f(t) = f(t) - f(s1,t2) - f(t1,s2) + f(s)
/// on grid indices. Requires s < t componentwise and both in bounds.
double delta_increment(const FieldSample& f, std::array<int, 2> s, std::array<int, 2> t);

/// Samples an analytic function on every node of the grid (padding included).
FieldSample sample_function(const Grid2D& grid, const std::function<double(double, double)>& fn);

}  // namespace fracsheet
