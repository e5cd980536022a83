#include "fracsheet/grid.hpp"

#include <stdexcept>
#include <string>

namespace fracsheet {

Grid2D::Grid2D(double T1, double T2, int n1, int n2, int pad1, int pad2)
    : T1_(T1), T2_(T2), n1_(n1), n2_(n2), pad1_(pad1), pad2_(pad2) {
    if (!(T1 > 0.0) || !(T2 > 0.0))
        throw std::invalid_argument("Grid2D: extents must be positive");
    if (n1 < 2 || n2 < 2)
        throw std::invalid_argument("Grid2D: need at least 2 nodes per axis");
    if (pad1 < 0 || pad2 < 0)
        throw std::invalid_argument("Grid2D: padding must be non-negative");
    h1_ = T1_ / static_cast<double>(n1_ - 1);
    h2_ = T2_ / static_cast<double>(n2_ - 1);
}

bool Grid2D::same_shape(const Grid2D& other) const {
    return T1_ == other.T1_ && T2_ == other.T2_ && n1_ == other.n1_ &&
           n2_ == other.n2_ && pad1_ == other.pad1_ && pad2_ == other.pad2_;
}

Grid2D make_grid(double T1, double T2, int n1, int n2, int pad1, int pad2) {
    return Grid2D(T1, T2, n1, n2, pad1, pad2);
}

}  // namespace fracsheet
