#include "fracsheet/smoothing.hpp"

#include <stdexcept>
#include <string>

namespace fracsheet {

IntegralImage::IntegralImage(int rows, int cols, double h1, double h2)
    : rows_(rows), cols_(cols), h1_(h1), h2_(h2),
      s_(static_cast<std::size_t>(rows) * cols, 0.0) {}

double IntegralImage::rectangle(int i0, int j0, int i1, int j1) const {
    if (i0 < 0 || j0 < 0 || i1 >= rows_ || j1 >= cols_ || i0 > i1 || j0 > j1)
        throw std::invalid_argument("IntegralImage::rectangle: corner out of range");
    return at(i1, j1) - at(i0, j1) - at(i1, j0) + at(i0, j0);
}

IntegralImage build_prefix(const FieldSample& f) {
    const auto& g = f.grid();
    IntegralImage s(g.rows(), g.cols(), g.mesh1(), g.mesh2());
    const double cell = 0.25 * g.mesh1() * g.mesh2();
    // S(i,j) accumulates the trapezoid integrals of all cells below and
    // left; first row/column stay zero.
    for (int i = 1; i < g.rows(); ++i) {
        double row = 0.0;
        for (int j = 1; j < g.cols(); ++j) {
            row += cell * (f(i - 1, j - 1) + f(i, j - 1) + f(i - 1, j) + f(i, j));
            s.at(i, j) = s.at(i - 1, j) + row;
        }
    }
    return s;
}

FieldSample smooth(const FieldSample& f, const SmoothingParams& p) {
    const auto& g = f.grid();
    if (p.k1 < 1 || p.k2 < 1)
        throw std::invalid_argument("smooth: window must span at least one cell per axis");
    if (p.k1 > g.pad1() || p.k2 > g.pad2())
        throw std::invalid_argument(
            "smooth: insufficient padding; need pad1 >= " + std::to_string(p.k1) +
            " and pad2 >= " + std::to_string(p.k2) + " cells, grid has (" +
            std::to_string(g.pad1()) + ", " + std::to_string(g.pad2()) + ")");

    const IntegralImage s = build_prefix(f);
    const double eps1 = p.k1 * g.mesh1();
    const double eps2 = p.k2 * g.mesh2();
    const double inv = 1.0 / (eps1 * eps2);

    Grid2D out_grid(g.extent1(), g.extent2(), g.n1(), g.n2(), 0, 0);
    FieldSample out(out_grid);
    for (int i = 0; i < g.n1(); ++i)
        for (int j = 0; j < g.n2(); ++j)
            out(i, j) = inv * s.rectangle(i, j, i + p.k1, j + p.k2);
    return out;
}

FieldSample difference_field(const FieldSample& f, const FieldSample& g) {
    const auto& gf = f.grid();
    const auto& gg = g.grid();
    if (gf.mesh1() != gg.mesh1() || gf.mesh2() != gg.mesh2())
        throw std::invalid_argument("difference_field: mesh mismatch");
    const int rows = std::min(gf.rows(), gg.rows());
    const int cols = std::min(gf.cols(), gg.cols());
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("difference_field: no common region");
    Grid2D grid(gf.x(rows - 1), gf.y(cols - 1), rows, cols, 0, 0);
    FieldSample out(grid);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = g(i, j) - f(i, j);
    return out;
}

}  // namespace fracsheet
