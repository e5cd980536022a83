#include "fracsheet/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsheet {

FieldSample::FieldSample(const Grid2D& grid, double fill)
    : grid_(grid),
      values_(static_cast<std::size_t>(grid.rows()) * grid.cols(), fill) {}

FieldSample::FieldSample(const Grid2D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    const auto expected = static_cast<std::size_t>(grid_.rows()) * grid_.cols();
    if (values_.size() != expected)
        throw std::invalid_argument("FieldSample: value count does not match grid shape");
}

bool FieldSample::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

FieldSample FieldSample::with_padding(int pad1, int pad2) const {
    const int n1 = grid_.rows() - pad1;
    const int n2 = grid_.cols() - pad2;
    if (pad1 < 0 || pad2 < 0 || n1 < 2 || n2 < 2)
        throw std::invalid_argument("FieldSample::with_padding: padding leaves fewer than 2 nodes");
    Grid2D g(grid_.x(n1 - 1), grid_.y(n2 - 1), n1, n2, pad1, pad2);
    return FieldSample(g, values_);
}

double delta_increment(const FieldSample& f, std::array<int, 2> s, std::array<int, 2> t) {
    const auto& g = f.grid();
    if (s[0] < 0 || s[1] < 0 || t[0] >= g.rows() || t[1] >= g.cols())
        throw std::invalid_argument("delta_increment: index out of bounds");
    if (!(s[0] < t[0] && s[1] < t[1]))
        throw std::invalid_argument("delta_increment: requires s < t componentwise");
    return f(t[0], t[1]) - f(s[0], t[1]) - f(t[0], s[1]) + f(s[0], s[1]);
}

FieldSample sample_function(const Grid2D& grid, const std::function<double(double, double)>& fn) {
    FieldSample out(grid);
    for (int i = 0; i < grid.rows(); ++i)
        for (int j = 0; j < grid.cols(); ++j)
            out(i, j) = fn(grid.x(i), grid.y(j));
    return out;
}

}  // namespace fracsheet
