#pragma once

#include <array>

namespace fracsheet {

/// Uniform rectangular grid on [0,T1]x[0,T2] with optional padding cells
/// past each extent. Node coordinates are exactly k*h along each axis;
/// axis i carries n_i nodes inside [0,T_i] (0 and T_i included) plus
/// pad_i extra nodes beyond T_i. Immutable after construction.
class Grid2D {
public:
    Grid2D(double T1, double T2, int n1, int n2, int pad1 = 0, int pad2 = 0);

    double extent1() const { return T1_; }
    double extent2() const { return T2_; }
    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int pad1() const { return pad1_; }
    int pad2() const { return pad2_; }

    // Total node counts including padding.
    int rows() const { return n1_ + pad1_; }
    int cols() const { return n2_ + pad2_; }

    double mesh1() const { return h1_; }
    double mesh2() const { return h2_; }

    double x(int i) const { return static_cast<double>(i) * h1_; }
    double y(int j) const { return static_cast<double>(j) * h2_; }
    std::array<double, 2> point(int i, int j) const { return {x(i), y(j)}; }

    bool same_shape(const Grid2D& other) const;

private:
    double T1_, T2_;
    int n1_, n2_, pad1_, pad2_;
    double h1_, h2_;
};

/// Checked construction; throws std::invalid_argument on non-positive
/// extents, n_i < 2 or negative padding.
Grid2D make_grid(double T1, double T2, int n1, int n2, int pad1 = 0, int pad2 = 0);

}  // namespace fracsheet
