#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fracsheet/field.hpp"
#include "fracsheet/grid.hpp"
#include "fracsheet/kernel.hpp"
#include "fracsheet/rng.hpp"

namespace fracsheet {

/// Constant Hurst pair of an anisotropic fractional Brownian sheet.
struct HurstPair {
    double H1, H2;
    HurstPair(double H1, double H2);

    /// Increment-regularity exponent; the convergence theorem needs > 1,
    /// i.e. both indices above 1/2.
    double lambda() const { return 2.0 * std::min(H1, H2); }
};

/// fBm covariance (1/2)(t^{2H} + s^{2H} - |t-s|^{2H}).
double fbm_covariance(double t, double s, double H);

/// fBs covariance: product of the per-axis fBm covariances
/// (equals 1/4 of the paper's product form).
double fbs_covariance(std::array<double, 2> t, std::array<double, 2> s, const HurstPair& H);

/// Closed-form increment second moment |t1-s1|^{2H1} |t2-s2|^{2H2}.
double fbs_increment_variance(std::array<double, 2> s, std::array<double, 2> t, const HurstPair& H);

/// Exact Gaussian sample with fbs_covariance on every node, padding
/// included. Kronecker factorization: per-axis Cholesky factors L1, L2 and
/// sample L1 G L2^T with iid standard normal G. If a factorization fails,
/// one jitter of 1e-12 * max diagonal is added before giving up with
/// NumericalError. Row and column 0 are exactly zero.
FieldSample sample_fbs(const Grid2D& grid, const HurstPair& H, Seed seed);

/// Max relative entrywise deviation between (L1 L1^T) kron (L2 L2^T) and
/// fbs_covariance over all grid node pairs; the deterministic acceptance
/// test of the factorized sampler.
double fbs_reconstruction_error(const Grid2D& grid, const HurstPair& H);

/// Point-dependent Hurst pair with its window and regularity constants.
struct HurstFunctionSpec {
    std::function<std::array<double, 2>(double, double)> evaluator;
    double mu, nu;  // window: 1/2 < mu < H_i(t) < nu < 1 on the grid
    double c1, c2;  // Hoelder constants of conditions on H
    std::string name = "custom";
};

HurstFunctionSpec constant_hurst_spec(double H1, double H2, double mu = 0.525, double nu = 0.85);

/// Preset H_i(t) = 0.6 + 0.2 * t1 t2 / (T1 T2): bilinear, range [0.6, 0.8].
HurstFunctionSpec bilinear_hurst_spec(double T1, double T2, double mu = 0.525, double nu = 0.85);

HurstFunctionSpec hurst_preset(const std::string& name, double T1, double T2, double H1 = 0.7,
                               double H2 = 0.7);

struct HurstValidation {
    double max_holder_ratio = 0.0;     // vs c1, over |H_i(t)-H_i(s)| / (|d1|^nu + |d2|^nu)
    double max_rectangle_ratio = 0.0;  // vs c2, over |delta_s H_i(t)| / (|d1| |d2|)^nu
    double h_low = 1.0, h_high = 0.0;  // observed range over the padded grid
    bool range_ok = false;
    bool holder_ok = false;
    bool rectangle_ok = false;
    bool pass() const { return range_ok && holder_ok && rectangle_ok; }
};

/// Checks the window and both regularity conditions on all grid pairs.
/// Throws std::invalid_argument if the evaluator leaves (1/2, 1).
HurstValidation validate_hurst(const HurstFunctionSpec& spec, const Grid2D& grid);

/// Cell partition of [-M, t_max] for the driving Wiener field: uniform
/// mesh on [-1, t_max] (and down to -M when M <= 1), geometric cells of
/// ratio `tail_ratio` below -1.
struct UGrid {
    std::vector<double> bounds;  // ascending, size = cells + 1
    int cells() const { return static_cast<int>(bounds.size()) - 1; }
    double lo(int c) const { return bounds[c]; }
    double hi(int c) const { return bounds[c + 1]; }
    double mid(int c) const { return 0.5 * (bounds[c] + bounds[c + 1]); }
    double width(int c) const { return bounds[c + 1] - bounds[c]; }

    static UGrid build(double t_max, double mesh, double truncation, double tail_ratio = 1.05);
};

/// Independent centered Gaussian increments of a Wiener field over the
/// tensor cells of (u1, u2); variance of each entry equals the cell area.
struct WienerIncrements {
    UGrid u1, u2;
    std::vector<double> dw;  // row-major, u1 cells major
    double at(int c1, int c2) const { return dw[static_cast<std::size_t>(c1) * u2.cells() + c2]; }
};

WienerIncrements sample_wiener(const UGrid& u1, const UGrid& u2, Seed seed);

/// Default driving grid for sample_mbs on `grid`: mesh = min grid mesh / 4,
/// truncation from the kernel tail bound at the top of the Hurst window.
std::array<UGrid, 2> mbs_ugrids(const Grid2D& grid, const HurstFunctionSpec& spec,
                                double tail_tol = 1e-8);

/// Volterra discretization of the multifractional Brownian sheet: for each
/// node t, sum over Wiener cells of f(t1,u1*,H1(t)) f(t2,u2*,H2(t)) dW.
/// One WienerIncrements drives every node. Per-axis kernel vectors are
/// cached per (coordinate, Hurst value).
FieldSample sample_mbs(const Grid2D& grid, const HurstFunctionSpec& spec,
                       const WienerIncrements& w);

/// Deterministic second moment of the discretized field at node (i, j):
/// the squared l2 weight of its Wiener-cell coefficients.
double mbs_node_variance(const Grid2D& grid, const HurstFunctionSpec& spec,
                         const WienerIncrements& w, int i, int j);

}  // namespace fracsheet
