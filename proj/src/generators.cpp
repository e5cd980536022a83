#include "fracsheet/generators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <unordered_map>

#include "fracsheet/errors.hpp"

namespace fracsheet {

HurstPair::HurstPair(double H1, double H2) : H1(H1), H2(H2) {
    if (!(H1 > 0.0 && H1 < 1.0 && H2 > 0.0 && H2 < 1.0))
        throw std::invalid_argument("HurstPair: indices must lie in (0,1)");
}

double fbm_covariance(double t, double s, double H) {
    if (!(t >= 0.0 && s >= 0.0)) throw std::invalid_argument("fbm_covariance: t,s must be >= 0");
    if (!(H > 0.0 && H < 1.0)) throw std::invalid_argument("fbm_covariance: H must lie in (0,1)");
    return 0.5 * (std::pow(t, 2.0 * H) + std::pow(s, 2.0 * H) - std::pow(std::abs(t - s), 2.0 * H));
}

double fbs_covariance(std::array<double, 2> t, std::array<double, 2> s, const HurstPair& H) {
    return fbm_covariance(t[0], s[0], H.H1) * fbm_covariance(t[1], s[1], H.H2);
}

double fbs_increment_variance(std::array<double, 2> s, std::array<double, 2> t,
                              const HurstPair& H) {
    return std::pow(std::abs(t[0] - s[0]), 2.0 * H.H1) * std::pow(std::abs(t[1] - s[1]), 2.0 * H.H2);
}

namespace {

// Cholesky factor of the fBm covariance on the positive coordinates of one
// axis, with a single jitter retry. Returned L is (m x m) over nodes
// 1..m of the axis (node 0 is the exact zero of the field on the boundary).
Eigen::MatrixXd axis_cholesky(const Grid2D& grid, int axis, double H) {
    const int m = (axis == 0 ? grid.rows() : grid.cols()) - 1;
    Eigen::MatrixXd cov(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double xi = axis == 0 ? grid.x(i + 1) : grid.y(i + 1);
            const double xj = axis == 0 ? grid.x(j + 1) : grid.y(j + 1);
            cov(i, j) = fbm_covariance(xi, xj, H);
        }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    // fBm covariance on distinct positive nodes is positive definite;
    // failures are rounding artifacts, retried once with jitter.
    const double jitter = 1e-12 * cov.diagonal().maxCoeff();
    cov.diagonal().array() += jitter;
    llt.compute(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    throw NumericalError("sample_fbs: Cholesky failed even after 1e-12 jitter on axis " +
                         std::to_string(axis));
}

}  // namespace

FieldSample sample_fbs(const Grid2D& grid, const HurstPair& H, Seed seed) {
    const Eigen::MatrixXd L1 = axis_cholesky(grid, 0, H.H1);
    const Eigen::MatrixXd L2 = axis_cholesky(grid, 1, H.H2);
    const int m1 = static_cast<int>(L1.rows());
    const int m2 = static_cast<int>(L2.rows());

    const std::vector<double> g = normal_matrix(m1, m2, seed);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> G(
        g.data(), m1, m2);

    const Eigen::MatrixXd sample = L1 * G * L2.transpose();

    FieldSample out(grid, 0.0);
    for (int i = 0; i < m1; ++i)
        for (int j = 0; j < m2; ++j) out(i + 1, j + 1) = sample(i, j);
    return out;
}

double fbs_reconstruction_error(const Grid2D& grid, const HurstPair& H) {
    const Eigen::MatrixXd L1 = axis_cholesky(grid, 0, H.H1);
    const Eigen::MatrixXd L2 = axis_cholesky(grid, 1, H.H2);
    const Eigen::MatrixXd C1 = L1 * L1.transpose();
    const Eigen::MatrixXd C2 = L2 * L2.transpose();
    const int m1 = static_cast<int>(C1.rows());
    const int m2 = static_cast<int>(C2.rows());
    double worst = 0.0;
    for (int i1 = 0; i1 < m1; ++i1)
        for (int i2 = 0; i2 < m2; ++i2)
            for (int j1 = 0; j1 < m1; ++j1)
                for (int j2 = 0; j2 < m2; ++j2) {
                    const double want = fbs_covariance({grid.x(i1 + 1), grid.y(i2 + 1)},
                                                       {grid.x(j1 + 1), grid.y(j2 + 1)}, H);
                    const double got = C1(i1, j1) * C2(i2, j2);
                    worst = std::max(worst, std::abs(got - want) / std::abs(want));
                }
    return worst;
}

HurstFunctionSpec constant_hurst_spec(double H1, double H2, double mu, double nu) {
    HurstFunctionSpec s;
    s.evaluator = [H1, H2](double, double) { return std::array<double, 2>{H1, H2}; };
    s.mu = mu;
    s.nu = nu;
    s.c1 = 1.0;
    s.c2 = 1.0;
    s.name = "constant";
    return s;
}

HurstFunctionSpec bilinear_hurst_spec(double T1, double T2, double mu, double nu) {
    HurstFunctionSpec s;
    s.evaluator = [T1, T2](double t1, double t2) {
        const double v = 0.6 + 0.2 * t1 * t2 / (T1 * T2);
        return std::array<double, 2>{v, v};
    };
    s.mu = mu;
    s.nu = nu;
    s.c1 = 0.25;
    s.c2 = 0.25;
    s.name = "bilinear";
    return s;
}

HurstFunctionSpec hurst_preset(const std::string& name, double T1, double T2, double H1,
                               double H2) {
    if (name == "constant") return constant_hurst_spec(H1, H2);
    if (name == "bilinear") return bilinear_hurst_spec(T1, T2);
    throw std::invalid_argument("unknown Hurst preset '" + name + "' (expected constant|bilinear)");
}

HurstValidation validate_hurst(const HurstFunctionSpec& spec, const Grid2D& grid) {
    const int R = grid.rows(), C = grid.cols();
    std::vector<std::array<double, 2>> h(static_cast<std::size_t>(R) * C);
    HurstValidation rep;
    rep.h_low = 1.0;
    rep.h_high = 0.0;
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) {
            const auto v = spec.evaluator(grid.x(i), grid.y(j));
            for (double hv : v) {
                if (!(hv > 0.5 && hv < 1.0))
                    throw std::invalid_argument("validate_hurst: evaluator left (1/2,1) at node (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
                rep.h_low = std::min(rep.h_low, hv);
                rep.h_high = std::max(rep.h_high, hv);
            }
            h[static_cast<std::size_t>(i) * C + j] = v;
        }
    rep.range_ok = spec.mu < rep.h_low && rep.h_high < spec.nu;

    auto at = [&](int i, int j) -> const std::array<double, 2>& {
        return h[static_cast<std::size_t>(i) * C + j];
    };

    // (H1)-type ratio over all distinct pairs; (H2)-type over rectangles.
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j)
            for (int k = i; k < R; ++k)
                for (int l = (k == i ? j + 1 : 0); l < C; ++l) {
                    const double d1 = grid.x(k) - grid.x(i);
                    const double d2 = std::abs(grid.y(l) - grid.y(j));
                    const double denom = std::pow(std::abs(d1), spec.nu) + std::pow(d2, spec.nu);
                    for (int c = 0; c < 2; ++c) {
                        const double num = std::abs(at(k, l)[c] - at(i, j)[c]);
                        rep.max_holder_ratio = std::max(rep.max_holder_ratio, num / denom);
                    }
                    if (d1 > 0.0 && d2 > 0.0) {
                        const int jl = std::min(j, l), jh = std::max(j, l);
                        const double rdenom = std::pow(d1 * d2, spec.nu);
                        for (int c = 0; c < 2; ++c) {
                            const double rect = at(k, jh)[c] - at(i, jh)[c] - at(k, jl)[c] + at(i, jl)[c];
                            rep.max_rectangle_ratio =
                                std::max(rep.max_rectangle_ratio, std::abs(rect) / rdenom);
                        }
                    }
                }

    rep.holder_ok = rep.max_holder_ratio <= spec.c1;
    rep.rectangle_ok = rep.max_rectangle_ratio <= spec.c2;
    return rep;
}

UGrid UGrid::build(double t_max, double mesh, double truncation, double tail_ratio) {
    if (!(mesh > 0.0) || !(truncation > 0.0) || !(t_max > 0.0))
        throw std::invalid_argument("UGrid::build: positive mesh, truncation and extent required");
    std::vector<double> desc;  // descending from t_max
    const double uniform_lo = std::max(-1.0, -truncation);
    const long steps = std::lround(std::ceil((t_max - uniform_lo) / mesh));
    for (long k = 0; k <= steps; ++k) desc.push_back(std::max(uniform_lo, t_max - k * mesh));
    if (truncation > 1.0) {
        double cur = 1.0;
        while (cur < truncation) {
            cur = std::min(cur * tail_ratio, truncation);
            desc.push_back(-cur);
        }
    }
    UGrid g;
    g.bounds.assign(desc.rbegin(), desc.rend());
    g.bounds.erase(std::unique(g.bounds.begin(), g.bounds.end()), g.bounds.end());
    return g;
}

WienerIncrements sample_wiener(const UGrid& u1, const UGrid& u2, Seed seed) {
    WienerIncrements w;
    w.u1 = u1;
    w.u2 = u2;
    const int c1 = u1.cells(), c2 = u2.cells();
    w.dw = normal_matrix(c1, c2, seed);
    for (int a = 0; a < c1; ++a) {
        const double w1 = u1.width(a);
        for (int b = 0; b < c2; ++b)
            w.dw[static_cast<std::size_t>(a) * c2 + b] *= std::sqrt(w1 * u2.width(b));
    }
    return w;
}

std::array<UGrid, 2> mbs_ugrids(const Grid2D& grid, const HurstFunctionSpec& spec,
                                double tail_tol) {
    const double mesh = std::min(grid.mesh1(), grid.mesh2()) / 4.0;
    const double t1 = grid.x(grid.rows() - 1);
    const double t2 = grid.y(grid.cols() - 1);
    // The tail mass grows with h, so the window top sizes the truncation.
    const double h_worst = spec.nu;
    const double M1 = std::max(2.0, truncation_for_tolerance(t1, h_worst, tail_tol));
    const double M2 = std::max(2.0, truncation_for_tolerance(t2, h_worst, tail_tol));
    return {UGrid::build(t1, mesh, M1), UGrid::build(t2, mesh, M2)};
}

namespace {

struct AxisKernelCache {
    // key: node coordinate index and Hurst value bits
    struct Key {
        int idx;
        std::uint64_t hbits;
        bool operator==(const Key& o) const { return idx == o.idx && hbits == o.hbits; }
    };
    struct Hash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t x = k.hbits ^ (static_cast<std::uint64_t>(k.idx) * 0x9e3779b97f4a7c15ULL);
            x ^= x >> 33;
            x *= 0xff51afd7ed558ccdULL;
            x ^= x >> 33;
            return static_cast<std::size_t>(x);
        }
    };
    std::unordered_map<Key, std::vector<double>, Hash> map;
};

std::uint64_t bits_of(double v) {
    std::uint64_t b;
    static_assert(sizeof(b) == sizeof(v));
    std::memcpy(&b, &v, sizeof(b));
    return b;
}

// Kernel values at the cell midpoints of one axis for a fixed (t, h).
const std::vector<double>& axis_kernel(AxisKernelCache& cache, const UGrid& u, int idx, double t,
                                       double h) {
    const AxisKernelCache::Key key{idx, bits_of(h)};
    auto it = cache.map.find(key);
    if (it != cache.map.end()) return it->second;
    std::vector<double> v(u.cells());
    for (int c = 0; c < u.cells(); ++c) {
        const double um = u.mid(c);
        v[c] = um >= t ? 0.0 : volterra_kernel(t, um, h);
    }
    return cache.map.emplace(key, std::move(v)).first->second;
}

void check_cover(const Grid2D& grid, const WienerIncrements& w) {
    const double t1 = grid.x(grid.rows() - 1);
    const double t2 = grid.y(grid.cols() - 1);
    if (w.u1.bounds.back() < t1 || w.u2.bounds.back() < t2)
        throw std::invalid_argument("sample_mbs: Wiener u-grid does not cover the padded domain");
}

}  // namespace

FieldSample sample_mbs(const Grid2D& grid, const HurstFunctionSpec& spec,
                       const WienerIncrements& w) {
    check_cover(grid, w);
    const int c2 = w.u2.cells();
    AxisKernelCache cache1, cache2;
    FieldSample out(grid, 0.0);
    std::vector<double> wv(w.u1.cells());
    for (int i = 0; i < grid.rows(); ++i) {
        for (int j = 0; j < grid.cols(); ++j) {
            if (i == 0 || j == 0) continue;  // kernel f(0,u,h) vanishes
            const auto H = spec.evaluator(grid.x(i), grid.y(j));
            const auto& v1 = axis_kernel(cache1, w.u1, i, grid.x(i), H[0]);
            const auto& v2 = axis_kernel(cache2, w.u2, j, grid.y(j), H[1]);
            // wv = dW * v2, then value = v1 . wv
            for (int a = 0; a < w.u1.cells(); ++a) {
                const double* row = w.dw.data() + static_cast<std::size_t>(a) * c2;
                double acc = 0.0;
                for (int b = 0; b < c2; ++b) acc += row[b] * v2[b];
                wv[a] = acc;
            }
            double val = 0.0;
            for (int a = 0; a < w.u1.cells(); ++a) val += v1[a] * wv[a];
            out(i, j) = val;
        }
    }
    return out;
}

double mbs_node_variance(const Grid2D& grid, const HurstFunctionSpec& spec,
                         const WienerIncrements& w, int i, int j) {
    check_cover(grid, w);
    if (i == 0 || j == 0) return 0.0;
    const auto H = spec.evaluator(grid.x(i), grid.y(j));
    double s1 = 0.0, s2 = 0.0;
    for (int a = 0; a < w.u1.cells(); ++a) {
        const double um = w.u1.mid(a);
        const double f = um >= grid.x(i) ? 0.0 : volterra_kernel(grid.x(i), um, H[0]);
        s1 += f * f * w.u1.width(a);
    }
    for (int b = 0; b < w.u2.cells(); ++b) {
        const double um = w.u2.mid(b);
        const double f = um >= grid.y(j) ? 0.0 : volterra_kernel(grid.y(j), um, H[1]);
        s2 += f * f * w.u2.width(b);
    }
    return s1 * s2;
}

}  // namespace fracsheet
