#include "fracsheet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracsheet/kernel.hpp"

namespace fracsheet {

KernelQuad KernelQuad::refined() const {
    KernelQuad r = *this;
    r.truncation *= 2.0;
    r.nodes_per_unit *= 2;
    return r;
}

KernelQuad KernelQuad::for_range(double t_max, double h_max, double tail_tol, int nodes_per_unit) {
    KernelQuad q;
    q.tail_tol = tail_tol;
    q.nodes_per_unit = nodes_per_unit;
    q.truncation = std::max(2.0, truncation_for_tolerance(t_max, h_max, tail_tol));
    return q;
}

std::vector<QuadCell> build_u_mesh(double lo, double hi, std::span<const double> singular,
                                   const KernelQuad& q) {
    if (!(lo < hi)) throw std::invalid_argument("build_u_mesh: empty interval");
    if (q.nodes_per_unit < 2) throw std::invalid_argument("build_u_mesh: nodes_per_unit < 2");

    std::vector<double> sing(singular.begin(), singular.end());
    std::sort(sing.begin(), sing.end());
    sing.erase(std::unique(sing.begin(), sing.end()), sing.end());
    auto is_singular = [&](double v) { return std::binary_search(sing.begin(), sing.end(), v); };

    // Breakpoints: interval ends, interior singular points, and the -1
    // junction between the uniform region and the geometric deep tail.
    std::vector<double> brk{lo};
    if (lo < -1.0 && hi > -1.0) brk.push_back(-1.0);
    for (double s : sing)
        if (s > lo && s < hi) brk.push_back(s);
    brk.push_back(hi);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    std::vector<QuadCell> cells;
    const double base_h = 1.0 / q.nodes_per_unit;
    constexpr int kSubdiv = 8;  // uniform cells per halving band

    // Geometric grading toward `origin` over `span`: grade_levels halvings,
    // kSubdiv cells per band, one innermost sliver. The log factors of the
    // derivative kernels need this depth; a single refined cell is not
    // enough.
    auto graded_from = [&](double origin, double dir, double span) {
        double outer = span;
        for (int l = 0; l < q.grade_levels; ++l) {
            const double inner = 0.5 * outer;
            for (int m = 0; m < kSubdiv; ++m) {
                const double a = inner + (outer - inner) * m / kSubdiv;
                const double b = inner + (outer - inner) * (m + 1) / kSubdiv;
                if (dir > 0)
                    cells.push_back({origin + a, origin + b});
                else
                    cells.push_back({origin - b, origin - a});
            }
            outer = inner;
        }
        if (dir > 0)
            cells.push_back({origin, origin + outer});
        else
            cells.push_back({origin - outer, origin});
    };

    // Deep tail (a, -1]: |u| shrinks by tail_ratio per step, steps halved.
    auto emit_tail = [&](double a) {
        std::vector<double> mags{1.0};
        double cur = 1.0;
        while (cur < -a) {
            const double next = std::min(cur * q.tail_ratio, -a);
            mags.push_back(0.5 * (cur + next));
            mags.push_back(next);
            cur = next;
        }
        for (std::size_t k = mags.size(); k-- > 1;) cells.push_back({-mags[k], -mags[k - 1]});
    };

    auto emit_segment = [&](double a, double b) {
        const bool grade_lo = is_singular(a);
        const bool grade_hi = is_singular(b);
        const double len = b - a;
        const double cap = (grade_lo && grade_hi) ? 0.5 * len : len;
        const double span_lo = grade_lo ? std::min(cap, 32.0 * base_h) : 0.0;
        const double span_hi = grade_hi ? std::min(cap, 32.0 * base_h) : 0.0;
        if (grade_lo) graded_from(a, +1.0, span_lo);
        if (grade_hi) graded_from(b, -1.0, span_hi);
        const double mid_lo = a + span_lo, mid_hi = b - span_hi;
        if (mid_hi > mid_lo) {
            const int count =
                std::max(1, static_cast<int>(std::ceil((mid_hi - mid_lo) * q.nodes_per_unit)));
            for (int k = 0; k < count; ++k)
                cells.push_back({mid_lo + (mid_hi - mid_lo) * k / count,
                                 mid_lo + (mid_hi - mid_lo) * (k + 1) / count});
        }
    };

    for (std::size_t seg = 0; seg + 1 < brk.size(); ++seg) {
        const double a = brk[seg], b = brk[seg + 1];
        if (b == -1.0 && a < -1.0)
            emit_tail(a);
        else
            emit_segment(a, b);
    }
    return cells;
}

double integrate_u(double lo, double hi, std::span<const double> singular, const KernelQuad& q,
                   const std::function<double(double)>& fn) {
    const auto cells = build_u_mesh(lo, hi, singular, q);
    double sum = 0.0;
    if (q.rule == KernelQuad::Rule::midpoint) {
        for (const auto& c : cells) sum += fn(c.mid()) * c.width();
    } else {
        for (const auto& c : cells) sum += 0.5 * (fn(c.lo) + fn(c.hi)) * c.width();
    }
    return sum;
}

}  // namespace fracsheet
