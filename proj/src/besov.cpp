#include "fracsheet/besov.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "fracsheet/grid.hpp"
#include "fracsheet/threads.hpp"

namespace fracsheet {

namespace {

void check_params(const BesovParams& p) {
    if (!(p.beta1 > 0.0 && p.beta1 < 1.0 && p.beta2 > 0.0 && p.beta2 < 1.0))
        throw std::invalid_argument("BesovParams: betas must lie in (0,1)");
    if (p.stride < 0) throw std::invalid_argument("BesovParams: stride must be >= 0");
}

int auto_stride(const BesovParams& p, int n1, int n2) {
    if (p.stride > 0) return p.stride;
    return std::max(n1, n2) <= 48 ? 1 : 2;
}

// Product-integration moments for the weight x^{-1-beta} on cells
// [(j-1)h, jh], x = distance from the singular endpoint. A[j] multiplies
// the node at distance (j-1)h, B[j] the node at distance jh. A[1] is a
// zero sentinel: its node sits at the singularity, where every increment
// in these norms vanishes identically.
struct Moments {
    std::vector<double> A, B;
};

Moments singular_moments(double h, double beta, int count) {
    Moments m;
    m.A.assign(count + 1, 0.0);
    m.B.assign(count + 1, 0.0);
    if (count < 1) return m;
    m.A[1] = 0.0;
    m.B[1] = std::pow(h, -beta) / (1.0 - beta);
    for (int j = 2; j <= count; ++j) {
        const double a = (j - 1) * h, b = j * h;
        const double m0 = (std::pow(a, -beta) - std::pow(b, -beta)) / beta;
        const double m1 = (std::pow(b, 1.0 - beta) - std::pow(a, 1.0 - beta)) / (1.0 - beta);
        m.A[j] = (b * m0 - m1) / h;
        m.B[j] = (m1 - a * m0) / h;
    }
    return m;
}

std::vector<double> power_table(double h, double beta, int count) {
    std::vector<double> pw(count + 1, 0.0);
    for (int j = 1; j <= count; ++j) pw[j] = std::pow(j * h, -beta);
    return pw;
}

struct Candidate {
    double value = -1.0;
    std::array<double, 4> terms{0, 0, 0, 0};
    int s1 = 0, s2 = 0, t1 = 0, t2 = 0;

    // Deterministic tie-break toward the lexicographically first pair.
    bool better_than(const Candidate& o) const {
        if (value != o.value) return value > o.value;
        return std::array{s1, s2, t1, t2} < std::array{o.s1, o.s2, o.t1, o.t2};
    }
};

void consider(Candidate& best, const Candidate& c) {
    if (best.value < 0.0 || c.better_than(best)) best = c;
}

// Shared context of one norm evaluation over the unpadded region.
struct Eval {
    const FieldSample& f;
    int n1, n2;  // nodes of the unpadded region
    Moments m1, m2;
    std::vector<double> pw1, pw2;

    Eval(const FieldSample& field, const BesovParams& p)
        : f(field), n1(field.grid().n1()), n2(field.grid().n2()) {
        const double h1 = field.grid().mesh1(), h2 = field.grid().mesh2();
        m1 = singular_moments(h1, p.beta1, n1 - 1);
        m2 = singular_moments(h2, p.beta2, n2 - 1);
        pw1 = power_table(h1, p.beta1, n1 - 1);
        pw2 = power_table(h2, p.beta2, n2 - 1);
    }
};

// ---------------------------------------------------------------- W1 ----

// Scans all pairs with the given s, t ranging over
// (s1, t1max] x (s2, t2max], feeding candidates that satisfy `accept`.
// Everything is product integration over the full fine grid; `accept`
// only controls which pairs enter the sup.
template <typename Accept>
void w1_scan_s(const Eval& e, int s1, int s2, int t1max, int t2max, Accept&& accept,
               Candidate& best) {
    const int n1 = t1max, n2 = t2max;
    std::vector<double> prev_abs(n1 + 1, 0.0), cur_abs(n1 + 1, 0.0);
    std::vector<double> p4_prev(n1 + 1, 0.0), p4_cur(n1 + 1, 0.0);
    std::vector<double> i3(n1 + 1, 0.0);
    std::vector<double> base_col(n1 + 1, 0.0);
    const double f_ss = e.f(s1, s2);
    for (int i = s1; i <= n1; ++i) base_col[i] = e.f(i, s2) - f_ss;

    for (int t2 = s2 + 1; t2 <= n2; ++t2) {
        const int j2 = t2 - s2;
        const double f_s1t2 = e.f(s1, t2);
        for (int i = s1; i <= n1; ++i)
            cur_abs[i] = std::abs(e.f(i, t2) - f_s1t2 - base_col[i]);

        const double A2 = e.m2.A[j2], B2 = e.m2.B[j2];
        double i2 = 0.0;
        p4_cur[s1] = 0.0;
        for (int t1 = s1 + 1; t1 <= n1; ++t1) {
            const int j1 = t1 - s1;
            i3[t1] += A2 * prev_abs[t1] + B2 * cur_abs[t1];
            i2 += e.m1.A[j1] * cur_abs[t1 - 1] + e.m1.B[j1] * cur_abs[t1];
            const double cell = e.m1.A[j1] * (A2 * prev_abs[t1 - 1] + B2 * cur_abs[t1 - 1]) +
                                e.m1.B[j1] * (A2 * prev_abs[t1] + B2 * cur_abs[t1]);
            p4_cur[t1] = p4_cur[t1 - 1] + p4_prev[t1] - p4_prev[t1 - 1] + cell;
            if (accept(t1, t2)) {
                Candidate c;
                c.terms[0] = cur_abs[t1] * e.pw1[j1] * e.pw2[j2];
                c.terms[1] = e.pw2[j2] * i2;
                c.terms[2] = e.pw1[j1] * i3[t1];
                c.terms[3] = p4_cur[t1];
                c.value = c.terms[0] + c.terms[1] + c.terms[2] + c.terms[3];
                c.s1 = s1;
                c.s2 = s2;
                c.t1 = t1;
                c.t2 = t2;
                consider(best, c);
            }
        }
        std::swap(prev_abs, cur_abs);
        std::swap(p4_prev, p4_cur);
    }
}

// Keeps the `cap` best coarse candidates for the refinement stage.
struct TopK {
    std::vector<Candidate> items;
    std::size_t cap;
    explicit TopK(std::size_t cap) : cap(cap) {}
    void add(const Candidate& c) {
        items.push_back(c);
        std::sort(items.begin(), items.end(),
                  [](const Candidate& a, const Candidate& b) { return a.better_than(b); });
        if (items.size() > cap) items.resize(cap);
    }
};

}  // namespace

NormReport w1_norm(const FieldSample& f, const BesovParams& p) {
    check_params(p);
    Eval e(f, p);
    const int n1 = e.n1 - 1, n2 = e.n2 - 1;  // max node index per axis
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("w1_norm: need at least 2 nodes per axis");
    const int stride = auto_stride(p, e.n1, e.n2);

    // Coarse (or exhaustive) pass over the stride lattice.
    std::vector<int> s1list;
    for (int s1 = 0; s1 < n1; s1 += stride) s1list.push_back(s1);

    const int nthreads = resolve_threads(p.threads);
    std::vector<Candidate> chunk_best(static_cast<std::size_t>(nthreads) + 1);
    std::vector<TopK> chunk_top(static_cast<std::size_t>(nthreads) + 1,
                                TopK(static_cast<std::size_t>(std::max(1, p.refine_top))));
    parallel_chunks(0, static_cast<int>(s1list.size()), nthreads, [&](int chunk, int lo, int hi) {
        for (int k = lo; k < hi; ++k) {
            const int s1 = s1list[static_cast<std::size_t>(k)];
            for (int s2 = 0; s2 < n2; s2 += stride) {
                Candidate local;
                w1_scan_s(
                    e, s1, s2, n1, n2,
                    [&](int t1, int t2) { return t1 % stride == 0 && t2 % stride == 0; }, local);
                if (local.value >= 0.0) {
                    consider(chunk_best[chunk], local);
                    chunk_top[chunk].add(local);
                }
            }
        }
    });

    Candidate best;
    TopK top(static_cast<std::size_t>(std::max(1, p.refine_top)));
    for (int c = 0; c <= nthreads; ++c) {
        if (chunk_best[c].value >= 0.0) consider(best, chunk_best[c]);
        for (const auto& it : chunk_top[c].items) top.add(it);
    }

    // Exhaustive refinement around the best coarse candidates.
    if (stride > 1) {
        const int r = stride;
        for (const auto& cand : top.items) {
            for (int s1 = std::max(0, cand.s1 - r); s1 <= std::min(n1 - 1, cand.s1 + r); ++s1)
                for (int s2 = std::max(0, cand.s2 - r); s2 <= std::min(n2 - 1, cand.s2 + r); ++s2) {
                    const int t1max = std::min(n1, cand.t1 + r);
                    const int t2max = std::min(n2, cand.t2 + r);
                    if (t1max <= s1 || t2max <= s2) continue;
                    const int t1lo = std::max(s1 + 1, cand.t1 - r);
                    const int t2lo = std::max(s2 + 1, cand.t2 - r);
                    Candidate local;
                    w1_scan_s(
                        e, s1, s2, t1max, t2max,
                        [&](int t1, int t2) { return t1 >= t1lo && t2 >= t2lo; }, local);
                    if (local.value >= 0.0) consider(best, local);
                }
        }
    }

    NormReport rep;
    rep.value = best.value < 0.0 ? 0.0 : best.value;
    rep.terms = best.terms;
    rep.s = {best.s1, best.s2};
    rep.t = {best.t1, best.t2};
    return rep;
}

// ---------------------------------------------------------------- W0 ----

namespace {

// phi terms at node t; terms = (|f|, phi1, phi2, phi3).
Candidate w0_at(const Eval& e, int t1, int t2) {
    Candidate c;
    c.t1 = t1;
    c.t2 = t2;
    const double ft = e.f(t1, t2);

    double phi1 = 0.0;
    for (int j = 1; j <= t1; ++j)
        phi1 += e.m1.A[j] * std::abs(ft - e.f(t1 - j + 1, t2)) +
                e.m1.B[j] * std::abs(ft - e.f(t1 - j, t2));
    double phi2 = 0.0;
    for (int j = 1; j <= t2; ++j)
        phi2 += e.m2.A[j] * std::abs(ft - e.f(t1, t2 - j + 1)) +
                e.m2.B[j] * std::abs(ft - e.f(t1, t2 - j));

    double phi3 = 0.0;
    if (t1 > 0 && t2 > 0) {
        // Column integrals along s2 for each s1, then combine along s1.
        std::vector<double> colint(static_cast<std::size_t>(t1) + 1, 0.0);
        for (int s1 = 0; s1 <= t1; ++s1) {
            const double d_col = e.f(t1, t2) - e.f(s1, t2);  // delta at s2 varies below
            double acc = 0.0;
            for (int j = 1; j <= t2; ++j) {
                const int sa = t2 - j + 1, sb = t2 - j;
                const double da = std::abs(d_col - e.f(t1, sa) + e.f(s1, sa));
                const double db = std::abs(d_col - e.f(t1, sb) + e.f(s1, sb));
                acc += e.m2.A[j] * da + e.m2.B[j] * db;
            }
            colint[s1] = acc;
        }
        for (int j = 1; j <= t1; ++j)
            phi3 += e.m1.A[j] * colint[t1 - j + 1] + e.m1.B[j] * colint[t1 - j];
    }

    c.terms = {std::abs(ft), phi1, phi2, phi3};
    c.value = c.terms[0] + c.terms[1] + c.terms[2] + c.terms[3];
    return c;
}

}  // namespace

NormReport w0_norm(const FieldSample& f, const BesovParams& p) {
    check_params(p);
    Eval e(f, p);
    const int n1 = e.n1 - 1, n2 = e.n2 - 1;
    const int stride = auto_stride(p, e.n1, e.n2);

    const int nthreads = resolve_threads(p.threads);
    std::vector<Candidate> chunk_best(static_cast<std::size_t>(nthreads) + 1);
    std::vector<TopK> chunk_top(static_cast<std::size_t>(nthreads) + 1,
                                TopK(static_cast<std::size_t>(std::max(1, p.refine_top))));
    std::vector<int> t1list;
    for (int t1 = 0; t1 <= n1; t1 += stride) t1list.push_back(t1);
    parallel_chunks(0, static_cast<int>(t1list.size()), nthreads, [&](int chunk, int lo, int hi) {
        for (int k = lo; k < hi; ++k) {
            const int t1 = t1list[static_cast<std::size_t>(k)];
            for (int t2 = 0; t2 <= n2; t2 += stride) {
                const Candidate c = w0_at(e, t1, t2);
                consider(chunk_best[chunk], c);
                chunk_top[chunk].add(c);
            }
        }
    });

    Candidate best;
    TopK top(static_cast<std::size_t>(std::max(1, p.refine_top)));
    for (int c = 0; c <= nthreads; ++c) {
        if (chunk_best[c].value >= 0.0) consider(best, chunk_best[c]);
        for (const auto& it : chunk_top[c].items) top.add(it);
    }

    if (stride > 1) {
        const int r = stride;
        for (const auto& cand : top.items)
            for (int t1 = std::max(0, cand.t1 - r); t1 <= std::min(n1, cand.t1 + r); ++t1)
                for (int t2 = std::max(0, cand.t2 - r); t2 <= std::min(n2, cand.t2 + r); ++t2)
                    consider(best, w0_at(e, t1, t2));
    }

    NormReport rep;
    rep.value = best.value < 0.0 ? 0.0 : best.value;
    rep.terms = best.terms;
    rep.s = {0, 0};
    rep.t = {best.t1, best.t2};
    return rep;
}

std::vector<RefinementRow> norm_refinement_study(const std::function<double(double, double)>& fn,
                                                 const BesovParams& p, std::span<const int> sizes,
                                                 double T1, double T2) {
    std::vector<RefinementRow> rows;
    for (int n : sizes) {
        Grid2D grid(T1, T2, n, n, 0, 0);
        const FieldSample f = sample_function(grid, fn);
        RefinementRow row;
        row.n = n;
        row.mesh = grid.mesh1();
        row.w0 = w0_norm(f, p).value;
        row.w1 = w1_norm(f, p).value;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fracsheet
