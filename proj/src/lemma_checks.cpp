#include "fracsheet/lemma_checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "fracsheet/csv.hpp"
#include "fracsheet/errors.hpp"

namespace fracsheet {

double fbm_time_diff_l2(double t1, double t2, double H, const KernelQuad& q) {
    const double hi = std::max(t1, t2);
    const double sing[] = {0.0, t1, t2};
    return integrate_u(-q.truncation, hi, sing, q, [&](double u) {
        const double d = volterra_kernel(t1, u, H) - volterra_kernel(t2, u, H);
        return d * d;
    });
}

double fbm_hurst_diff_l2(double t, double H1, double H2, const KernelQuad& q) {
    const double sing[] = {0.0, t};
    return integrate_u(-q.truncation, t, sing, q, [&](double u) {
        const double d = volterra_kernel(t, u, H1) - volterra_kernel(t, u, H2);
        return d * d;
    });
}

double fbm_mixed_diff_l2(double t1, double t2, double H1, double H2, const KernelQuad& q) {
    const double hi = std::max(t1, t2);
    const double sing[] = {0.0, t1, t2};
    return integrate_u(-q.truncation, hi, sing, q, [&](double u) {
        const double d = volterra_kernel(t1, u, H1) - volterra_kernel(t2, u, H1) -
                         volterra_kernel(t1, u, H2) + volterra_kernel(t2, u, H2);
        return d * d;
    });
}

namespace {

double sq(double x) { return x * x; }

// Cache of 1-D kernel inner products, symmetric in its two (t,h) legs.
class InnerProductCache {
public:
    explicit InnerProductCache(const KernelQuad& q) : q_(q) {}

    double get(double ta, double ha, double tb, double hb) {
        if (ta == 0.0 || tb == 0.0) return 0.0;  // kernel vanishes at t = 0
        if (std::tie(ta, ha) > std::tie(tb, hb)) {
            std::swap(ta, tb);
            std::swap(ha, hb);
        }
        const Key key{bits(ta), bits(ha), bits(tb), bits(hb)};
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
        const double v = kernel_inner_product(ta, ha, tb, hb, q_);
        map_.emplace(key, v);
        return v;
    }

private:
    struct Key {
        std::uint64_t a, b, c, d;
        bool operator==(const Key& o) const {
            return a == o.a && b == o.b && c == o.c && d == o.d;
        }
    };
    struct Hash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t x = k.a * 0x9e3779b97f4a7c15ULL;
            x ^= k.b + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
            x ^= k.c + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
            x ^= k.d + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
            return static_cast<std::size_t>(x);
        }
    };
    static std::uint64_t bits(double v) {
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof(b));
        return b;
    }

    KernelQuad q_;
    std::unordered_map<Key, double, Hash> map_;
};

struct RatioStats {
    double max_ratio = 0.0;
    bool all_ok = true;
};

RatioStats scan_ratios(const std::vector<LemmaTuple>& tuples) {
    RatioStats st;
    for (const auto& t : tuples) {
        if (t.both_zero) continue;
        if (!std::isfinite(t.ratio) || t.ratio < 0.0) st.all_ok = false;
        st.max_ratio = std::max(st.max_ratio, t.ratio);
    }
    return st;
}

void finalize(LemmaReport& rep, double refined_max) {
    const RatioStats st = scan_ratios(rep.tuples);
    rep.max_ratio = st.max_ratio;
    rep.refined_max_ratio = refined_max;
    rep.both_zero_count = 0;
    for (const auto& t : rep.tuples)
        if (t.both_zero) ++rep.both_zero_count;
    rep.stability = st.max_ratio > 0.0 ? std::abs(refined_max - st.max_ratio) / st.max_ratio : 0.0;
    rep.pass = st.all_ok && std::isfinite(refined_max) && rep.stability <= 0.05;
}

}  // namespace

LemmaReport check_fbm_time_increment(const LemmaLattice& lat, const KernelQuad& q) {
    LemmaReport rep;
    rep.lemma = "fbm1";
    rep.param_names = {"t1", "t2", "H"};
    auto run = [&](const KernelQuad& quad, std::vector<LemmaTuple>* out) {
        double mx = 0.0;
        for (double t1 : lat.t_values)
            for (double t2 : lat.t_values) {
                if (t2 >= t1) continue;
                for (double H : lat.h_values) {
                    LemmaTuple tup;
                    tup.params = {t1, t2, H};
                    tup.lhs = fbm_time_diff_l2(t1, t2, H, quad);
                    tup.rhs = std::pow(t1 - t2, 2.0 * H);
                    tup.ratio = tup.lhs / tup.rhs;
                    mx = std::max(mx, tup.ratio);
                    if (out) out->push_back(tup);
                }
            }
        return mx;
    };
    run(q, &rep.tuples);
    finalize(rep, run(q.refined(), nullptr));
    return rep;
}

LemmaReport check_fbm_hurst_increment(const LemmaLattice& lat, const KernelQuad& q) {
    LemmaReport rep;
    rep.lemma = "fbm2";
    rep.param_names = {"t", "H1", "H2"};
    auto run = [&](const KernelQuad& quad, std::vector<LemmaTuple>* out) {
        double mx = 0.0;
        for (double t : lat.t_values)
            for (double H1 : lat.h_values)
                for (double H2 : lat.h_values) {
                    if (H2 >= H1) continue;  // symmetric; H1 == H2 is the excluded 0/0
                    LemmaTuple tup;
                    tup.params = {t, H1, H2};
                    tup.lhs = fbm_hurst_diff_l2(t, H1, H2, quad);
                    tup.rhs = sq(H1 - H2);
                    tup.ratio = tup.lhs / tup.rhs;
                    mx = std::max(mx, tup.ratio);
                    if (out) out->push_back(tup);
                }
        return mx;
    };
    run(q, &rep.tuples);
    finalize(rep, run(q.refined(), nullptr));
    return rep;
}

LemmaReport check_fbm_mixed_increment(const LemmaLattice& lat, const KernelQuad& q) {
    LemmaReport rep;
    rep.lemma = "fbm3";
    rep.param_names = {"t1", "t2", "H1", "H2"};
    auto run = [&](const KernelQuad& quad, std::vector<LemmaTuple>* out) {
        double mx = 0.0;
        for (double t1 : lat.t_values)
            for (double t2 : lat.t_values) {
                if (t2 >= t1) continue;
                for (double H1 : lat.h_values)
                    for (double H2 : lat.h_values) {
                        if (H2 >= H1) continue;
                        LemmaTuple tup;
                        tup.params = {t1, t2, H1, H2};
                        tup.lhs = fbm_mixed_diff_l2(t1, t2, H1, H2, quad);
                        tup.rhs = std::pow(t1 - t2, 2.0 * lat.mu) * sq(H1 - H2);
                        tup.ratio = tup.lhs / tup.rhs;
                        mx = std::max(mx, tup.ratio);
                        if (out) out->push_back(tup);
                    }
            }
        return mx;
    };
    run(q, &rep.tuples);
    finalize(rep, run(q.refined(), nullptr));
    return rep;
}

namespace {

double fourpoint_rhs(const std::array<double, 4>& H, const std::array<double, 4>& Hp) {
    const double s1 = sq(H[0] - H[1] + H[2] - H[3]);
    const double s2 = sq(Hp[0] - Hp[1] + Hp[2] - Hp[3]);
    const double a = sq(H[0] - H[1]) + sq(Hp[0] - Hp[1]) + sq(H[2] - H[3]) + sq(Hp[2] - Hp[3]);
    const double b = sq(H[0] - H[3]) + sq(Hp[0] - Hp[3]) + sq(H[1] - H[2]) + sq(Hp[1] - Hp[2]);
    return s1 + s2 + a * b;
}

double fourpoint_lhs_separable(InnerProductCache& cache, std::array<double, 2> t,
                               const std::array<double, 4>& H, const std::array<double, 4>& Hp,
                               double* scale = nullptr) {
    static constexpr double sign[4] = {1.0, -1.0, 1.0, -1.0};
    double lhs = 0.0, sc = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double term = sign[i] * sign[j] * cache.get(t[0], H[i], t[0], H[j]) *
                                cache.get(t[1], Hp[i], t[1], Hp[j]);
            lhs += term;
            sc += std::abs(term);
        }
    if (scale) *scale = sc;
    return lhs;
}

// Tiny negative round-off from the 16-term cancellation is clamped; a
// genuinely negative quadratic form is a hard failure upstream.
double clamp_l2(double lhs, double scale) {
    if (lhs >= 0.0) return lhs;
    if (lhs > -1e-10 * std::max(scale, 1e-300)) return 0.0;
    return lhs;  // left negative on purpose; scan_ratios flags it
}

}  // namespace

double fbs_fourpoint_direct(std::array<double, 2> t, const std::array<double, 4>& H,
                            const std::array<double, 4>& Hp, const KernelQuad& q) {
    const double sing1[] = {0.0, t[0]};
    const double sing2[] = {0.0, t[1]};
    const auto mesh1 = build_u_mesh(-q.truncation, t[0], sing1, q);
    const auto mesh2 = build_u_mesh(-q.truncation, t[1], sing2, q);
    static constexpr double sign[4] = {1.0, -1.0, 1.0, -1.0};

    std::vector<std::array<double, 4>> f2(mesh2.size());
    for (std::size_t b = 0; b < mesh2.size(); ++b)
        for (int k = 0; k < 4; ++k) f2[b][k] = volterra_kernel(t[1], mesh2[b].mid(), Hp[k]);

    double total = 0.0;
    for (const auto& c1 : mesh1) {
        std::array<double, 4> f1;
        for (int k = 0; k < 4; ++k) f1[k] = volterra_kernel(t[0], c1.mid(), H[k]);
        double row = 0.0;
        for (std::size_t b = 0; b < mesh2.size(); ++b) {
            double F = 0.0;
            for (int k = 0; k < 4; ++k) F += sign[k] * f1[k] * f2[b][k];
            row += F * F * mesh2[b].width();
        }
        total += row * c1.width();
    }
    return total;
}

LemmaReport check_fbs_fourpoint(const LemmaLattice& lat, int count, double min_gap, Seed seed,
                                const KernelQuad& q) {
    LemmaReport rep;
    rep.lemma = "fbs";
    rep.param_names = {"t1", "t2", "H1", "H2", "H3", "H4", "Hp1", "Hp2", "Hp3", "Hp4"};

    const double h_lo = *std::min_element(lat.h_values.begin(), lat.h_values.end());
    const double h_hi = *std::max_element(lat.h_values.begin(), lat.h_values.end());
    if (h_hi - h_lo < 7.0 * min_gap)
        throw std::invalid_argument("check_fbs_fourpoint: window too narrow for the mutual gap");

    auto engine = make_engine(seed);
    std::uniform_real_distribution<double> uh(h_lo, h_hi);
    std::uniform_int_distribution<std::size_t> ut(0, lat.t_values.size() - 1);

    // Randomized tuples: 8 Hurst values with pairwise gaps >= min_gap so
    // the right side stays well conditioned.
    struct Draw {
        std::array<double, 2> t;
        std::array<double, 4> H, Hp;
    };
    std::vector<Draw> draws;
    draws.reserve(count);
    while (static_cast<int>(draws.size()) < count) {
        std::array<double, 8> vals;
        for (auto& v : vals) v = uh(engine);
        std::array<double, 8> sorted = vals;
        std::sort(sorted.begin(), sorted.end());
        bool ok = true;
        for (int i = 0; i + 1 < 8; ++i)
            if (sorted[i + 1] - sorted[i] < min_gap) ok = false;
        if (!ok) continue;
        Draw d;
        d.t = {lat.t_values[ut(engine)], lat.t_values[ut(engine)]};
        for (int i = 0; i < 4; ++i) {
            d.H[i] = vals[i];
            d.Hp[i] = vals[4 + i];
        }
        draws.push_back(d);
    }

    auto run = [&](const KernelQuad& quad, std::vector<LemmaTuple>* out) {
        InnerProductCache cache(quad);
        double mx = 0.0;
        for (const auto& d : draws) {
            LemmaTuple tup;
            tup.params = {d.t[0], d.t[1], d.H[0], d.H[1], d.H[2], d.H[3],
                          d.Hp[0], d.Hp[1], d.Hp[2], d.Hp[3]};
            double scale = 0.0;
            tup.lhs = clamp_l2(fourpoint_lhs_separable(cache, d.t, d.H, d.Hp, &scale), scale);
            tup.rhs = fourpoint_rhs(d.H, d.Hp);
            tup.ratio = tup.lhs / tup.rhs;
            mx = std::max(mx, tup.ratio);
            if (out) out->push_back(tup);
        }
        return mx;
    };
    run(q, &rep.tuples);
    finalize(rep, run(q.refined(), nullptr));
    return rep;
}

LemmaReport check_mbs_increment(const HurstFunctionSpec& spec, const Grid2D& grid,
                                const KernelQuad& q) {
    LemmaReport rep;
    rep.lemma = "mbs";
    rep.param_names = {"s1", "s2", "t1", "t2"};

    const auto validation = validate_hurst(spec, grid);
    if (!validation.pass())
        throw std::invalid_argument("check_mbs_increment: Hurst spec failed validation");

    static constexpr double sign[4] = {1.0, -1.0, -1.0, 1.0};
    auto run = [&](const KernelQuad& quad, std::vector<LemmaTuple>* out) {
        InnerProductCache cache(quad);
        double mx = 0.0;
        for (int s1 = 0; s1 < grid.rows(); ++s1)
            for (int s2 = 0; s2 < grid.cols(); ++s2)
                for (int t1 = s1 + 1; t1 < grid.rows(); ++t1)
                    for (int t2 = s2 + 1; t2 < grid.cols(); ++t2) {
                        const double xs = grid.x(s1), ys = grid.y(s2);
                        const double xt = grid.x(t1), yt = grid.y(t2);
                        // corners t, (s1,t2), (t1,s2), s
                        const std::array<std::array<double, 2>, 4> corner{
                            {{xt, yt}, {xs, yt}, {xt, ys}, {xs, ys}}};
                        std::array<std::array<double, 2>, 4> hv;
                        for (int k = 0; k < 4; ++k)
                            hv[k] = spec.evaluator(corner[k][0], corner[k][1]);
                        double lhs = 0.0, scale = 0.0;
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b) {
                                const double term =
                                    sign[a] * sign[b] *
                                    cache.get(corner[a][0], hv[a][0], corner[b][0], hv[b][0]) *
                                    cache.get(corner[a][1], hv[a][1], corner[b][1], hv[b][1]);
                                lhs += term;
                                scale += std::abs(term);
                            }
                        LemmaTuple tup;
                        tup.params = {xs, ys, xt, yt};
                        tup.lhs = clamp_l2(lhs, scale);
                        tup.rhs = std::pow((xt - xs) * (yt - ys), 2.0 * spec.mu);
                        tup.ratio = tup.lhs / tup.rhs;
                        mx = std::max(mx, tup.ratio);
                        if (out) out->push_back(tup);
                    }
        return mx;
    };
    run(q, &rep.tuples);
    finalize(rep, run(q.refined(), nullptr));
    return rep;
}

LemmaReport check_int_finiteness(const LemmaLattice& lat, const KernelQuad& q) {
    LemmaReport rep;
    rep.lemma = "int";
    rep.param_names = {"t", "h", "order"};  // order: 0 = f, 1 = f_h, 2 = f_hh
    const KernelQuad fine = q.refined();
    bool ok = true;
    double max_drift = 0.0;
    for (double t : lat.t_values)
        for (double h : lat.h_values) {
            const double base[3] = {kernel_l2_norm(t, h, q), kernel_deriv_l2_norms(t, h, q).first,
                                    kernel_deriv_l2_norms(t, h, q).second};
            const auto dref = kernel_deriv_l2_norms(t, h, fine);
            const double refd[3] = {kernel_l2_norm(t, h, fine), dref.first, dref.second};
            for (int k = 0; k < 3; ++k) {
                LemmaTuple tup;
                tup.params = {t, h, static_cast<double>(k)};
                tup.lhs = base[k];
                tup.rhs = refd[k];
                tup.ratio = std::abs(base[k] - refd[k]) / refd[k];
                max_drift = std::max(max_drift, tup.ratio);
                ok = ok && std::isfinite(base[k]) && base[k] > 0.0 && tup.ratio <= 1e-3;
                rep.tuples.push_back(tup);
            }
        }
    rep.max_ratio = max_drift;
    rep.refined_max_ratio = max_drift;
    rep.stability = 0.0;
    rep.pass = ok;
    return rep;
}

LemmaReport run_lemma_check(const std::string& id, const LemmaLattice& lat, const KernelQuad& q,
                            Seed seed) {
    if (id == "fbm1") return check_fbm_time_increment(lat, q);
    if (id == "fbm2") return check_fbm_hurst_increment(lat, q);
    if (id == "fbm3") return check_fbm_mixed_increment(lat, q);
    if (id == "fbs") return check_fbs_fourpoint(lat, 200, 0.02, seed, q);
    if (id == "mbs") {
        Grid2D grid(1.0, 1.0, 8, 8);
        return check_mbs_increment(bilinear_hurst_spec(1.0, 1.0, lat.mu, lat.nu), grid, q);
    }
    if (id == "int") return check_int_finiteness(lat, q);
    throw std::invalid_argument("unknown lemma id '" + id +
                                "' (expected fbm1|fbm2|fbm3|fbs|mbs|int)");
}

void write_lemma_csv(const LemmaReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "lemma";
    for (const auto& n : rep.param_names) out << ',' << n;
    out << ",lhs,rhs,ratio\n";
    for (const auto& t : rep.tuples) {
        out << rep.lemma;
        for (double v : t.params) out << ',' << format_double(v);
        out << ',' << format_double(t.lhs) << ',' << format_double(t.rhs) << ','
            << format_double(t.ratio) << '\n';
    }
}

}  // namespace fracsheet
