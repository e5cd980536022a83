#include "fracsheet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "fracsheet/config.hpp"
#include "fracsheet/csv.hpp"
#include "fracsheet/errors.hpp"
#include "fracsheet/smoothing.hpp"
#include "fracsheet/threads.hpp"

namespace fracsheet {

void ConvergenceParams::derive_defaults() {
    const double maxb = std::max(beta1, beta2);
    delta = 0.5 * (lambda - 2.0 * maxb);
    theta = 0.25 * (lambda - 2.0 * maxb - delta);
}

void ConvergenceParams::validate() const {
    if (!(lambda > 1.0))
        throw std::invalid_argument("convergence: lambda must exceed 1, got " +
                                    std::to_string(lambda));
    const double half = 0.5 * lambda;
    if (!(beta1 > 0.0 && beta1 < half && beta2 > 0.0 && beta2 < half))
        throw std::invalid_argument("convergence: betas must lie in (0, lambda/2) = (0, " +
                                    std::to_string(half) + ")");
    const double gap = lambda - 2.0 * std::max(beta1, beta2);
    if (!(delta > 0.0 && delta < gap))
        throw std::invalid_argument("convergence: delta must lie in (0, " + std::to_string(gap) +
                                    ")");
    if (!(theta > 0.0 && theta < 0.5 * (gap - delta)))
        throw std::invalid_argument("convergence: theta must lie in (0, " +
                                    std::to_string(0.5 * (gap - delta)) + ")");
    if (!(gamma > 0.0)) throw std::invalid_argument("convergence: gamma must be positive");
    if (!(hol1() > 0.0 && hol2() > 0.0))
        throw std::invalid_argument("convergence: Hoelder exponent chain broke");
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("convergence: need 1 <= n_min <= n_max");
    if (margin < 2) throw std::invalid_argument("convergence: margin must be >= 2");
    if (replicas < 1) throw std::invalid_argument("convergence: need at least one replica");
    if (n_max - n_min > 28 || n_max + margin > 28)
        throw std::invalid_argument("convergence: schedule exponents too large");
    // The dyadic mesh must tile both extents exactly.
    const double scale = std::ldexp(1.0, n_max + margin);
    for (double T : {T1, T2}) {
        const double cells = T * scale;
        if (std::abs(cells - std::round(cells)) > 1e-9 || std::round(cells) < 1)
            throw std::invalid_argument(
                "convergence: extent " + std::to_string(T) + " is not a multiple of the mesh 2^-" +
                std::to_string(n_max + margin) + "; schedule and mesh are misaligned");
    }
}

namespace {

struct Schedule {
    Grid2D grid;
    std::vector<int> k_cells;  // per level, window cells
    std::vector<double> eps;
};

Schedule build_schedule(const ConvergenceParams& cp) {
    const double h = std::ldexp(1.0, -(cp.n_max + cp.margin));
    const int n1 = static_cast<int>(std::round(cp.T1 / h)) + 1;
    const int n2 = static_cast<int>(std::round(cp.T2 / h)) + 1;
    const int pad = 1 << (cp.n_max + cp.margin - cp.n_min);  // covers eps_{n_min}
    Schedule s{Grid2D(cp.T1, cp.T2, n1, n2, pad, pad), {}, {}};
    for (int n = cp.n_min; n <= cp.n_max; ++n) {
        s.k_cells.push_back(1 << (cp.n_max + cp.margin - n));
        s.eps.push_back(std::ldexp(1.0, -n));
    }
    return s;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile90(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t idx =
        static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(v.size()))) - 1;
    return v[std::min(idx, v.size() - 1)];
}

}  // namespace

ConvergenceReport run_convergence(const ConvergenceParams& cp, const FieldChoice& field) {
    cp.validate();
    const Schedule sched = build_schedule(cp);
    const int levels = static_cast<int>(sched.k_cells.size());
    const int R = cp.replicas;

    // Per-replica sampling; mbs shares the driving u-grids across replicas.
    std::array<UGrid, 2> ugrids;
    if (field.kind == FieldChoice::Kind::mbs) {
        const auto validation = validate_hurst(field.hurst, sched.grid);
        if (!validation.pass())
            throw std::invalid_argument("run_convergence: Hurst spec failed validation");
        ugrids = mbs_ugrids(sched.grid, field.hurst);
    }

    BesovParams bp(cp.beta1, cp.beta2);
    bp.stride = cp.stride;
    bp.threads = 1;  // replicas own the parallelism

    std::vector<double> norms(static_cast<std::size_t>(levels) * R, 0.0);
    parallel_chunks(0, R, cp.threads, [&](int, int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            FieldSample sample = [&] {
                switch (field.kind) {
                    case FieldChoice::Kind::fbs:
                        return sample_fbs(sched.grid, field.H, cp.seed.with_stream(r));
                    case FieldChoice::Kind::mbs:
                        return sample_mbs(sched.grid, field.hurst,
                                          sample_wiener(ugrids[0], ugrids[1],
                                                        cp.seed.with_stream(r)));
                    case FieldChoice::Kind::bilinear:
                    default:
                        return sample_function(sched.grid,
                                               [](double a, double b) { return a * b; });
                }
            }();
            for (int l = 0; l < levels; ++l) {
                const FieldSample smoothed = smooth(sample, SmoothingParams(sched.k_cells[l]));
                const FieldSample diff = difference_field(sample, smoothed);
                norms[static_cast<std::size_t>(l) * R + r] = w1_norm(diff, bp).value;
            }
        }
    });

    ConvergenceReport rep;
    rep.rows.reserve(norms.size());
    for (int l = 0; l < levels; ++l)
        for (int r = 0; r < R; ++r)
            rep.rows.push_back({cp.n_min + l, sched.eps[l], r,
                                norms[static_cast<std::size_t>(l) * R + r]});

    for (int l = 0; l < levels; ++l) {
        std::vector<double> level(norms.begin() + static_cast<std::ptrdiff_t>(l) * R,
                                  norms.begin() + static_cast<std::ptrdiff_t>(l + 1) * R);
        LevelStats st;
        st.n = cp.n_min + l;
        st.eps = sched.eps[l];
        st.median = median_of(level);
        st.q90 = quantile90(level);
        st.p_exceed = 0.0;  // filled after the threshold is known
        rep.levels.push_back(st);
    }

    rep.a_threshold = cp.a_mode == ConvergenceParams::AMode::fixed ? cp.a_value
                                                                   : rep.levels.front().median;
    for (int l = 0; l < levels; ++l) {
        int count = 0;
        for (int r = 0; r < R; ++r)
            if (norms[static_cast<std::size_t>(l) * R + r] >= rep.a_threshold) ++count;
        rep.levels[l].p_exceed = static_cast<double>(count) / R;
    }

    const RateFit fit = fit_rate(rep.levels, cp);
    rep.slope = fit.slope;
    rep.ref_slope = fit.reference;
    rep.slope_pass = fit.pass;

    // Almost-sure rate: per fixed replica, the ratio sequence against
    // eps^{delta/2} |ln eps|^{(1+gamma)/p} must be bounded; record its max
    // and where it is attained.
    const double logexp = (1.0 + cp.gamma) / cp.p();
    rep.rate_max_ratio.assign(R, 0.0);
    rep.rate_argmax_n.assign(R, cp.n_min);
    for (int r = 0; r < R; ++r) {
        double best = -1.0;
        int best_n = cp.n_min;
        for (int l = 0; l < levels; ++l) {
            const double eps = sched.eps[l];
            const double bound = std::pow(eps, 0.5 * cp.delta) *
                                 std::pow(std::abs(std::log(eps)), logexp);
            const double ratio = norms[static_cast<std::size_t>(l) * R + r] / bound;
            if (ratio > best) {
                best = ratio;
                best_n = cp.n_min + l;
            }
        }
        rep.rate_max_ratio[r] = best;
        rep.rate_argmax_n[r] = best_n;
    }
    return rep;
}

RateFit fit_rate(const std::vector<LevelStats>& levels, const ConvergenceParams& cp) {
    if (levels.size() < 3)
        throw std::invalid_argument("fit_rate: need at least 3 schedule points");
    RateFit fit;
    fit.reference = 0.5 * cp.delta;

    bool all_zero = true;
    for (const auto& l : levels)
        if (l.median != 0.0) all_zero = false;
    if (all_zero) {
        fit.slope = std::numeric_limits<double>::infinity();
        fit.pass = true;
        return fit;
    }
    for (const auto& l : levels)
        if (!(l.median > 0.0))
            throw NumericalError("fit_rate: non-positive median at n = " + std::to_string(l.n));

    // Least squares of y = log2 median against x = -n.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(levels.size());
    for (const auto& l : levels) {
        const double x = -static_cast<double>(l.n);
        const double y = std::log2(l.median);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.pass = fit.slope >= fit.reference - 0.1;
    return fit;
}

void write_convergence_csv(const ConvergenceReport& rep, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/report.csv");
        if (!out) throw std::runtime_error("cannot write " + dir + "/report.csv");
        out << "n,eps,replica,norm\n";
        for (const auto& r : rep.rows)
            out << r.n << ',' << format_double(r.eps) << ',' << r.replica << ','
                << format_double(r.norm) << '\n';
    }
    {
        std::ofstream out(dir + "/summary.csv");
        if (!out) throw std::runtime_error("cannot write " + dir + "/summary.csv");
        out << "n,eps,median,q90,p_exceed,slope,ref_slope\n";
        for (const auto& l : rep.levels)
            out << l.n << ',' << format_double(l.eps) << ',' << format_double(l.median) << ','
                << format_double(l.q90) << ',' << format_double(l.p_exceed) << ','
                << format_double(rep.slope) << ',' << format_double(rep.ref_slope) << '\n';
    }
}

const std::set<std::string>& valid_converge_keys() {
    static const std::set<std::string> keys{
        "field", "H1", "H2", "hurst", "T1", "T2", "nmax_exponent", "nmin_exponent",
        "margin", "beta1", "beta2", "delta", "theta_frac", "gamma", "replicas",
        "a_mode", "a_value", "seed", "out", "stride", "threads", "mu", "nu"};
    return keys;
}

ConvergeSetup convergence_from_config(const std::map<std::string, std::string>& cfg) {
    reject_unknown_keys(cfg, valid_converge_keys());
    ConvergeSetup setup;
    auto& p = setup.params;
    auto& f = setup.field;

    const std::string kind = config_string(cfg, "field", "fbs");
    const double T1 = config_double(cfg, "T1", 1.0);
    const double T2 = config_double(cfg, "T2", 1.0);
    const double mu = config_double(cfg, "mu", 0.525);
    const double nu = config_double(cfg, "nu", 0.85);

    if (kind == "fbs") {
        f.kind = FieldChoice::Kind::fbs;
        f.H = HurstPair(config_double(cfg, "H1", 0.7), config_double(cfg, "H2", 0.7));
        p.lambda = f.H.lambda();
    } else if (kind == "mbs") {
        f.kind = FieldChoice::Kind::mbs;
        f.hurst = hurst_preset(config_string(cfg, "hurst", "bilinear"), T1, T2,
                               config_double(cfg, "H1", 0.7), config_double(cfg, "H2", 0.7));
        f.hurst.mu = mu;
        f.hurst.nu = nu;
        p.lambda = 2.0 * mu;
    } else if (kind == "bilinear") {
        f.kind = FieldChoice::Kind::bilinear;
        p.lambda = 1.4;  // chain placeholder; the difference field is exactly zero
    } else {
        throw ConfigError("config key 'field': expected fbs|mbs|bilinear, got '" + kind + "'");
    }

    p.T1 = T1;
    p.T2 = T2;
    p.beta1 = config_double(cfg, "beta1", 0.3);
    p.beta2 = config_double(cfg, "beta2", 0.3);
    p.n_max = static_cast<int>(config_long(cfg, "nmax_exponent", 5));
    p.n_min = static_cast<int>(config_long(cfg, "nmin_exponent", 1));
    p.margin = static_cast<int>(config_long(cfg, "margin", 2));
    p.replicas = static_cast<int>(config_long(cfg, "replicas", 50));
    p.gamma = config_double(cfg, "gamma", 1.0);
    p.stride = static_cast<int>(config_long(cfg, "stride", 0));
    p.threads = static_cast<int>(config_long(cfg, "threads", 0));
    p.seed = Seed{static_cast<std::uint64_t>(config_long(cfg, "seed", 42)), 0};

    const double maxb = std::max(p.beta1, p.beta2);
    p.delta = config_double(cfg, "delta", 0.5 * (p.lambda - 2.0 * maxb));
    const double theta_frac = config_double(cfg, "theta_frac", 0.5);
    if (!(theta_frac > 0.0 && theta_frac < 1.0))
        throw ConfigError("config key 'theta_frac': must lie in (0,1)");
    p.theta = theta_frac * 0.5 * (p.lambda - 2.0 * maxb - p.delta);

    const std::string a_mode = config_string(cfg, "a_mode", "auto-median");
    if (a_mode == "auto-median") {
        p.a_mode = ConvergenceParams::AMode::auto_median;
    } else if (a_mode == "fixed") {
        p.a_mode = ConvergenceParams::AMode::fixed;
        p.a_value = config_double(cfg, "a_value", 0.0);
        if (!(p.a_value > 0.0)) throw ConfigError("config key 'a_value': must be positive");
    } else {
        throw ConfigError("config key 'a_mode': expected auto-median|fixed");
    }

    setup.out_dir = config_string(cfg, "out", ".");
    return setup;
}

}  // namespace fracsheet
