#pragma once

#include <string>
#include <vector>

#include "fracsheet/generators.hpp"
#include "fracsheet/grid.hpp"
#include "fracsheet/kernel.hpp"
#include "fracsheet/rng.hpp"

namespace fracsheet {

/// Default evaluation lattice for the appendix checks.
struct LemmaLattice {
    std::vector<double> t_values{0.25, 0.5, 0.75, 1.0};
    std::vector<double> h_values{0.55, 0.6, 0.65, 0.7, 0.75, 0.8};
    double mu = 0.525;
    double nu = 0.85;
};

struct LemmaTuple {
    std::vector<double> params;
    double lhs = 0.0, rhs = 0.0;
    double ratio = 0.0;   // lhs / rhs where rhs > 0
    bool both_zero = false;
};

/// Outcome of one bound check: per-tuple ratios at the base quadrature, the
/// max ratio again at doubled (M, n_u), and the pass flag (all ratios
/// finite and non-negative, max ratio stable within 5 %).
struct LemmaReport {
    std::string lemma;
    std::vector<std::string> param_names;
    std::vector<LemmaTuple> tuples;
    double max_ratio = 0.0;
    double refined_max_ratio = 0.0;
    double stability = 0.0;  // |refined - base| / base
    int both_zero_count = 0;
    bool pass = false;
};

/// Quadratures of the three squared kernel differences behind the fbm
/// bounds; exposed for oracle tests and the boundedness probes.
double fbm_time_diff_l2(double t1, double t2, double H, const KernelQuad& q);
double fbm_hurst_diff_l2(double t, double H1, double H2, const KernelQuad& q);
double fbm_mixed_diff_l2(double t1, double t2, double H1, double H2, const KernelQuad& q);

/// E(Z_{t1}^H - Z_{t2}^H)^2 <= K1 |t1-t2|^{2H}. The continuum ratio is
/// exactly C_H^{-2}, which makes this the end-to-end quadrature gauge.
LemmaReport check_fbm_time_increment(const LemmaLattice& lat, const KernelQuad& q);

/// E(Z_t^{H1} - Z_t^{H2})^2 <= K2 (H1-H2)^2.
LemmaReport check_fbm_hurst_increment(const LemmaLattice& lat, const KernelQuad& q);

/// E(Z_{t1}^{H1}-Z_{t2}^{H1}-Z_{t1}^{H2}+Z_{t2}^{H2})^2
///   <= K3 (t1-t2)^{2 mu} (H1-H2)^2.
LemmaReport check_fbm_mixed_increment(const LemmaLattice& lat, const KernelQuad& q);

/// Four-point bound for the two-parameter kernel family; `count` randomized
/// Hurst tuples with mutual gaps >= min_gap. The double integral expands
/// into 16 products of cached 1-D inner products.
LemmaReport check_fbs_fourpoint(const LemmaLattice& lat, int count, double min_gap, Seed seed,
                                const KernelQuad& q);

/// Same four-point integrand by direct 2-D tensor quadrature; spot-check
/// oracle for the separable expansion.
double fbs_fourpoint_direct(std::array<double, 2> t, const std::array<double, 4>& H,
                            const std::array<double, 4>& Hp, const KernelQuad& q);

/// E(delta_s Y_t)^2 <= C (|t1-s1||t2-s2|)^{2 mu} for the multifractional
/// sheet, computed deterministically from kernel inner products on all
/// grid pairs.
LemmaReport check_mbs_increment(const HurstFunctionSpec& spec, const Grid2D& grid,
                                const KernelQuad& q);

/// Finiteness/stability of the three kernel integrals (f, f_h, f_hh);
/// ratio column reports the relative refinement drift.
LemmaReport check_int_finiteness(const LemmaLattice& lat, const KernelQuad& q);

/// Dispatch by CLI lemma id: fbm1 fbm2 fbm3 fbs mbs int.
LemmaReport run_lemma_check(const std::string& id, const LemmaLattice& lat, const KernelQuad& q,
                            Seed seed);

/// CSV rows `lemma,params...,lhs,rhs,ratio`.
void write_lemma_csv(const LemmaReport& rep, const std::string& path);

}  // namespace fracsheet
