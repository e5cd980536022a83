// fracsheet command line: generate | smooth | norm | converge | lemma-check.
// Built entirely on the C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracsheet.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGateFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(fs_status s) {
    switch (s) {
        case FS_OK: return kExitOk;
        case FS_ERR_CONFIG: return kExitConfig;
        case FS_ERR_IO: return kExitConfig;
        case FS_ERR_NUMERICAL: return kExitNumerical;
        default: return kExitConfig;
    }
}

int report_failure(fs_status s) {
    std::fprintf(stderr, "error (%s): %s\n", fs_status_name(s), fs_last_error());
    return exit_code_for(s);
}

struct FieldDeleter {
    void operator()(fs_field* f) const { fs_field_destroy(f); }
};
struct GridDeleter {
    void operator()(fs_grid* g) const { fs_grid_destroy(g); }
};
using FieldPtr = std::unique_ptr<fs_field, FieldDeleter>;
using GridPtr = std::unique_ptr<fs_grid, GridDeleter>;

std::string replica_path(const std::string& base, int replica, int total) {
    if (total == 1) return base;
    const auto dot = base.rfind('.');
    const std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
    const std::string ext = dot == std::string::npos ? "" : base.substr(dot);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "_%04d", replica);
    return stem + buf + ext;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional / multifractional Brownian sheet toolkit"};
    app.require_subcommand(1);

    // ---- generate ----
    auto* generate = app.add_subcommand("generate", "sample a field and write CSV");
    std::string gen_field = "fbs";
    double gT1 = 1.0, gT2 = 1.0, gH1 = 0.7, gH2 = 0.7, g_mu = 0.525, g_nu = 0.85;
    int gn1 = 33, gn2 = 33, gpad1 = 0, gpad2 = 0, g_replicas = 1;
    std::uint64_t g_seed = 42;
    std::string gen_out = "field.csv", g_hurst = "constant";
    generate->add_option("--field", gen_field, "fbs|mbs|bilinear")->capture_default_str();
    generate->add_option("--T1", gT1)->capture_default_str();
    generate->add_option("--T2", gT2)->capture_default_str();
    generate->add_option("--n1", gn1)->capture_default_str();
    generate->add_option("--n2", gn2)->capture_default_str();
    generate->add_option("--pad1", gpad1)->capture_default_str();
    generate->add_option("--pad2", gpad2)->capture_default_str();
    generate->add_option("--H1", gH1)->capture_default_str();
    generate->add_option("--H2", gH2)->capture_default_str();
    generate->add_option("--hurst", g_hurst, "mbs Hurst preset: constant|bilinear")
        ->capture_default_str();
    generate->add_option("--mu", g_mu, "mbs window lower bound")->capture_default_str();
    generate->add_option("--nu", g_nu, "mbs window upper bound")->capture_default_str();
    generate->add_option("--seed", g_seed)->capture_default_str();
    generate->add_option("--replicas", g_replicas, "one CSV per replica (suffix _NNNN)")
        ->capture_default_str();
    generate->add_option("--out", gen_out, "output CSV path")->capture_default_str();

    // ---- smooth ----
    auto* smooth_cmd = app.add_subcommand("smooth", "epsilon-average a field CSV");
    std::string sm_in, sm_out = "smoothed.csv";
    int sm_k = 1;
    smooth_cmd->add_option("--in", sm_in, "input CSV (padded field)")->required();
    smooth_cmd->add_option("--k", sm_k, "window cells per axis (eps = k*h)")->required();
    smooth_cmd->add_option("--out", sm_out)->capture_default_str();

    // ---- norm ----
    auto* norm_cmd = app.add_subcommand("norm", "evaluate a Besov-type norm on a field CSV");
    std::string nm_in, nm_kind = "w1";
    double nb1 = 0.3, nb2 = 0.3;
    int nm_stride = 0;
    norm_cmd->add_option("--in", nm_in, "input CSV")->required();
    norm_cmd->add_option("--beta1", nb1)->capture_default_str();
    norm_cmd->add_option("--beta2", nb2)->capture_default_str();
    norm_cmd->add_option("--norm", nm_kind, "w0|w1")->capture_default_str();
    norm_cmd->add_option("--stride", nm_stride, "0 auto, 1 exhaustive, >1 two-stage")
        ->capture_default_str();

    // ---- converge ----
    auto* converge = app.add_subcommand("converge", "run the convergence experiment");
    std::string cv_config, cv_out;
    converge->add_option("--config", cv_config, "key=value config file")->required();
    converge->add_option("--out", cv_out, "override output directory");

    // ---- lemma-check ----
    auto* lemma = app.add_subcommand("lemma-check", "verify one appendix bound");
    std::string lm_id, lm_config, lm_out = "lemma.csv";
    lemma->add_option("--lemma", lm_id, "fbm1|fbm2|fbm3|fbs|mbs|int")->required();
    lemma->add_option("--config", lm_config, "optional lattice config");
    lemma->add_option("--out", lm_out, "per-tuple CSV output")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        fs_grid* grid_raw = nullptr;
        fs_status s = fs_grid_create(gT1, gT2, gn1, gn2, gpad1, gpad2, &grid_raw);
        if (s != FS_OK) return report_failure(s);
        GridPtr grid(grid_raw);
        for (int r = 0; r < g_replicas; ++r) {
            fs_field* field_raw = nullptr;
            if (gen_field == "fbs") {
                s = fs_sample_fbs(grid.get(), gH1, gH2, g_seed, static_cast<std::uint64_t>(r),
                                  &field_raw);
            } else if (gen_field == "mbs") {
                s = fs_sample_mbs(grid.get(), g_hurst.c_str(), gH1, gH2, g_mu, g_nu, g_seed,
                                  static_cast<std::uint64_t>(r), &field_raw);
            } else if (gen_field == "bilinear") {
                s = fs_field_bilinear(grid.get(), &field_raw);
            } else {
                std::fprintf(stderr, "error: unknown field type '%s' (fbs|mbs|bilinear)\n",
                             gen_field.c_str());
                return kExitConfig;
            }
            if (s != FS_OK) return report_failure(s);
            FieldPtr field(field_raw);
            const std::string path = replica_path(gen_out, r, g_replicas);
            s = fs_field_write_csv(field.get(), path.c_str());
            if (s != FS_OK) return report_failure(s);
            std::printf("wrote %s\n", path.c_str());
        }
        return kExitOk;
    }

    if (smooth_cmd->parsed()) {
        fs_field* in_raw = nullptr;
        fs_status s = fs_field_read_csv(sm_in.c_str(), &in_raw);
        if (s != FS_OK) return report_failure(s);
        FieldPtr in(in_raw);
        fs_field* padded_raw = nullptr;
        s = fs_field_assume_padding(in.get(), sm_k, sm_k, &padded_raw);
        if (s != FS_OK) return report_failure(s);
        FieldPtr padded(padded_raw);
        fs_field* out_raw = nullptr;
        s = fs_smooth(padded.get(), sm_k, &out_raw);
        if (s != FS_OK) return report_failure(s);
        FieldPtr out(out_raw);
        s = fs_field_write_csv(out.get(), sm_out.c_str());
        if (s != FS_OK) return report_failure(s);
        std::printf("wrote %s\n", sm_out.c_str());
        return kExitOk;
    }

    if (norm_cmd->parsed()) {
        if (nm_kind != "w0" && nm_kind != "w1") {
            std::fprintf(stderr, "error: --norm must be w0 or w1\n");
            return kExitConfig;
        }
        fs_field* in_raw = nullptr;
        fs_status s = fs_field_read_csv(nm_in.c_str(), &in_raw);
        if (s != FS_OK) return report_failure(s);
        FieldPtr in(in_raw);
        fs_norm_report rep;
        s = nm_kind == "w0" ? fs_w0_norm(in.get(), nb1, nb2, nm_stride, &rep)
                            : fs_w1_norm(in.get(), nb1, nb2, nm_stride, &rep);
        if (s != FS_OK) return report_failure(s);
        std::printf("norm,value,term1,term2,term3,term4,s1,s2,t1,t2\n");
        std::printf("%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    nm_kind.c_str(), rep.value, rep.terms[0], rep.terms[1], rep.terms[2],
                    rep.terms[3], rep.s1, rep.s2, rep.t1, rep.t2);
        return kExitOk;
    }

    if (converge->parsed()) {
        fs_converge_summary sum;
        const fs_status s = fs_converge_run(cv_config.c_str(),
                                            cv_out.empty() ? nullptr : cv_out.c_str(), &sum);
        if (s != FS_OK) return report_failure(s);
        std::printf("levels=%d replicas=%d a=%.17g slope=%.17g ref_slope=%.17g\n", sum.levels,
                    sum.replicas, sum.a_threshold, sum.slope, sum.ref_slope);
        const bool pass = sum.slope_pass && sum.medians_decreasing && sum.exceedance_monotone;
        std::printf("medians_decreasing=%s exceedance_monotone=%s slope_gate=%s\n",
                    sum.medians_decreasing ? "yes" : "no", sum.exceedance_monotone ? "yes" : "no",
                    sum.slope_pass ? "pass" : "fail");
        std::printf("%s\n", pass ? "PASS" : "FAIL");
        return pass ? kExitOk : kExitGateFailed;
    }

    if (lemma->parsed()) {
        fs_lemma_summary sum;
        const fs_status s =
            fs_lemma_check(lm_id.c_str(), lm_config.empty() ? nullptr : lm_config.c_str(),
                           lm_out.c_str(), &sum);
        if (s != FS_OK) return report_failure(s);
        std::printf("lemma=%s tuples=%d both_zero=%d max_ratio=%.17g stability=%.6g %s\n",
                    lm_id.c_str(), sum.tuple_count, sum.both_zero_count, sum.max_ratio,
                    sum.stability, sum.pass ? "PASS" : "FAIL");
        std::printf("wrote %s\n", lm_out.c_str());
        return sum.pass ? kExitOk : kExitGateFailed;
    }

    return kExitConfig;
}
