#include "fracsheet.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <map>
#include <string>

#include "fracsheet/besov.hpp"
#include "fracsheet/config.hpp"
#include "fracsheet/csv.hpp"
#include "fracsheet/errors.hpp"
#include "fracsheet/experiments.hpp"
#include "fracsheet/field.hpp"
#include "fracsheet/generators.hpp"
#include "fracsheet/grid.hpp"
#include "fracsheet/lemma_checks.hpp"
#include "fracsheet/smoothing.hpp"

using namespace fracsheet;

struct fs_grid {
    Grid2D grid;
};
struct fs_field {
    FieldSample field;
};

namespace {

thread_local std::string g_last_error = "no error";

fs_status fail(fs_status code, const char* what) {
    g_last_error = what;
    return code;
}

// Maps C++ exceptions onto the C status codes.
template <typename Fn>
fs_status guarded(Fn&& fn) {
    try {
        fn();
        return FS_OK;
    } catch (const ConfigError& e) {
        return fail(FS_ERR_CONFIG, e.what());
    } catch (const TruncationError& e) {
        return fail(FS_ERR_NUMERICAL, e.what());
    } catch (const NumericalError& e) {
        return fail(FS_ERR_NUMERICAL, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(FS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(FS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(FS_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(FS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FS_ERR_INTERNAL, "unknown error");
    }
}

fs_status require(bool cond, const char* what) {
    return cond ? FS_OK : fail(FS_ERR_INVALID_ARGUMENT, what);
}

void fill_report(fs_norm_report* out, const NormReport& rep, const Grid2D& grid) {
    out->value = rep.value;
    for (int k = 0; k < 4; ++k) out->terms[k] = rep.terms[k];
    out->s1 = grid.x(rep.s[0]);
    out->s2 = grid.y(rep.s[1]);
    out->t1 = grid.x(rep.t[0]);
    out->t2 = grid.y(rep.t[1]);
}

LemmaLattice lattice_from_config(const std::map<std::string, std::string>& cfg) {
    LemmaLattice lat;
    auto parse_list = [&](const std::string& key, std::vector<double>& dst) {
        const auto it = cfg.find(key);
        if (it == cfg.end()) return;
        dst.clear();
        std::size_t pos = 0;
        const std::string& s = it->second;
        while (pos < s.size()) {
            std::size_t end = s.find(' ', pos);
            if (end == std::string::npos) end = s.size();
            if (end > pos) dst.push_back(std::stod(s.substr(pos, end - pos)));
            pos = end + 1;
        }
        if (dst.empty()) throw ConfigError("config key '" + key + "': empty list");
    };
    parse_list("t_values", lat.t_values);
    parse_list("h_values", lat.h_values);
    lat.mu = config_double(cfg, "mu", lat.mu);
    lat.nu = config_double(cfg, "nu", lat.nu);
    return lat;
}

}  // namespace

extern "C" {

const char* fs_last_error(void) { return g_last_error.c_str(); }

const char* fs_status_name(fs_status status) {
    switch (status) {
        case FS_OK: return "ok";
        case FS_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case FS_ERR_CONFIG: return "config";
        case FS_ERR_NUMERICAL: return "numerical";
        case FS_ERR_IO: return "io";
        case FS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* fs_version(void) { return "0.1.0"; }

fs_status fs_grid_create(double T1, double T2, int n1, int n2, int pad1, int pad2,
                         fs_grid** out) {
    if (fs_status s = require(out != nullptr, "fs_grid_create: out is NULL")) return s;
    return guarded([&] { *out = new fs_grid{Grid2D(T1, T2, n1, n2, pad1, pad2)}; });
}

void fs_grid_destroy(fs_grid* grid) { delete grid; }
int fs_grid_rows(const fs_grid* grid) { return grid ? grid->grid.rows() : 0; }
int fs_grid_cols(const fs_grid* grid) { return grid ? grid->grid.cols() : 0; }
double fs_grid_mesh1(const fs_grid* grid) { return grid ? grid->grid.mesh1() : 0.0; }
double fs_grid_mesh2(const fs_grid* grid) { return grid ? grid->grid.mesh2() : 0.0; }

void fs_field_destroy(fs_field* field) { delete field; }
int fs_field_rows(const fs_field* field) { return field ? field->field.rows() : 0; }
int fs_field_cols(const fs_field* field) { return field ? field->field.cols() : 0; }

fs_status fs_field_value(const fs_field* field, int i, int j, double* out) {
    if (fs_status s = require(field && out, "fs_field_value: NULL argument")) return s;
    if (fs_status s = require(i >= 0 && i < field->field.rows() && j >= 0 &&
                                  j < field->field.cols(),
                              "fs_field_value: index out of range"))
        return s;
    *out = field->field(i, j);
    return FS_OK;
}

fs_status fs_sample_fbs(const fs_grid* grid, double H1, double H2, uint64_t seed,
                        uint64_t stream, fs_field** out) {
    if (fs_status s = require(grid && out, "fs_sample_fbs: NULL argument")) return s;
    return guarded([&] {
        *out = new fs_field{sample_fbs(grid->grid, HurstPair(H1, H2), Seed{seed, stream})};
    });
}

fs_status fs_sample_mbs(const fs_grid* grid, const char* hurst_preset, double H1, double H2,
                        double mu, double nu, uint64_t seed, uint64_t stream, fs_field** out) {
    if (fs_status s = require(grid && out && hurst_preset, "fs_sample_mbs: NULL argument"))
        return s;
    return guarded([&] {
        const auto& g = grid->grid;
        HurstFunctionSpec spec =
            fracsheet::hurst_preset(hurst_preset, g.extent1(), g.extent2(), H1, H2);
        spec.mu = mu;
        spec.nu = nu;
        const auto validation = validate_hurst(spec, g);
        if (!validation.pass())
            throw std::invalid_argument("fs_sample_mbs: Hurst spec failed validation");
        const auto ug = mbs_ugrids(g, spec);
        *out = new fs_field{sample_mbs(g, spec, sample_wiener(ug[0], ug[1], Seed{seed, stream}))};
    });
}

fs_status fs_field_bilinear(const fs_grid* grid, fs_field** out) {
    if (fs_status s = require(grid && out, "fs_field_bilinear: NULL argument")) return s;
    return guarded([&] {
        *out = new fs_field{
            sample_function(grid->grid, [](double a, double b) { return a * b; })};
    });
}

fs_status fs_smooth(const fs_field* field, int k, fs_field** out) {
    if (fs_status s = require(field && out, "fs_smooth: NULL argument")) return s;
    return guarded([&] { *out = new fs_field{smooth(field->field, SmoothingParams(k))}; });
}

fs_status fs_field_difference(const fs_field* a, const fs_field* b, fs_field** out) {
    if (fs_status s = require(a && b && out, "fs_field_difference: NULL argument")) return s;
    return guarded([&] { *out = new fs_field{difference_field(a->field, b->field)}; });
}

fs_status fs_field_assume_padding(const fs_field* field, int pad1, int pad2, fs_field** out) {
    if (fs_status s = require(field && out, "fs_field_assume_padding: NULL argument")) return s;
    return guarded([&] { *out = new fs_field{field->field.with_padding(pad1, pad2)}; });
}

fs_status fs_field_write_csv(const fs_field* field, const char* path) {
    if (fs_status s = require(field && path, "fs_field_write_csv: NULL argument")) return s;
    return guarded([&] { write_field_csv(field->field, path); });
}

fs_status fs_field_read_csv(const char* path, fs_field** out) {
    if (fs_status s = require(path && out, "fs_field_read_csv: NULL argument")) return s;
    return guarded([&] { *out = new fs_field{read_field_csv(path)}; });
}

fs_status fs_w0_norm(const fs_field* field, double beta1, double beta2, int stride,
                     fs_norm_report* out) {
    if (fs_status s = require(field && out, "fs_w0_norm: NULL argument")) return s;
    return guarded([&] {
        BesovParams p(beta1, beta2);
        p.stride = stride;
        fill_report(out, w0_norm(field->field, p), field->field.grid());
    });
}

fs_status fs_w1_norm(const fs_field* field, double beta1, double beta2, int stride,
                     fs_norm_report* out) {
    if (fs_status s = require(field && out, "fs_w1_norm: NULL argument")) return s;
    return guarded([&] {
        BesovParams p(beta1, beta2);
        p.stride = stride;
        fill_report(out, w1_norm(field->field, p), field->field.grid());
    });
}

fs_status fs_lemma_check(const char* lemma_id, const char* config_path, const char* out_csv,
                         fs_lemma_summary* out) {
    if (fs_status s = require(lemma_id != nullptr, "fs_lemma_check: lemma_id is NULL")) return s;
    return guarded([&] {
        std::map<std::string, std::string> cfg;
        if (config_path) cfg = parse_config_file(config_path);
        reject_unknown_keys(cfg, {"t_values", "h_values", "mu", "nu", "truncation",
                                  "nodes_per_unit", "seed", "tuples", "min_gap"});
        const LemmaLattice lat = lattice_from_config(cfg);
        const double h_max = *std::max_element(lat.h_values.begin(), lat.h_values.end());
        const double t_max = *std::max_element(lat.t_values.begin(), lat.t_values.end());
        KernelQuad q = KernelQuad::for_range(t_max, std::max(h_max, lat.nu));
        q.truncation = config_double(cfg, "truncation", q.truncation);
        q.nodes_per_unit = static_cast<int>(config_long(cfg, "nodes_per_unit", q.nodes_per_unit));
        const Seed seed{static_cast<std::uint64_t>(config_long(cfg, "seed", 42)), 0};

        LemmaReport rep;
        if (std::string(lemma_id) == "fbs") {
            rep = check_fbs_fourpoint(lat, static_cast<int>(config_long(cfg, "tuples", 200)),
                                      config_double(cfg, "min_gap", 0.02), seed, q);
        } else {
            rep = run_lemma_check(lemma_id, lat, q, seed);
        }
        if (out_csv) write_lemma_csv(rep, out_csv);
        if (out) {
            out->max_ratio = rep.max_ratio;
            out->refined_max_ratio = rep.refined_max_ratio;
            out->stability = rep.stability;
            out->tuple_count = static_cast<int>(rep.tuples.size());
            out->both_zero_count = rep.both_zero_count;
            out->pass = rep.pass ? 1 : 0;
        }
    });
}

fs_status fs_converge_run(const char* config_path, const char* out_dir,
                          fs_converge_summary* out) {
    if (fs_status s = require(config_path != nullptr, "fs_converge_run: config_path is NULL"))
        return s;
    return guarded([&] {
        const ConvergeSetup setup = convergence_from_config(parse_config_file(config_path));
        const ConvergenceReport rep = run_convergence(setup.params, setup.field);
        write_convergence_csv(rep, out_dir ? out_dir : setup.out_dir);
        if (out) {
            out->slope = rep.slope;
            out->ref_slope = rep.ref_slope;
            out->a_threshold = rep.a_threshold;
            out->levels = static_cast<int>(rep.levels.size());
            out->replicas = setup.params.replicas;
            out->slope_pass = rep.slope_pass ? 1 : 0;
            bool dec = true, mono = true;
            for (std::size_t l = 1; l < rep.levels.size(); ++l) {
                if (!(rep.levels[l].median < rep.levels[l - 1].median ||
                      (rep.levels[l].median == 0.0 && rep.levels[l - 1].median == 0.0)))
                    dec = false;
                if (rep.levels[l].p_exceed > rep.levels[l - 1].p_exceed) mono = false;
            }
            out->medians_decreasing = dec ? 1 : 0;
            out->exceedance_monotone = mono ? 1 : 0;
        }
    });
}

}  // extern "C"
