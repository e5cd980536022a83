#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fracsheet/besov.hpp"
#include "fracsheet/generators.hpp"
#include "fracsheet/rng.hpp"

namespace fracsheet {

/// Parameter chain of the convergence experiment. The defaults derive the
/// chain from (lambda, beta) exactly as the proof requires:
/// delta in (0, lambda - 2 max beta), theta in (0, (lambda-2maxbeta-delta)/2),
/// p = 2/theta.
struct ConvergenceParams {
    double lambda = 1.4;  // increment exponent of the target field
    double C = 1.0;       // increment constant; informational
    double beta1 = 0.3, beta2 = 0.3;
    double delta = 0.4;
    double theta = 0.1;
    double gamma = 1.0;
    int n_min = 1, n_max = 5;  // dyadic schedule eps_n = 2^-n
    int margin = 2;            // mesh = 2^-(n_max+margin)
    int replicas = 50;
    enum class AMode { auto_median, fixed };
    AMode a_mode = AMode::auto_median;
    double a_value = 0.0;
    Seed seed{42, 0};
    double T1 = 1.0, T2 = 1.0;
    int stride = 0;   // Besov sup-search stride (0 = auto)
    int threads = 0;  // replica parallelism (0 = hardware)

    double p() const { return 2.0 / theta; }
    double hol1() const { return 0.5 * (lambda - delta) - beta1 - theta; }
    double hol2() const { return 0.5 * (lambda - delta) - beta2 - theta; }

    /// Fills delta/theta with the midpoint defaults for this (lambda, beta).
    void derive_defaults();

    /// Enforces every strict inequality of the chain plus the mesh/schedule
    /// alignment; throws std::invalid_argument naming the violated bound.
    void validate() const;
};

/// Which field drives the experiment.
struct FieldChoice {
    enum class Kind { fbs, mbs, bilinear };
    Kind kind = Kind::fbs;
    HurstPair H{0.7, 0.7};
    HurstFunctionSpec hurst;  // mbs only
};

struct ReplicaRow {
    int n;
    double eps;
    int replica;
    double norm;
};

struct LevelStats {
    int n;
    double eps;
    double median, q90, p_exceed;
};

struct ConvergenceReport {
    std::vector<ReplicaRow> rows;     // sorted by (n, replica)
    std::vector<LevelStats> levels;   // per n
    double a_threshold = 0.0;
    double slope = 0.0, ref_slope = 0.0;
    bool slope_pass = false;
    // Almost-sure rate diagnostics per replica: max over n of
    // norm / (eps^{delta/2} |ln eps|^{(1+gamma)/p}) and where it is attained.
    std::vector<double> rate_max_ratio;
    std::vector<int> rate_argmax_n;
};

/// Samples each replica once on the padded grid, smooths it at every
/// schedule level, and evaluates the W1 norm of the difference field.
ConvergenceReport run_convergence(const ConvergenceParams& cp, const FieldChoice& field);

struct RateFit {
    double slope;
    double reference;  // delta / 2
    bool pass;         // slope >= reference - 0.1
};

/// Least-squares slope of log2(median) against -n; needs >= 3 levels.
/// All-zero medians (exact approximation) report an infinite slope.
RateFit fit_rate(const std::vector<LevelStats>& levels, const ConvergenceParams& cp);

/// report.csv (n,eps,replica,norm) and summary.csv
/// (n,eps,median,q90,p_exceed,slope,ref_slope) under `dir`.
void write_convergence_csv(const ConvergenceReport& rep, const std::string& dir);

/// Builds the experiment from a key=value config (see valid_converge_keys).
struct ConvergeSetup {
    ConvergenceParams params;
    FieldChoice field;
    std::string out_dir = ".";
};
ConvergeSetup convergence_from_config(const std::map<std::string, std::string>& cfg);
const std::set<std::string>& valid_converge_keys();

}  // namespace fracsheet
