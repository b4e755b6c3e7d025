#pragma once

#include "sampleopt/diagnostics.hpp"
#include "sampleopt/gmm_data.hpp"
#include "sampleopt/objectives.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sampleopt {

struct RunRecord {
  std::string algo;       // em | ula | mala | gd
  std::string objective;  // gmm
  Index dim = 0;
  Index mixtures = 0;
  Index n_data = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  Scalar step_size = 0.0;
  std::int64_t queries = 0;  // budget when not converged
  bool converged = false;
  std::int64_t wall_ms = 0;
  Scalar final_value = 0.0;
  Scalar acceptance_rate = 0.0;
  std::string error;  // carried in the JSON summary, not the CSV
};

inline constexpr const char* kCsvHeader =
    "algo,objective,dim,mixtures,n_data,trial,seed,step_size,queries,converged,wall_ms,"
    "final_value,acceptance_rate";

struct SweepConfig {
  std::vector<Index> ula_dims = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
  std::vector<Index> em_dims = {2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<std::string> algos = {"em", "ula"};
  int trials = 20;
  std::int64_t budget = 1000000;
  std::uint64_t master_seed = 20240901;

  // Instance rules (Supplement-style): M = floor(log2 d), sigma = 1/sqrt(d),
  // c_lambda = sigma^2 / weight_divisor, N = min(2^d, n_cap). The background
  // constant C is the acknowledged free parameter of the model; negative
  // means "equal to c_lambda", which balances each mixture kernel against the
  // background at its own center.
  Scalar weight_divisor = 1000.0;
  Scalar constant_component = -1.0;
  Index n_cap = 4096;
  Scalar prior_m = 1.0 / 64.0;

  // Sampler step rule: h = min(h_scale * shell_width^2, h_max), halved on
  // divergence up to 8 times. The shell radius and width come from the
  // radial profile r^{D-1} e^{-m (r - sqrt(M) R)^2} that dominates the
  // posterior at these weight coefficients; the mixture wells live far from
  // the shell and only rarely kick the chain.
  Scalar ula_h_scale = 1.0 / 8.0;
  Scalar ula_h_max = 4.0;

  // Convergence detection. EM uses the absolute value gap from Supplement-
  // style protocol. Samplers use running averages (first 10% of the
  // trajectory discarded as burn-in) against reference values; tolerances
  // scale with the posterior's own scales (mean: fraction of the shell
  // radius, value: fraction of the U standard deviation).
  Scalar em_value_tol = 1e-6;
  Scalar sampler_value_tol_rel = 0.1;
  Scalar sampler_mean_tol_rel = 0.1;
  Scalar em_init_jitter = 0.0;

  // Reference estimation budgets; agreement knobs scale off the trial
  // tolerances.
  int ref_opt_replicas = 3;
  std::int64_t ref_opt_iters = 5000;
  Scalar ref_opt_agreement = 1e-8;
  int ref_sampler_replicas = 3;
  std::int64_t ref_sampler_steps = 60000;
  Scalar ref_agreement_frac = 0.5;
  int ref_max_retries = 1;

  int workers = 0;  // 0: SAMPLEOPT_WORKERS env or hardware concurrency
  std::string out_dir = "out";
  bool timings = false;
  bool resume = true;
};

/// One benchmark instance, shared by every trial at a given dimension.
struct GmmInstance {
  Dataset dataset;
  std::shared_ptr<GmmPosterior> posterior;
  References refs;
  Scalar ula_h = 0.0;
  Scalar sampler_value_tol = 0.0;
  Scalar sampler_mean_tol = 0.0;
};

struct CellKey {
  std::string algo;
  Index dim = 0;
  int trial = 0;
};

std::uint64_t cell_seed(const SweepConfig& cfg, const CellKey& cell);

/// Dataset, posterior, references, and derived knobs for one benchmark
/// instance. Samplers share one instance per dimension (data_salt 0);
/// optimizer cells re-draw the dataset per trial (data_salt = trial + 1), so
/// their medians average over instance randomness.
GmmInstance build_instance(const SweepConfig& cfg, Index d, std::uint64_t data_salt = 0,
                           bool want_opt = true, bool want_sampler = true);

RunRecord run_experiment(const CellKey& cell, const SweepConfig& cfg, const GmmInstance& instance);

struct CellSummary {
  std::string algo;
  Index dim = 0;
  Scalar median_queries = 0.0;
  Scalar mean_queries = 0.0;
  Scalar exhausted_fraction = 0.0;
  int trials = 0;
  int errors = 0;
};

struct SweepResult {
  std::vector<RunRecord> records;    // sorted by (algo, dim, trial)
  std::vector<CellSummary> summary;  // sorted by (algo, dim)
  int failed_cells = 0;
};

SweepResult sweep(const SweepConfig& cfg);

/// Per-(algo, dim) aggregates. Non-converged records already carry
/// queries = budget, so the census needs no extra context.
std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

/// Least-squares slope of log(median queries) against log(dim).
Scalar log_log_slope(const std::vector<CellSummary>& summary, const std::string& algo);

// CSV / JSON / SVG artifacts. Doubles are printed with shortest
// round-tripping decimals so reruns are byte-identical.
std::string format_double(Scalar v);
void write_records_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_records_csv(const std::string& path);
void write_summary_json(const SweepResult& result, const SweepConfig& cfg,
                        const std::string& path);
void emit_plot(const std::vector<CellSummary>& summary, std::int64_t budget,
               const std::string& path);

}  // namespace sampleopt
