#pragma once

#include "sampleopt/objectives.hpp"
#include "sampleopt/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sampleopt {

/// Axis-aligned grid over at most two dimensions with one probability per cell.
struct GridSpec {
  Vec lo;                     // per axis
  Vec hi;                     // per axis
  std::vector<Index> bins;    // per axis
  Index dim() const { return lo.size(); }
  Index cell_count() const;
  bool operator==(const GridSpec& other) const;
};

struct GridDensity {
  GridSpec spec;
  Vec cells;                 // probabilities, sum 1 (up to clipped mass)
  Scalar clipped_mass = 0.0; // histogram only: fraction of samples off-grid
  bool boundary_warning = false;
};

/// Cell mass proportional to e^{-U(cell center)} * cell volume, normalized.
/// boundary_warning set if boundary cells carry >= 1e-6 of the mass.
GridDensity grid_density(const Objective& obj, const GridSpec& spec);

GridDensity histogram(std::span<const Vec> samples, const GridSpec& spec);

/// Total variation (1/2) sum |p_i - q_i| on a shared grid.
Scalar tv_distance(const GridDensity& p, const GridDensity& q);

struct ConvergenceCriterion {
  enum class Kind { EmValue, SamplerValueAndMean };
  Kind kind = Kind::EmValue;
  Scalar value_tol = 1e-6;
  Scalar mean_tol = 1e-3;
  // references
  Scalar ref_value = 0.0;  // U(mu*) for EM, E[U] for samplers
  Vec ref_mean;            // E[mu], samplers only
  bool has_references = false;
};

struct TrajectoryStats {
  Scalar last_value = 0.0;     // U(mu_K)
  Scalar running_value = 0.0;  // (1/K) sum U(mu_k), post burn-in
  Vec running_mean;            // (1/K) sum mu_k, post burn-in
  std::int64_t averaged = 0;
};

bool check_convergence(const ConvergenceCriterion& criterion, const TrajectoryStats& stats);

struct ReferenceConfig {
  // EM side: one-component runs seeded from the highest-density data points
  // feed mode combinations into full EM; replicas differ by jitter.
  int opt_replicas = 3;
  std::int64_t opt_iters = 2000;
  Index opt_seed_cap = 48;
  std::int64_t opt_stage1_iters = 400;
  Index opt_random_subsets = 16;
  Scalar opt_agreement_tol = 1e-8;
  Scalar init_jitter = 1e-3;
  // Sampler side.
  int sampler_replicas = 3;
  std::int64_t sampler_steps = 20000;
  Scalar sampler_step_size = 0.1;
  Scalar value_agreement_tol = 1e-8;
  Scalar mean_agreement_tol = 1e-5;
  // On disagreement the budget grows tenfold, up to this many retries.
  int max_retries = 2;
  bool want_opt = true;
  bool want_sampler = true;
};

struct SamplerReferences {
  Scalar expected_value = 0.0;  // E[U]
  Vec expected_mu;              // E[mu]
  bool converged = false;
  Scalar value_spread = 0.0;  // replica disagreement actually achieved
  Scalar mean_spread = 0.0;
};

struct References {
  Vec mu_star;
  Scalar value_star = 0.0;      // U(mu*)
  Scalar expected_value = 0.0;  // E[U]
  Vec expected_mu;              // E[mu]
  bool opt_converged = false;
  bool sampler_converged = false;
  Scalar opt_spread = 0.0;
  Scalar value_spread = 0.0;
  Scalar mean_spread = 0.0;
};

/// E[U] and E[mu] from replicated long ULA runs with independent
/// initializations; post-burn-in averages must agree across replicas.
SamplerReferences estimate_sampler_references(const Objective& obj, const ReferenceConfig& cfg,
                                              RngStream& rng);

/// Reference values per the replicated long-run protocol. Throws only on
/// invalid configuration; disagreement is reported through the flags.
References estimate_references(const GmmPosterior& post, const ReferenceConfig& cfg,
                               RngStream& rng);

}  // namespace sampleopt
