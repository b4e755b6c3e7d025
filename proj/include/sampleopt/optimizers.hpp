#pragma once

#include "sampleopt/objectives.hpp"
#include "sampleopt/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace sampleopt {

/// One gradient descent update x - h grad(x).
Vec gd_step(const Objective& obj, const Vec& x, Scalar h);

struct EmState {
  Vec mu;
  std::int64_t iteration = 0;
  // One E+M sweep touches the same N*M kernels as one gradient, so it is
  // accounted as one gradient-query equivalent.
  std::int64_t gradient_query_equivalents = 0;
  std::vector<Index> dormant;  // components with zero responsibility mass
};

/// E step: responsibilities under the current mu (delegates to the posterior).
Mat em_e_step(const GmmPosterior& post, const Vec& mu);

/// M step: mu_i' = weighted mean of the data under row i of gamma. A zero row
/// sum leaves mu_i unchanged and reports the component as dormant.
Vec em_m_step(const GmmPosterior& post, const Mat& gamma, std::vector<Index>* dormant = nullptr);

/// M data points sampled uniformly without replacement; mu0_i = y_idx + jitter * zeta_i.
Vec em_init_from_data(const GmmPosterior& post, RngStream& rng, Scalar jitter = 0.0);

struct EmRunResult {
  EmState state;
  bool converged = false;
  std::int64_t converged_at_iteration = -1;
  bool reached_fixed_point = false;  // movement fell to stationary_tol (0: bit-stationary)
  std::vector<Scalar> value_trace;   // U(mu^(t)) per iteration
};

using EmStop = std::function<bool(const EmState&, Scalar value)>;

/// Iterates E+M sweeps until the stop predicate fires or max_iters.
/// With stop_at_fixed_point, exits early once the sweep movement
/// ||mu^(t+1) - mu^(t)||_inf falls to stationary_tol (bit-stationary at 0):
/// from there an unmet criterion effectively stays unmet.
EmRunResult run_em(const GmmPosterior& post, Vec mu0, const EmStop& stop,
                   std::int64_t max_iters, bool stop_at_fixed_point = false,
                   bool keep_trace = true, Scalar stationary_tol = 0.0);

}  // namespace sampleopt
