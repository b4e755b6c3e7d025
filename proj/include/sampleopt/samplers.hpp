#pragma once

#include "sampleopt/objectives.hpp"
#include "sampleopt/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace sampleopt {

enum class ChainKind { ULA, MALA };

struct ChainState {
  Vec x;
  std::int64_t iteration = 0;
  std::int64_t gradient_queries = 0;
  std::int64_t value_queries = 0;
  std::int64_t accepted_count = 0;

  // Current-point gradient/value carried across MALA steps; one fresh
  // gradient per proposal, accounting stays 2 per step.
  std::optional<Vec> cached_grad;
  std::optional<Scalar> cached_value;
};

struct StepSchedule {
  enum class Kind { Constant, TheoremUla, TheoremMala };
  Kind kind = Kind::Constant;
  Scalar h = 1e-3;        // Constant
  Scalar eps = 0.5;       // Theorem schedules
  Scalar prefactor = 1.0; // hidden O(1) constant

  static StepSchedule constant(Scalar h);
  static StepSchedule theorem_ula(Scalar eps, Scalar prefactor = 1.0);
  static StepSchedule theorem_mala(Scalar eps, Scalar prefactor = 1.0);

  /// Both theorem schedules are constants; k is accepted for forward
  /// compatibility with varying schedules.
  Scalar step(const ObjectiveConstants& constants, std::int64_t k) const;
};

struct ChainConfig {
  StepSchedule schedule;
  std::int64_t max_steps = 0;
  enum class InitLaw { GaussianOverL, FixedPoint };
  InitLaw init_law = InitLaw::GaussianOverL;
  Vec init_point;          // FixedPoint only
  std::int64_t thinning = 1;
  std::int64_t burn_in = 0;  // steps excluded from the retained stream
};

/// x' = x - h grad(x) + N(0, 2h I); counters advance by one gradient query.
ChainState ula_step(const Objective& obj, ChainState state, Scalar h, RngStream& rng);

/// Log acceptance ratio of the Langevin proposal x -> z:
/// A = U(x) - U(z) - ||x - z + h grad(z)||^2/(4h) + ||z - x + h grad(x)||^2/(4h).
Scalar mala_log_accept(Scalar value_x, Scalar value_z, const Vec& x, const Vec& z, const Vec& grad_x,
                       const Vec& grad_z, Scalar h);
Scalar mala_log_accept(const Objective& obj, const Vec& x, const Vec& z, Scalar h);

/// Langevin proposal plus Metropolis correction in the log domain; accept
/// with probability min{1, e^A}. Two gradient queries per step.
ChainState mala_step(const Objective& obj, ChainState state, Scalar h, RngStream& rng);

struct ChainRunResult {
  ChainState final_state;
  bool converged = false;
  std::int64_t converged_at_step = -1;
  Scalar acceptance_rate = 0.0;
  std::vector<Vec> samples;        // thinned, post burn-in
  std::vector<Scalar> value_trace; // U(x_k) per retained sample
};

/// Stop predicate sees the state after each step together with U(x_k);
/// return true to stop. Pass nullptr to run to max_steps.
using ChainStop = std::function<bool(const ChainState&, Scalar value)>;

ChainRunResult run_chain(const Objective& obj, const ChainConfig& config, ChainKind kind,
                         RngStream& rng, const ChainStop& stop = nullptr,
                         bool keep_samples = true);

}  // namespace sampleopt
