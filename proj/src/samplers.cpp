#include "sampleopt/samplers.hpp"

#include "sampleopt/bounds.hpp"
#include "sampleopt/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace sampleopt {

StepSchedule StepSchedule::constant(Scalar h) {
  if (!(h > 0.0)) throw std::invalid_argument("StepSchedule: h must be > 0");
  StepSchedule s;
  s.kind = Kind::Constant;
  s.h = h;
  return s;
}

StepSchedule StepSchedule::theorem_ula(Scalar eps, Scalar prefactor) {
  StepSchedule s;
  s.kind = Kind::TheoremUla;
  s.eps = eps;
  s.prefactor = prefactor;
  return s;
}

StepSchedule StepSchedule::theorem_mala(Scalar eps, Scalar prefactor) {
  StepSchedule s;
  s.kind = Kind::TheoremMala;
  s.eps = eps;
  s.prefactor = prefactor;
  return s;
}

Scalar StepSchedule::step(const ObjectiveConstants& constants, std::int64_t) const {
  switch (kind) {
    case Kind::Constant:
      return h;
    case Kind::TheoremUla:
      return ula_theorem_stepsize(constants, eps, prefactor);
    case Kind::TheoremMala:
      return mala_theorem_stepsize(constants, eps, prefactor);
  }
  throw std::logic_error("StepSchedule: unknown kind");
}

namespace {

void require_finite(const Vec& g, const char* who) {
  if (!g.allFinite()) throw std::runtime_error(std::string(who) + ": non-finite gradient");
}

}  // namespace

ChainState ula_step(const Objective& obj, ChainState state, Scalar h, RngStream& rng) {
  if (!(h > 0.0)) throw std::invalid_argument("ula_step: h must be > 0");
  const Vec g = obj.grad(state.x);
  require_finite(g, "ula_step");
  const Vec xi = gaussian_vector(rng, state.x.size(), std::sqrt(2.0 * h));
  state.x = state.x - h * g + xi;
  state.iteration += 1;
  state.gradient_queries += 1;
  state.cached_grad.reset();
  state.cached_value.reset();
  return state;
}

Scalar mala_log_accept(Scalar value_x, Scalar value_z, const Vec& x, const Vec& z,
                       const Vec& grad_x, const Vec& grad_z, Scalar h) {
  const Scalar fwd = (z - x + h * grad_x).squaredNorm();
  const Scalar rev = (x - z + h * grad_z).squaredNorm();
  return value_x - value_z + (fwd - rev) / (4.0 * h);
}

Scalar mala_log_accept(const Objective& obj, const Vec& x, const Vec& z, Scalar h) {
  return mala_log_accept(obj.value(x), obj.value(z), x, z, obj.grad(x), obj.grad(z), h);
}

ChainState mala_step(const Objective& obj, ChainState state, Scalar h, RngStream& rng) {
  if (!(h > 0.0)) throw std::invalid_argument("mala_step: h must be > 0");
  if (!state.cached_grad && !state.cached_value) {
    auto [ux0, gx0] = obj.value_and_grad(state.x);
    state.cached_value = ux0;
    state.cached_grad = std::move(gx0);
  }
  if (!state.cached_grad) state.cached_grad = obj.grad(state.x);
  if (!state.cached_value) state.cached_value = obj.value(state.x);
  const Vec& gx = *state.cached_grad;
  const Scalar ux = *state.cached_value;
  require_finite(gx, "mala_step");

  const Vec xi = gaussian_vector(rng, state.x.size(), std::sqrt(2.0 * h));
  const Vec z = state.x - h * gx + xi;
  auto [uz, gz] = obj.value_and_grad(z);
  if (!std::isfinite(uz)) throw std::runtime_error("mala_step: non-finite value at proposal");
  require_finite(gz, "mala_step");

  const Scalar log_accept = mala_log_accept(ux, uz, state.x, z, gx, gz, h);

  const Scalar u = rng.uniform();
  // log(0) = -inf accepts whenever log_accept >= 0, including A = 0 at z = x.
  if (std::log(u) < log_accept) {
    state.x = z;
    state.cached_grad = gz;
    state.cached_value = uz;
    state.accepted_count += 1;
  }
  state.iteration += 1;
  state.gradient_queries += 2;
  state.value_queries += 1;
  return state;
}

ChainRunResult run_chain(const Objective& obj, const ChainConfig& config, ChainKind kind,
                         RngStream& rng, const ChainStop& stop, bool keep_samples) {
  const ObjectiveConstants& constants = obj.constants();
  ChainState state;
  if (config.init_law == ChainConfig::InitLaw::FixedPoint) {
    if (config.init_point.size() != constants.dim)
      throw std::invalid_argument("run_chain: init point dimension mismatch");
    state.x = config.init_point;
  } else {
    state.x = gaussian_vector(rng, constants.dim, std::sqrt(1.0 / constants.L));
  }
  if (config.thinning < 1) throw std::invalid_argument("run_chain: thinning must be >= 1");

  ChainRunResult result;
  for (std::int64_t k = 0; k < config.max_steps; ++k) {
    const Scalar h = config.schedule.step(constants, k);
    try {
      state = kind == ChainKind::ULA ? ula_step(obj, state, h, rng)
                                     : mala_step(obj, state, h, rng);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(std::string(e.what()) + " at iteration " + std::to_string(k));
    }
    Scalar value;
    if (kind == ChainKind::MALA) {
      value = *state.cached_value;
    } else {
      value = obj.value(state.x);
      state.value_queries += 1;
    }
    if (keep_samples && state.iteration > config.burn_in &&
        state.iteration % config.thinning == 0) {
      result.samples.push_back(state.x);
      result.value_trace.push_back(value);
    }
    if (stop && stop(state, value)) {
      result.converged = true;
      result.converged_at_step = state.iteration;
      break;
    }
  }
  result.acceptance_rate =
      state.iteration > 0 ? static_cast<Scalar>(state.accepted_count) / static_cast<Scalar>(state.iteration)
                          : 0.0;
  result.final_state = std::move(state);
  return result;
}

}  // namespace sampleopt
