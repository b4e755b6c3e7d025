#pragma once

#include "sampleopt/types.hpp"

#include <cstdint>

namespace sampleopt {

/// Closed-form theoretical quantities for one (L, m, R, eps, d, p) setting.
/// All O()/Omega() constants sit in a caller-supplied prefactor c.
struct BoundReport {
  // inputs echo
  Scalar L = 1.0;
  Scalar m = 1.0;
  Scalar R = 0.0;
  Scalar eps = 0.5;
  Index dim = 1;
  Scalar p = 1.0;
  Scalar prefactor = 1.0;
  // outputs
  Scalar rho_lower = 0.0;
  Scalar ula_mixing_upper = 0.0;
  Scalar mala_mixing_upper = 0.0;
  Scalar opt_queries_lower = 0.0;
  std::int64_t packing_eta = 0;
  Scalar beta_required = 0.0;
  Scalar ula_step = 0.0;
  Scalar mala_step = 0.0;
  // eps sits between the 1/64 validity threshold and the 1/36 fallback
  // threshold, where the lower-bound statement leaves the value open.
  bool opt_bound_gap = false;
};

/// rho_U >= (m/2) e^{-16 L R^2}.
Scalar log_sobolev_lower_bound(Scalar m, Scalar L, Scalar R);

/// c e^{32 L R^2} kappa^2 (d/eps^2) ln(d/eps^2), log guarded below by ln 2.
Scalar ula_mixing_bound(Scalar eps, Index d, Scalar L, Scalar m, Scalar R, Scalar c);

/// c (e^{40 L R^2}/m) kappa^{3/2} d^{1/2} (d ln~kappa + ln(1/eps))^{3/2},
/// ln~kappa = max(ln kappa, ln 2).
Scalar mala_mixing_bound(Scalar eps, Index d, Scalar L, Scalar m, Scalar R, Scalar c);

/// floor(((R_outer - r) / (2r))^d), clamped to 0 when R_outer <= r.
std::int64_t packing_number(Scalar R_outer, Scalar r, Index d);

/// p floor((R/4 sqrt(L/(2pi^2+pi)) / sqrt(eps) - 1/2)^d) when
/// eps <= L R^2/(64 (2pi^2+pi)); 1 otherwise (the T >= 1 fallback).
Scalar optimization_lower_bound(Scalar L, Scalar R, Scalar eps, Index d, Scalar p);

/// (1/eps) ln p + (d/(2 eps)) ln(L R^2/(4 (2pi^2+pi) eps)), floored at 0.
Scalar beta_requirement(Scalar eps, Index d, Scalar L, Scalar R, Scalar p);

/// Theorem step sizes; prefactor c holds the hidden constant.
Scalar ula_theorem_stepsize(const struct ObjectiveConstants& constants, Scalar eps, Scalar c);
Scalar mala_theorem_stepsize(const struct ObjectiveConstants& constants, Scalar eps, Scalar c);

BoundReport make_bound_report(Scalar L, Scalar m, Scalar R, Scalar eps, Index d, Scalar p,
                              Scalar prefactor);

}  // namespace sampleopt
