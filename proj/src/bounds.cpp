#include "sampleopt/bounds.hpp"

#include "sampleopt/objectives.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sampleopt {

namespace {
constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
const Scalar kWellConst = 2.0 * kPi * kPi + kPi;
const Scalar kLn2 = std::log(2.0);

void check_core(Scalar eps, Index d, Scalar L, Scalar m) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("bounds: eps must be in (0,1)");
  if (d < 1) throw std::invalid_argument("bounds: d must be >= 1");
  if (!(L > 0.0) || !(m > 0.0)) throw std::invalid_argument("bounds: L, m must be > 0");
}
}  // namespace

Scalar log_sobolev_lower_bound(Scalar m, Scalar L, Scalar R) {
  if (!(m > 0.0) || !(L > 0.0)) throw std::invalid_argument("log_sobolev_lower_bound: m, L must be > 0");
  if (!(R >= 0.0)) throw std::invalid_argument("log_sobolev_lower_bound: R must be >= 0");
  return 0.5 * m * std::exp(-16.0 * L * R * R);
}

Scalar ula_mixing_bound(Scalar eps, Index d, Scalar L, Scalar m, Scalar R, Scalar c) {
  check_core(eps, d, L, m);
  const Scalar kappa = L / m;
  const Scalar x = static_cast<Scalar>(d) / (eps * eps);
  return c * std::exp(32.0 * L * R * R) * kappa * kappa * x * std::max(std::log(x), kLn2);
}

Scalar mala_mixing_bound(Scalar eps, Index d, Scalar L, Scalar m, Scalar R, Scalar c) {
  check_core(eps, d, L, m);
  const Scalar kappa = L / m;
  const Scalar lnk = std::max(std::log(kappa), kLn2);
  const Scalar inner = static_cast<Scalar>(d) * lnk + std::log(1.0 / eps);
  return c * (std::exp(40.0 * L * R * R) / m) * std::pow(kappa, 1.5) *
         std::sqrt(static_cast<Scalar>(d)) * std::pow(inner, 1.5);
}

std::int64_t packing_number(Scalar R_outer, Scalar r, Index d) {
  if (!(r > 0.0)) throw std::invalid_argument("packing_number: r must be > 0");
  if (d < 1) throw std::invalid_argument("packing_number: d must be >= 1");
  if (R_outer <= r) return 0;
  const Scalar base = (R_outer - r) / (2.0 * r);
  // absorb representation error so exact ratios (e.g. R_outer = 3r) stay exact
  const Scalar v = std::floor(std::pow(base, static_cast<Scalar>(d)) + 1e-9);
  if (v <= 0.0) return 0;
  if (v >= 9.2e18) return INT64_MAX;
  return static_cast<std::int64_t>(v);
}

Scalar optimization_lower_bound(Scalar L, Scalar R, Scalar eps, Index d, Scalar p) {
  if (!(L > 0.0) || !(R >= 0.0) || !(eps > 0.0))
    throw std::invalid_argument("optimization_lower_bound: needs L, eps > 0 and R >= 0");
  if (d < 1) throw std::invalid_argument("optimization_lower_bound: d must be >= 1");
  if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("optimization_lower_bound: p must be in [0,1]");
  if (eps > L * R * R / (64.0 * kWellConst)) return 1.0;
  const Scalar base = 0.25 * R * std::sqrt(L / kWellConst) / std::sqrt(eps) - 0.5;
  if (base <= 0.0) return 0.0;
  return p * std::floor(std::pow(base, static_cast<Scalar>(d)));
}

Scalar beta_requirement(Scalar eps, Index d, Scalar L, Scalar R, Scalar p) {
  if (!(eps > 0.0)) throw std::invalid_argument("beta_requirement: eps must be > 0");
  if (d < 1) throw std::invalid_argument("beta_requirement: d must be >= 1");
  if (!(p > 0.0) || !(p <= 1.0)) throw std::invalid_argument("beta_requirement: p must be in (0,1]");
  if (!(L > 0.0) || !(R >= 0.0)) throw std::invalid_argument("beta_requirement: needs L > 0, R >= 0");
  // R = 0 makes the log argument 0; the floor keeps the degenerate bound at 0.
  const Scalar v = std::log(p) / eps +
                   (static_cast<Scalar>(d) / (2.0 * eps)) * std::log(L * R * R / (4.0 * kWellConst * eps));
  return std::max(v, 0.0);
}

Scalar ula_theorem_stepsize(const ObjectiveConstants& constants, Scalar eps, Scalar c) {
  check_core(eps, constants.dim, constants.L, constants.m);
  const ObjectiveConstants& k = constants;
  return c * std::exp(-16.0 * k.L * k.R * k.R) * (k.m / k.L) * (1.0 / k.L) * eps * eps /
         static_cast<Scalar>(k.dim);
}

Scalar mala_theorem_stepsize(const ObjectiveConstants& constants, Scalar eps, Scalar c) {
  check_core(eps, constants.dim, constants.L, constants.m);
  const ObjectiveConstants& k = constants;
  const Scalar lnk = std::max(std::log(k.condition_number()), kLn2);
  const Scalar inner = static_cast<Scalar>(k.dim) * lnk + std::log(1.0 / eps);
  return c * std::exp(-8.0 * k.L * k.R * k.R) / std::sqrt(k.condition_number()) / k.L /
         std::sqrt(inner) / std::sqrt(static_cast<Scalar>(k.dim));
}

BoundReport make_bound_report(Scalar L, Scalar m, Scalar R, Scalar eps, Index d, Scalar p,
                              Scalar prefactor) {
  BoundReport rep;
  rep.L = L;
  rep.m = m;
  rep.R = R;
  rep.eps = eps;
  rep.dim = d;
  rep.p = p;
  rep.prefactor = prefactor;
  rep.rho_lower = log_sobolev_lower_bound(m, L, R);
  rep.ula_mixing_upper = ula_mixing_bound(eps, d, L, m, R, prefactor);
  rep.mala_mixing_upper = mala_mixing_bound(eps, d, L, m, R, prefactor);
  rep.opt_queries_lower = optimization_lower_bound(L, R, eps, d, p);
  const Scalar r = std::sqrt(kWellConst * eps / L);
  rep.packing_eta = packing_number(0.5 * R, r, d);
  rep.beta_required = beta_requirement(eps, d, L, R, p);
  const ObjectiveConstants constants{L, m, R, d};
  rep.ula_step = ula_theorem_stepsize(constants, eps, prefactor);
  rep.mala_step = mala_theorem_stepsize(constants, eps, prefactor);
  rep.opt_bound_gap = eps > L * R * R / (64.0 * kWellConst) && eps < L * R * R / (36.0 * kWellConst);
  return rep;
}

}  // namespace sampleopt
