#pragma once

#include "sampleopt/types.hpp"

#include <functional>
#include <span>

namespace sampleopt {

using ScalarField = std::function<Scalar(const Vec&)>;

/// dim i.i.d. draws from N(0, std^2); advances rng. Rejects dim = 0.
Vec gaussian_vector(RngStream& rng, Index dim, Scalar std);

/// Central-difference gradient (f(x+eps e_j) - f(x-eps e_j)) / (2 eps).
/// Throws if f evaluates non-finite near x.
Vec finite_diff_grad(const ScalarField& f, const Vec& x, Scalar eps);

/// Default step 1e-5 * max(1, ||x||_inf).
Vec finite_diff_grad(const ScalarField& f, const Vec& x);

/// log sum_i exp(v_i), max-shifted. Empty input is an error.
Scalar log_sum_exp(std::span<const Scalar> values);

}  // namespace sampleopt
