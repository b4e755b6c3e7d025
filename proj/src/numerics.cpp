#include "sampleopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sampleopt {

Vec gaussian_vector(RngStream& rng, Index dim, Scalar std) {
  if (dim < 1) throw std::invalid_argument("gaussian_vector: dim must be >= 1");
  if (std < 0.0) throw std::invalid_argument("gaussian_vector: std must be >= 0");
  Vec out(dim);
  for (Index i = 0; i < dim; ++i) out[i] = std * rng.gaussian();
  return out;
}

Vec finite_diff_grad(const ScalarField& f, const Vec& x, Scalar eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_grad: eps must be > 0");
  Vec g(x.size());
  Vec probe = x;
  for (Index j = 0; j < x.size(); ++j) {
    const Scalar xj = x[j];
    probe[j] = xj + eps;
    const Scalar fp = f(probe);
    probe[j] = xj - eps;
    const Scalar fm = f(probe);
    probe[j] = xj;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("finite_diff_grad: non-finite function value");
    g[j] = (fp - fm) / (2.0 * eps);
  }
  return g;
}

Vec finite_diff_grad(const ScalarField& f, const Vec& x) {
  const Scalar scale = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return finite_diff_grad(f, x, 1e-5 * std::max(1.0, scale));
}

Scalar log_sum_exp(std::span<const Scalar> values) {
  if (values.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  const Scalar m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) return m;  // all -inf stays -inf; +inf stays +inf
  Scalar acc = 0.0;
  for (const Scalar v : values) acc += std::exp(v - m);
  return m + std::log(acc);
}

}  // namespace sampleopt
