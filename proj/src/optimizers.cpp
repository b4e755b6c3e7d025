#include "sampleopt/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace sampleopt {

Vec gd_step(const Objective& obj, const Vec& x, Scalar h) {
  if (!(h > 0.0)) throw std::invalid_argument("gd_step: h must be > 0");
  const Vec g = obj.grad(x);
  if (!g.allFinite()) throw std::runtime_error("gd_step: non-finite gradient");
  return x - h * g;
}

Mat em_e_step(const GmmPosterior& post, const Vec& mu) { return post.responsibilities(mu); }

Vec em_m_step(const GmmPosterior& post, const Mat& gamma, std::vector<Index>* dormant) {
  const Index d = post.data_dim(), N = post.data_count(), M = post.mixtures();
  if (gamma.rows() != M || gamma.cols() != N)
    throw std::invalid_argument("em_m_step: responsibility shape mismatch");
  Vec mu_next(d * M);
  if (dormant) dormant->clear();
  const Vec row_mass = gamma.rowwise().sum();
  const Mat weighted = post.data() * gamma.transpose();  // d x M
  for (Index i = 0; i < M; ++i) {
    if (row_mass[i] > 0.0) {
      mu_next.segment(i * d, d) = weighted.col(i) / row_mass[i];
    } else {
      mu_next.segment(i * d, d).setZero();  // caller substitutes the old value
      if (dormant) dormant->push_back(i);
    }
  }
  return mu_next;
}

Vec em_init_from_data(const GmmPosterior& post, RngStream& rng, Scalar jitter) {
  const Index d = post.data_dim(), N = post.data_count(), M = post.mixtures();
  if (N < M) throw std::invalid_argument("em_init_from_data: fewer data points than components");
  if (!(jitter >= 0.0)) throw std::invalid_argument("em_init_from_data: jitter must be >= 0");

  // Partial Fisher-Yates over indices: M distinct draws.
  std::vector<Index> idx(static_cast<size_t>(N));
  for (Index n = 0; n < N; ++n) idx[static_cast<size_t>(n)] = n;
  for (Index i = 0; i < M; ++i) {
    const auto j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(N - i)));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
  }

  Vec mu0(d * M);
  for (Index i = 0; i < M; ++i) {
    mu0.segment(i * d, d) = post.data().col(idx[static_cast<size_t>(i)]);
    if (jitter > 0.0) {
      for (Index j = 0; j < d; ++j) mu0[i * d + j] += jitter * rng.gaussian();
    }
  }
  return mu0;
}

EmRunResult run_em(const GmmPosterior& post, Vec mu0, const EmStop& stop,
                   std::int64_t max_iters, bool stop_at_fixed_point, bool keep_trace,
                   Scalar stationary_tol) {
  const Index d = post.data_dim(), M = post.mixtures();
  EmRunResult result;
  result.state.mu = std::move(mu0);
  if (result.state.mu.size() != d * M)
    throw std::invalid_argument("run_em: mu0 dimension mismatch");

  // One kernel evaluation per sweep: the table at mu^(t) yields both the
  // value checked against the criterion and the E-step weights for the next
  // update.
  std::vector<Index> dormant;
  bool was_stationary = false;
  bool open_check = false;  // latest iterate still needs its value/stop check
  for (std::int64_t t = 0; t <= max_iters; ++t) {
    const bool last = t == max_iters;
    Scalar value = 0.0;
    Mat gamma;
    if (last) {
      if (open_check) value = post.value(result.state.mu);
    } else {
      std::tie(value, gamma) = post.value_and_responsibilities(result.state.mu);
    }
    if (open_check) {
      if (keep_trace) result.value_trace.push_back(value);
      if (stop && stop(result.state, value)) {
        result.converged = true;
        result.converged_at_iteration = result.state.iteration;
        break;
      }
      if (was_stationary) {
        result.reached_fixed_point = true;
        if (stop_at_fixed_point) break;
      }
    }
    if (last) break;

    Vec mu_next = em_m_step(post, gamma, &dormant);
    for (const Index i : dormant) mu_next.segment(i * d, d) = result.state.mu.segment(i * d, d);
    was_stationary = stationary_tol > 0.0
                         ? (mu_next - result.state.mu).cwiseAbs().maxCoeff() <= stationary_tol
                         : (mu_next.array() == result.state.mu.array()).all();
    result.state.mu = std::move(mu_next);
    result.state.dormant = dormant;
    result.state.iteration += 1;
    result.state.gradient_query_equivalents += 1;
    open_check = true;
  }
  return result;
}

}  // namespace sampleopt
