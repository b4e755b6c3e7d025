#include "sampleopt/optimizers.hpp"

#include "sampleopt/gmm_data.hpp"
#include "sampleopt/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace sampleopt;

TEST_CASE("gd step basics") {
  const QuadraticObjective quad(2, 3.0);
  Vec x(2);
  x << 4.0, -2.0;
  // h = 1/a reaches the origin in one step on an isotropic quadratic
  CHECK(gd_step(quad, x, 1.0 / 3.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(gd_step(quad, x, 0.0), std::invalid_argument);
}

TEST_CASE("gd geometric decay follows the closed form") {
  const QuadraticObjective quad(1, 1.0);
  Vec x(1);
  x[0] = 1.0;
  for (int k = 1; k <= 50; ++k) {
    x = gd_step(quad, x, 0.1);
    CHECK(x[0] == doctest::Approx(std::pow(0.9, k)).epsilon(1e-12));
  }
}

namespace {

GmmPosterior toy_gmm(Index d, Index M, Index N, Scalar C = 1.0, std::uint64_t seed = 4) {
  RngStream rng(seed, 0);
  Mat data(d, N);
  for (Index n = 0; n < N; ++n) data.col(n) = gaussian_vector(rng, d, 0.4);
  return GmmPosterior(data, M, 0.5, 2.5e-4, C, 1.0 / 64.0, 2.0);
}

GmmPosterior trapping_gmm(std::uint64_t seed, Dataset* out = nullptr) {
  RngStream rng(seed, 0);
  Dataset ds = gen_adversarial_dataset(16, 4, 64, rng);
  const Scalar c_lambda = ds.sigma * ds.sigma / 3200.0;
  if (out) *out = ds;
  return GmmPosterior(ds.points, 4, ds.sigma, c_lambda, 1.0, 1.0 / 64.0, 0.5);
}

}  // namespace

TEST_CASE("em e step delegates to the posterior responsibilities") {
  const GmmPosterior post = toy_gmm(3, 2, 6);
  RngStream rng(5, 0);
  const Vec mu = em_init_from_data(post, rng);
  const Mat a = em_e_step(post, mu);
  const Mat b = gmm_responsibilities(post, mu);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("em responsibilities underflow cleanly for distant components") {
  const GmmPosterior post = toy_gmm(3, 2, 6);
  Vec mu = Vec::Zero(6);
  mu.segment(0, 3) = Vec::Constant(3, 500.0);  // >> sigma sqrt(2*700)
  mu.segment(3, 3) = Vec::Constant(3, -500.0);
  const Mat gamma = em_e_step(post, mu);
  CHECK(gamma.allFinite());
  CHECK(gamma.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("em m step is a weighted mean of the data") {
  const GmmPosterior post = toy_gmm(1, 1, 2, 1.0, 9);
  Mat data(1, 2);
  data << 0.0, 1.0;
  const GmmPosterior simple(data, 1, 0.5, 2.5e-4, 1.0, 1.0 / 64.0, 2.0);

  Mat uniform(1, 2);
  uniform << 0.5, 0.5;
  CHECK(em_m_step(simple, uniform)[0] == doctest::Approx(0.5).epsilon(1e-15));

  Mat concentrated(1, 2);
  concentrated << 0.0, 0.7;
  CHECK(em_m_step(simple, concentrated)[0] == doctest::Approx(1.0).epsilon(1e-15));

  Mat weighted(1, 2);
  weighted << 0.25, 0.75;
  CHECK(em_m_step(simple, weighted)[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("em m step flags dormant components and run_em keeps their position") {
  const GmmPosterior post = toy_gmm(2, 2, 4);
  Mat gamma = Mat::Zero(2, 4);
  gamma.row(0) = Eigen::RowVector4d(0.1, 0.2, 0.3, 0.4);
  std::vector<Index> dormant;
  const Vec mu = em_m_step(post, gamma, &dormant);
  REQUIRE(dormant.size() == 1);
  CHECK(dormant[0] == 1);

  // a component placed far away keeps its position across sweeps
  Vec mu0(4);
  mu0 << 0.1, -0.1, 900.0, 900.0;
  const EmRunResult res = run_em(post, mu0, nullptr, 5, false, false);
  CHECK(res.state.mu.segment(2, 2).isApprox(mu0.segment(2, 2)));
  CHECK(!res.state.dormant.empty());
}

TEST_CASE("em init draws distinct data points") {
  const GmmPosterior post = toy_gmm(3, 2, 5);
  RngStream rng(6, 0);
  for (int t = 0; t < 1000; ++t) {
    const Vec mu = em_init_from_data(post, rng, 0.0);
    std::set<int> hits;
    for (Index i = 0; i < 2; ++i) {
      bool matched = false;
      for (Index n = 0; n < 5; ++n) {
        if ((mu.segment(3 * i, 3) - post.data().col(n)).norm() == 0.0) {
          hits.insert(static_cast<int>(n));
          matched = true;
        }
      }
      CHECK(matched);  // jitter 0: every component sits exactly on a datum
    }
    CHECK(hits.size() == 2);  // sampled without replacement
  }
  CHECK_THROWS_AS(em_init_from_data(toy_gmm(2, 3, 2), rng), std::invalid_argument);
}

TEST_CASE("em init with N = M is a permutation of the dataset") {
  const GmmPosterior post = toy_gmm(2, 3, 3);
  RngStream rng(7, 0);
  const Vec mu = em_init_from_data(post, rng, 0.0);
  std::set<int> used;
  for (Index i = 0; i < 3; ++i)
    for (Index n = 0; n < 3; ++n)
      if ((mu.segment(2 * i, 2) - post.data().col(n)).norm() == 0.0) used.insert(static_cast<int>(n));
  CHECK(used.size() == 3);
}

TEST_CASE("run_em stops immediately on an always-true criterion") {
  const GmmPosterior post = toy_gmm(3, 2, 6);
  RngStream rng(8, 0);
  const EmRunResult res = run_em(post, em_init_from_data(post, rng),
                                 [](const EmState&, Scalar) { return true; }, 100);
  CHECK(res.converged);
  CHECK(res.converged_at_iteration == 1);
  CHECK(res.state.gradient_query_equivalents == 1);
}

TEST_CASE("run_em value trace is constant after a fixed point") {
  const GmmPosterior post = trapping_gmm(100);
  RngStream rng(9, 0);
  Vec mu0(16 * 4);
  for (Index i = 0; i < 4; ++i) mu0.segment(16 * i, 16) = post.data().col(i);
  const EmRunResult res = run_em(post, mu0, nullptr, 400, false, true);
  REQUIRE(res.value_trace.size() == 400);
  // trapped dynamics settle quickly; the tail of the trace is flat
  const Scalar tail = res.value_trace.back();
  for (size_t t = res.value_trace.size() - 100; t < res.value_trace.size(); ++t)
    CHECK(res.value_trace[t] == doctest::Approx(tail).epsilon(1e-12));
}

TEST_CASE("m step output stays in the convex hull of the data") {
  RngStream rng(10, 0);
  for (int t = 0; t < 20; ++t) {
    const GmmPosterior post = toy_gmm(3, 2, 8, 1.0, 50 + t);
    const Vec mu = em_init_from_data(post, rng);
    std::vector<Index> dormant;
    const Vec next = em_m_step(post, em_e_step(post, mu), &dormant);
    const Scalar max_norm = post.data().colwise().norm().maxCoeff();
    for (Index i = 0; i < 2; ++i) {
      if (std::find(dormant.begin(), dormant.end(), i) != dormant.end()) continue;
      CHECK(next.segment(3 * i, 3).norm() <= max_norm * (1 + 1e-12));
    }
  }
}

TEST_CASE("em decreases the objective while the prior is inactive") {
  const GmmPosterior post = toy_gmm(2, 2, 10);
  RngStream rng(11, 0);
  const Scalar radius = std::sqrt(2.0) * post.prior_R();
  for (int t = 0; t < 5; ++t) {
    const Vec mu0 = em_init_from_data(post, rng);
    const EmRunResult res = run_em(post, mu0, nullptr, 100, true, true);
    // data lies well inside the prior ball, so the prior never activates
    for (size_t k = 1; k < res.value_trace.size(); ++k)
      CHECK(res.value_trace[k] <= res.value_trace[k - 1] + 1e-9);
    CHECK(res.state.mu.norm() < radius);
  }
}

TEST_CASE("adversarial datasets trap em near the initial data points") {
  // Appendix-style constants: sigma = 0.01/sqrt(log2 N), c_lambda = sigma^2/3200,
  // C = 1. Initializing within 0.01 of distinct non-anchor separated points
  // keeps every component within 0.01 for the whole run.
  for (const std::uint64_t seed : {1ULL, 2ULL}) {
    Dataset ds;
    const GmmPosterior post = trapping_gmm(seed, &ds);
    RngStream rng(seed, 99);
    const Index d = 16, M = 4;
    std::vector<Index> targets;
    for (Index n = 0; n < ds.separated_count() && static_cast<Index>(targets.size()) < M; ++n) {
      if (std::find(ds.anchors.begin(), ds.anchors.end(), n) == ds.anchors.end())
        targets.push_back(n);
    }
    Vec mu0(d * M);
    for (Index i = 0; i < M; ++i) {
      Vec off = gaussian_vector(rng, d, 1.0);
      off *= 0.009 / off.norm();
      mu0.segment(i * d, d) = ds.points.col(targets[static_cast<size_t>(i)]) + off;
    }
    const EmRunResult res = run_em(post, mu0, nullptr, 1000, false, false);
    for (Index i = 0; i < M; ++i) {
      const Scalar dist =
          (res.state.mu.segment(i * d, d) - ds.points.col(targets[static_cast<size_t>(i)])).norm();
      CHECK(dist <= 0.01);
    }
  }
}
