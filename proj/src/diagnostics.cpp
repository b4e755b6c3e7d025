#include "sampleopt/diagnostics.hpp"

#include "sampleopt/numerics.hpp"
#include "sampleopt/optimizers.hpp"
#include "sampleopt/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sampleopt {

Index GridSpec::cell_count() const {
  Index n = 1;
  for (const Index b : bins) n *= b;
  return n;
}

bool GridSpec::operator==(const GridSpec& other) const {
  return bins == other.bins && lo.size() == other.lo.size() &&
         (lo.array() == other.lo.array()).all() && (hi.array() == other.hi.array()).all();
}

namespace {

void check_spec(const GridSpec& spec) {
  if (spec.dim() < 1 || spec.dim() > 2)
    throw std::invalid_argument("grid: only d <= 2 is supported");
  if (static_cast<Index>(spec.bins.size()) != spec.dim())
    throw std::invalid_argument("grid: bins/axis mismatch");
  for (const Index b : spec.bins)
    if (b < 1) throw std::invalid_argument("grid: bins must be >= 1");
  for (Index a = 0; a < spec.dim(); ++a)
    if (!(spec.hi[a] > spec.lo[a])) throw std::invalid_argument("grid: hi must exceed lo");
}

bool is_boundary(const GridSpec& spec, Index flat) {
  if (spec.dim() == 1) return flat == 0 || flat == spec.bins[0] - 1;
  const Index i = flat % spec.bins[0];
  const Index j = flat / spec.bins[0];
  return i == 0 || i == spec.bins[0] - 1 || j == 0 || j == spec.bins[1] - 1;
}

}  // namespace

GridDensity grid_density(const Objective& obj, const GridSpec& spec) {
  check_spec(spec);
  if (obj.constants().dim != spec.dim())
    throw std::invalid_argument("grid_density: objective/grid dimension mismatch");

  const Index cells = spec.cell_count();
  Vec log_mass(cells);
  Vec x(spec.dim());
  std::vector<Scalar> width(static_cast<size_t>(spec.dim()));
  for (Index a = 0; a < spec.dim(); ++a)
    width[static_cast<size_t>(a)] = (spec.hi[a] - spec.lo[a]) / static_cast<Scalar>(spec.bins[a]);

  for (Index c = 0; c < cells; ++c) {
    const Index i = spec.dim() == 1 ? c : c % spec.bins[0];
    x[0] = spec.lo[0] + (static_cast<Scalar>(i) + 0.5) * width[0];
    if (spec.dim() == 2) {
      const Index j = c / spec.bins[0];
      x[1] = spec.lo[1] + (static_cast<Scalar>(j) + 0.5) * width[1];
    }
    log_mass[c] = -obj.value(x);  // cell volume is shared, cancels in the normalization
  }
  const Scalar lse = log_sum_exp(std::span<const Scalar>(log_mass.data(), static_cast<size_t>(cells)));

  GridDensity out;
  out.spec = spec;
  out.cells = (log_mass.array() - lse).exp();

  Scalar boundary_mass = 0.0;
  for (Index c = 0; c < cells; ++c)
    if (is_boundary(spec, c)) boundary_mass += out.cells[c];
  out.boundary_warning = boundary_mass >= 1e-6;
  return out;
}

GridDensity histogram(std::span<const Vec> samples, const GridSpec& spec) {
  check_spec(spec);
  GridDensity out;
  out.spec = spec;
  out.cells = Vec::Zero(spec.cell_count());
  if (samples.empty()) return out;

  std::vector<Scalar> width(static_cast<size_t>(spec.dim()));
  for (Index a = 0; a < spec.dim(); ++a)
    width[static_cast<size_t>(a)] = (spec.hi[a] - spec.lo[a]) / static_cast<Scalar>(spec.bins[a]);

  std::int64_t clipped = 0;
  for (const Vec& s : samples) {
    if (s.size() != spec.dim()) throw std::invalid_argument("histogram: sample dimension mismatch");
    Index flat = 0, stride = 1;
    bool inside = true;
    for (Index a = 0; a < spec.dim(); ++a) {
      const auto idx = static_cast<Index>(std::floor((s[a] - spec.lo[a]) / width[static_cast<size_t>(a)]));
      if (idx < 0 || idx >= spec.bins[a]) {
        inside = false;
        break;
      }
      flat += idx * stride;
      stride *= spec.bins[a];
    }
    if (inside)
      out.cells[flat] += 1.0;
    else
      ++clipped;
  }
  const auto n = static_cast<Scalar>(samples.size());
  out.cells /= n;
  out.clipped_mass = static_cast<Scalar>(clipped) / n;
  return out;
}

Scalar tv_distance(const GridDensity& p, const GridDensity& q) {
  if (!(p.spec == q.spec)) throw std::invalid_argument("tv_distance: grid specs differ");
  return 0.5 * ((p.cells - q.cells).cwiseAbs().sum() + std::abs(p.clipped_mass - q.clipped_mass));
}

bool check_convergence(const ConvergenceCriterion& criterion, const TrajectoryStats& stats) {
  if (!criterion.has_references)
    throw std::invalid_argument("check_convergence: references missing");
  if (!(criterion.value_tol > 0.0) || !(criterion.mean_tol > 0.0))
    throw std::invalid_argument("check_convergence: tolerances must be > 0");
  if (criterion.kind == ConvergenceCriterion::Kind::EmValue) {
    return stats.last_value - criterion.ref_value < criterion.value_tol;
  }
  if (stats.averaged < 1) return false;
  const bool value_ok = std::abs(stats.running_value - criterion.ref_value) < criterion.value_tol;
  const bool mean_ok = (stats.running_mean - criterion.ref_mean).norm() < criterion.mean_tol;
  return value_ok && mean_ok;
}

namespace {

struct OptReplica {
  Vec mu;
  Scalar value = std::numeric_limits<Scalar>::infinity();
};

// One-component values at every data point in one dense pass:
// v(n) = prior(y_n) - sum_m log(c e^{-||y_m - y_n||^2 / (2 sigma^2)} + C).
Vec single_component_values(const GmmPosterior& post) {
  const Mat& Y = post.data();
  const Index N = Y.cols();
  const Scalar inv_two_sig2 = 1.0 / (2.0 * post.sigma() * post.sigma());
  const Vec sqn = Y.colwise().squaredNorm();
  Mat D2 = -2.0 * (Y.transpose() * Y);
  D2.colwise() += sqn;
  D2.rowwise() += sqn.transpose();
  const Mat K = (-D2.array() * inv_two_sig2).exp();
  const Scalar c = post.weight_coeff(), C = post.constant_component();
  Vec out(N);
  const Scalar radius = post.prior_R();  // sqrt(M) with M = 1
  for (Index n = 0; n < N; ++n) {
    Scalar acc = 0.0;
    for (Index m = 0; m < N; ++m) acc += std::log1p(c * K(m, n) / std::max(C, 1e-300)) ;
    const Scalar data_term = C > 0.0 ? acc + static_cast<Scalar>(N) * std::log(C)
                                     : post.value(Y.col(n));
    Scalar prior = 0.0;
    const Scalar frob = Y.col(n).norm();
    if (frob >= radius) prior = post.prior_m() * (frob - radius) * (frob - radius);
    out[n] = prior - data_term;
  }
  return out;
}

// The mixture components couple only through the shared per-datum
// denominator, which is weak at small weight coefficients, so the global
// configuration is close to the best M one-component modes. A replica runs
// one-component EM from the densest data points, then full EM from
// combinations of the resulting modes, and keeps the lowest value.
OptReplica run_opt_replica(const GmmPosterior& post, const ReferenceConfig& cfg,
                           std::int64_t iters, Scalar jitter, RngStream& rng) {
  const Index d = post.data_dim(), N = post.data_count(), M = post.mixtures();
  const GmmPosterior single(post.data(), 1, post.sigma(), post.weight_coeff(),
                            post.constant_component(), post.prior_m(), post.prior_R());

  // Seed from the best data points by one-component value.
  const Vec point_values = single_component_values(single);
  std::vector<Index> order(static_cast<size_t>(N));
  for (Index n = 0; n < N; ++n) order[static_cast<size_t>(n)] = n;
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return point_values[a] < point_values[b]; });
  const Index seeds = std::min<Index>(N, std::max<Index>(cfg.opt_seed_cap, M + 2));

  const Scalar dedupe = std::max(1e-9, 0.25 * post.sigma());
  std::vector<std::pair<Scalar, Vec>> modes;  // (one-component value, position)
  Vec seed(d);
  for (Index s = 0; s < seeds; ++s) {
    seed = post.data().col(order[static_cast<size_t>(s)]);
    if (jitter > 0.0)
      for (Index j = 0; j < d; ++j) seed[j] += jitter * rng.gaussian();
    EmRunResult res = run_em(single, seed, nullptr, cfg.opt_stage1_iters,
                             /*stop_at_fixed_point=*/true, /*keep_trace=*/false,
                             /*stationary_tol=*/1e-12);
    const Vec& mode = res.state.mu;
    const Scalar v = single.value(mode);
    bool merged = false;
    for (auto& [mv, mp] : modes) {
      if ((mp - mode).norm() < dedupe) {
        if (v < mv) {
          mv = v;
          mp = mode;
        }
        merged = true;
        break;
      }
    }
    if (!merged) modes.emplace_back(v, mode);
  }
  std::sort(modes.begin(), modes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Candidate index sets: combinations of the best modes, padded cyclically
  // when fewer modes than components exist.
  const Index top = std::min<Index>(static_cast<Index>(modes.size()), M + 3);
  std::vector<std::vector<Index>> combos;
  std::vector<Index> pick;
  auto choose = [&](auto&& self, Index from) -> void {
    if (combos.size() >= 40) return;
    if (static_cast<Index>(pick.size()) == std::min<Index>(M, top)) {
      combos.push_back(pick);
      return;
    }
    for (Index i = from; i < top; ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  choose(choose, 0);

  OptReplica best;
  Vec mu0(d * M);
  auto polish = [&](const Vec& start) {
    EmRunResult res = run_em(post, start, nullptr, iters, /*stop_at_fixed_point=*/true,
                             /*keep_trace=*/false, /*stationary_tol=*/1e-13);
    const Scalar v = post.value(res.state.mu);
    if (v < best.value) {
      best.value = v;
      best.mu = res.state.mu;
    }
  };
  for (const auto& combo : combos) {
    for (Index i = 0; i < M; ++i) {
      const Index which = combo[static_cast<size_t>(i) % combo.size()];
      mu0.segment(i * d, d) = modes[static_cast<size_t>(which)].second;
      if (jitter > 0.0)
        for (Index j = 0; j < d; ++j) mu0[i * d + j] += jitter * rng.gaussian();
    }
    polish(mu0);
  }
  // Mixture components interact where kernels overlap, so whole-config basins
  // need not factor over modes; random data subsets cover those.
  for (Index s = 0; s < cfg.opt_random_subsets; ++s) {
    std::vector<Index> idx(static_cast<size_t>(N));
    for (Index n = 0; n < N; ++n) idx[static_cast<size_t>(n)] = n;
    for (Index i = 0; i < M; ++i) {
      const auto j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(N - i)));
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      mu0.segment(i * d, d) = post.data().col(idx[static_cast<size_t>(i)]);
      if (jitter > 0.0)
        for (Index j2 = 0; j2 < d; ++j2) mu0[i * d + j2] += jitter * rng.gaussian();
    }
    polish(mu0);
  }
  return best;
}

}  // namespace

References estimate_references(const GmmPosterior& post, const ReferenceConfig& cfg,
                               RngStream& rng) {
  if (cfg.opt_replicas < 1 || cfg.sampler_replicas < 1)
    throw std::invalid_argument("estimate_references: needs at least one replica per side");
  References refs;

  // EM side.
  std::int64_t opt_iters = cfg.opt_iters;
  for (int attempt = 0; cfg.want_opt && attempt <= cfg.max_retries; ++attempt) {
    std::vector<OptReplica> reps;
    for (int r = 0; r < cfg.opt_replicas; ++r) {
      RngStream stream = rng.derive(1000 + static_cast<std::uint64_t>(attempt) * 100 +
                                    static_cast<std::uint64_t>(r));
      reps.push_back(
          run_opt_replica(post, cfg, opt_iters, r == 0 ? 0.0 : cfg.init_jitter, stream));
    }
    Scalar lo = reps[0].value, hi = reps[0].value;
    size_t best = 0;
    for (size_t r = 1; r < reps.size(); ++r) {
      lo = std::min(lo, reps[r].value);
      hi = std::max(hi, reps[r].value);
      if (reps[r].value < reps[best].value) best = r;
    }
    refs.mu_star = reps[best].mu;
    refs.value_star = reps[best].value;
    refs.opt_spread = hi - lo;
    if (refs.opt_spread < cfg.opt_agreement_tol) {
      refs.opt_converged = true;
      break;
    }
    opt_iters *= 10;
  }

  if (cfg.want_sampler) {
    const SamplerReferences s = estimate_sampler_references(post, cfg, rng);
    refs.expected_value = s.expected_value;
    refs.expected_mu = s.expected_mu;
    refs.sampler_converged = s.converged;
    refs.value_spread = s.value_spread;
    refs.mean_spread = s.mean_spread;
  }
  return refs;
}

SamplerReferences estimate_sampler_references(const Objective& obj, const ReferenceConfig& cfg,
                                              RngStream& rng) {
  if (cfg.sampler_replicas < 1)
    throw std::invalid_argument("estimate_sampler_references: needs at least one replica");
  SamplerReferences refs;
  std::int64_t steps = cfg.sampler_steps;
  const Index D = obj.constants().dim;
  const Scalar h = cfg.sampler_step_size;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    std::vector<Scalar> values;
    std::vector<Vec> means;
    for (int r = 0; r < cfg.sampler_replicas; ++r) {
      RngStream stream = rng.derive(2000 + static_cast<std::uint64_t>(attempt) * 100 +
                                    static_cast<std::uint64_t>(r));
      const auto burn = steps / 10;
      Vec mean_acc = Vec::Zero(D);
      Scalar value_acc = 0.0;
      std::int64_t count = 0;
      Vec x = gaussian_vector(stream, D, std::sqrt(1.0 / obj.constants().L));
      auto [u, g] = obj.value_and_grad(x);
      for (std::int64_t k = 1; k <= steps; ++k) {
        if (!g.allFinite() || !std::isfinite(u))
          throw std::runtime_error("estimate_sampler_references: non-finite state");
        x = x - h * g + gaussian_vector(stream, D, std::sqrt(2.0 * h));
        std::tie(u, g) = obj.value_and_grad(x);
        if (k > burn) {
          mean_acc += x;
          value_acc += u;
          ++count;
        }
      }
      values.push_back(value_acc / static_cast<Scalar>(count));
      means.push_back(mean_acc / static_cast<Scalar>(count));
    }
    Scalar value_spread = 0.0, mean_spread = 0.0;
    for (size_t a = 0; a < values.size(); ++a)
      for (size_t b = a + 1; b < values.size(); ++b) {
        value_spread = std::max(value_spread, std::abs(values[a] - values[b]));
        mean_spread = std::max(mean_spread, (means[a] - means[b]).norm());
      }
    Scalar vbar = 0.0;
    Vec mbar = Vec::Zero(D);
    for (size_t rI = 0; rI < values.size(); ++rI) {
      vbar += values[rI];
      mbar += means[rI];
    }
    refs.expected_value = vbar / static_cast<Scalar>(values.size());
    refs.expected_mu = mbar / static_cast<Scalar>(means.size());
    refs.value_spread = value_spread;
    refs.mean_spread = mean_spread;
    if (value_spread < cfg.value_agreement_tol && mean_spread < cfg.mean_agreement_tol) {
      refs.converged = true;
      break;
    }
    steps *= 10;
  }
  return refs;
}

}  // namespace sampleopt
