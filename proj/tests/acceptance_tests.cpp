// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Every tolerance is pinned in code next to its check.

#include "sampleopt/bounds.hpp"
#include "sampleopt/diagnostics.hpp"
#include "sampleopt/gmm_data.hpp"
#include "sampleopt/harness.hpp"
#include "sampleopt/numerics.hpp"
#include "sampleopt/optimizers.hpp"
#include "sampleopt/samplers.hpp"
#include "sampleopt/serialize.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace sampleopt;

namespace {

struct Criterion {
  int number;
  std::string name;
  std::function<bool(std::string&)> run;
  double budget_seconds;
};

bool nearly(Scalar a, Scalar b, Scalar rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

Scalar grad_rel_error(const Objective& obj, const Vec& x) {
  const Vec g = obj.grad(x);
  const Vec fd = finite_diff_grad([&](const Vec& p) { return obj.value(p); }, x);
  return (g - fd).norm() / std::max(g.norm(), 1e-12);
}

// ---------------------------------------------------------------- criterion 1
bool gradient_fidelity(std::string& why) {
  RngStream rng(101, 0);
  const auto check_points = [&](const Objective& obj, const char* name,
                                const std::function<bool(const Vec&)>& skip) {
    int checked = 0;
    while (checked < 100) {
      Vec x = gaussian_vector(rng, obj.constants().dim, 1.0);
      if (skip && skip(x)) continue;
      if (grad_rel_error(obj, x) >= 1e-5) {
        why = std::string(name) + " exceeded 1e-5 relative error";
        return false;
      }
      ++checked;
    }
    return true;
  };
  const auto no_skip = std::function<bool(const Vec&)>();

  const QuadraticObjective quad(6, 1.7);
  if (!check_points(quad, "quadratic", no_skip)) return false;

  RngStream make(102, 0);
  const auto hard = hard_objective_new(2.0, 0.5, 4.0, 0.01, 4, make, 100000);
  const auto near_boundary = [&](const Vec& x) {
    const Scalar margin = 10.0 * 1e-5 * std::max(1.0, x.cwiseAbs().maxCoeff());
    const Scalar to_well = std::abs((x - hard.secret_center()).norm() - hard.well_radius());
    const Scalar to_shell = std::abs(x.norm() - 0.5 * hard.constants().R);
    return to_well < margin || to_shell < margin;
  };
  if (!check_points(hard, "packed well", near_boundary)) return false;

  RngStream data_rng(103, 0);
  const Dataset ds = gen_sparse_dataset(5, 24, data_rng);
  const auto gmm =
      std::make_shared<GmmPosterior>(ds.points, 2, 0.5, 2.5e-4, 1.0, 1.0 / 64.0, 2.0);
  if (!check_points(*gmm, "gmm", no_skip)) return false;

  const TemperedObjective tq(std::make_shared<QuadraticObjective>(6, 1.7), 2.5);
  if (!check_points(tq, "tempered quadratic", no_skip)) return false;
  const TemperedObjective tg(gmm, 3.0);
  if (!check_points(tg, "tempered gmm", no_skip)) return false;
  const TemperedObjective th(std::make_shared<PackedWellObjective>(hard), 0.5);
  if (!check_points(th, "tempered packed well", near_boundary)) return false;
  return true;
}

// ---------------------------------------------------------------- criterion 2
bool hard_instance_exactness(std::string& why) {
  RngStream make(201, 0);
  const auto obj = hard_objective_new(1.0, 0.25, 2.0, 0.002, 3, make, 100000);
  const Scalar eps = obj.eps_gap(), r = obj.well_radius();
  const Scalar R = obj.constants().R, L = obj.constants().L, m = obj.constants().m;

  if (std::abs(obj.value(obj.secret_center()) + eps) > 1e-12) {
    why = "minimum at the secret center is not -eps";
    return false;
  }
  RngStream rng(202, 0);
  for (int t = 0; t < 200; ++t) {
    Vec x = gaussian_vector(rng, 3, 0.4);
    if ((x - obj.secret_center()).norm() <= r || x.norm() >= 0.5 * R) continue;
    if (obj.value(x) != 0.0) {
      why = "plateau value is not exactly zero";
      return false;
    }
  }
  for (int t = 0; t < 100; ++t) {
    Vec dir = gaussian_vector(rng, 3, 1.0);
    dir /= dir.norm();
    const Vec c = obj.secret_center();
    if (std::abs(obj.value(c + dir * (r * (1 - 1e-10))) -
                 obj.value(c + dir * (r * (1 + 1e-10)))) >= 1e-9 ||
        std::abs(obj.value(dir * (0.5 * R * (1 - 1e-10))) -
                 obj.value(dir * (0.5 * R * (1 + 1e-10)))) >= 1e-9) {
      why = "value continuity across a piece boundary exceeded 1e-9";
      return false;
    }
    if ((obj.grad(c + dir * (r * (1 - 1e-8))) - obj.grad(c + dir * (r * (1 + 1e-8)))).norm() >=
            1e-6 ||
        (obj.grad(dir * (0.5 * R * (1 - 1e-8))) -
         obj.grad(dir * (0.5 * R * (1 + 1e-8))))
                .norm() >= 1e-6) {
      why = "gradient continuity across a piece boundary exceeded 1e-6";
      return false;
    }
  }
  for (int t = 0; t < 1000; ++t) {
    Vec x = gaussian_vector(rng, 3, 0.9);
    Vec step = gaussian_vector(rng, 3, 0.3);
    if (step.norm() > R) step *= R / step.norm();
    const Vec z = x + step;
    if ((obj.grad(x) - obj.grad(z)).norm() > L * (x - z).norm() * (1 + 1e-6) + 1e-15) {
      why = "empirical L-smoothness violated";
      return false;
    }
  }
  for (int t = 0; t < 1000; ++t) {
    Vec dir = gaussian_vector(rng, 3, 1.0);
    dir /= dir.norm();
    const Vec x = dir * (R * (1.0 + 2.0 * rng.uniform()));
    const Vec z = dir * (R * (1.0 + 2.0 * rng.uniform()));
    if ((x - z).norm() < 1e-12) continue;
    if ((obj.grad(x) - obj.grad(z)).dot(x - z) <
        m * (x - z).squaredNorm() * (1 - 1e-6) - 1e-15) {
      why = "empirical strong convexity outside R violated";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 3
bool packing_validity(std::string& why) {
  RngStream rng(301, 0);
  for (int t = 0; t < 50; ++t) {
    const Scalar R_outer = 0.4 + 1.6 * rng.uniform();
    const Scalar r = R_outer * (0.04 + 0.4 * rng.uniform());
    const Index d = 1 + static_cast<Index>(rng.uniform_index(6));
    const Mat centers = packing_centers(R_outer, r, d, 3000);
    if (centers.cols() < 1) {
      why = "packing returned no centers for a feasible instance";
      return false;
    }
    for (Index a = 0; a < centers.cols(); ++a) {
      if (centers.col(a).norm() > (R_outer - r) * (1 + 1e-12)) {
        why = "center outside B(0, R_outer - r)";
        return false;
      }
      for (Index b = a + 1; b < centers.cols(); ++b) {
        if ((centers.col(a) - centers.col(b)).norm() < 2 * r * (1 - 1e-12)) {
          why = "pair of centers closer than 2r";
          return false;
        }
      }
    }
  }
  if (packing_number(1.0, 0.1, 2) != 20 || packing_number(0.3, 0.1, 5) != 1 ||
      packing_number(0.1, 0.2, 3) != 0 || packing_number(1.0, 0.1, 1) != 4) {
    why = "packing_number hand values mismatched";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- criterion 4
struct GridCounter {
  explicit GridCounter(const GridSpec& s) : spec(s), counts(Vec::Zero(s.cell_count())) {}
  GridSpec spec;
  Vec counts;
  std::int64_t clipped = 0, total = 0;

  void add(Scalar x) {
    const Scalar w = (spec.hi[0] - spec.lo[0]) / static_cast<Scalar>(spec.bins[0]);
    const auto idx = static_cast<Index>(std::floor((x - spec.lo[0]) / w));
    if (idx < 0 || idx >= spec.bins[0])
      ++clipped;
    else
      counts[idx] += 1.0;
    ++total;
  }
  GridDensity density() const {
    GridDensity g;
    g.spec = spec;
    g.cells = counts / static_cast<Scalar>(total);
    g.clipped_mass = static_cast<Scalar>(clipped) / static_cast<Scalar>(total);
    return g;
  }
};

bool sampler_oracle_1d(std::string& why) {
  RngStream make(401, 0);
  const auto obj = hard_objective_new(1.0, 0.25, 2.0, 0.02, 1, make, 1000);
  GridSpec spec;
  spec.lo = Vec::Constant(1, -6.0);
  spec.hi = Vec::Constant(1, 6.0);
  spec.bins = {1200};
  const GridDensity target = grid_density(obj, spec);

  const Scalar h = 1e-3;
  const std::int64_t steps = 2000000;

  RngStream ula_rng(402, 0);
  GridCounter ula_hist(spec);
  {
    Vec x = gaussian_vector(ula_rng, 1, 1.0);  // N(0, 1/L)
    for (std::int64_t k = 0; k < steps; ++k) {
      x = x - h * obj.grad(x) + gaussian_vector(ula_rng, 1, std::sqrt(2.0 * h));
      ula_hist.add(x[0]);
    }
  }
  const Scalar tv_ula = tv_distance(ula_hist.density(), target);

  RngStream mala_rng(403, 0);
  GridCounter mala_hist(spec);
  {
    ChainState st;
    st.x = gaussian_vector(mala_rng, 1, 1.0);
    for (std::int64_t k = 0; k < steps; ++k) {
      st = mala_step(obj, std::move(st), h, mala_rng);
      mala_hist.add(st.x[0]);
    }
  }
  const Scalar tv_mala = tv_distance(mala_hist.density(), target);

  char buf[160];
  std::snprintf(buf, sizeof(buf), "TV(ULA)=%.4f TV(MALA)=%.4f", tv_ula, tv_mala);
  why = buf;
  return tv_ula < 0.05 && tv_mala < 0.05 && tv_mala <= tv_ula + 0.01;
}

// ---------------------------------------------------------------- criterion 5
bool quadratic_moments(std::string& why) {
  const QuadraticObjective quad(1, 1.0);
  const Scalar h = 0.1;
  const std::int64_t steps = 1000000;

  RngStream ula_rng(501, 0);
  Vec x = Vec::Zero(1);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t k = 0; k < steps; ++k) {
    x = x - h * quad.grad(x) + gaussian_vector(ula_rng, 1, std::sqrt(2.0 * h));
    sum += x[0];
    sumsq += x[0] * x[0];
  }
  const double ula_var = sumsq / steps - (sum / steps) * (sum / steps);
  const double ar1 = 1.0 / (1.0 - h / 2.0);

  RngStream mala_rng(502, 0);
  ChainState st;
  st.x = Vec::Zero(1);
  sum = sumsq = 0.0;
  for (std::int64_t k = 0; k < steps; ++k) {
    st = mala_step(quad, std::move(st), h, mala_rng);
    sum += st.x[0];
    sumsq += st.x[0] * st.x[0];
  }
  const double mala_var = sumsq / steps - (sum / steps) * (sum / steps);
  const double acc = static_cast<double>(st.accepted_count) / static_cast<double>(steps);

  char buf[160];
  std::snprintf(buf, sizeof(buf), "ULA var=%.4f (AR1 %.4f), MALA var=%.4f acc=%.3f", ula_var,
                ar1, mala_var, acc);
  why = buf;
  return std::abs(ula_var - ar1) / ar1 < 0.02 && std::abs(mala_var - 1.0) < 0.03 && acc > 0.5;
}

// ---------------------------------------------------------------- criterion 6
bool em_trapping(std::string& why) {
  const Index d = 16, M = 4, N = 64;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    RngStream rng(600 + trial, 0);
    const Dataset ds = gen_adversarial_dataset(d, M, N, rng);
    const Scalar c_lambda = ds.sigma * ds.sigma / 3200.0;
    const GmmPosterior post(ds.points, M, ds.sigma, c_lambda, 1.0, 1.0 / 64.0, 0.5);

    // distinct non-anchor separated points
    std::vector<Index> targets;
    for (Index n = 0; n < ds.separated_count() && static_cast<Index>(targets.size()) < M; ++n)
      if (std::find(ds.anchors.begin(), ds.anchors.end(), n) == ds.anchors.end())
        targets.push_back(n);
    Vec mu0(d * M);
    for (Index i = 0; i < M; ++i) {
      Vec off = gaussian_vector(rng, d, 1.0);
      off *= (0.01 * rng.uniform()) / off.norm();
      mu0.segment(i * d, d) = ds.points.col(targets[static_cast<size_t>(i)]) + off;
    }
    const EmRunResult res = run_em(post, mu0, nullptr, 1000, false, false);
    for (Index i = 0; i < M; ++i) {
      const Scalar dist =
          (res.state.mu.segment(i * d, d) - ds.points.col(targets[static_cast<size_t>(i)]))
              .norm();
      if (dist > 0.01) {
        why = "component escaped its trap in trial " + std::to_string(trial);
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 7
bool headline_scaling(std::string& why) {
  SweepConfig cfg;  // defaults: 20 trials, 1e6 budget, ula dims 2..16
  cfg.em_dims = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};  // the full threshold window
  cfg.out_dir = "acceptance_out";
  const SweepResult result = sweep(cfg);

  if (result.failed_cells > 0) {
    why = std::to_string(result.failed_cells) + " cells recorded errors";
    return false;
  }
  for (const RunRecord& r : result.records) {
    if (r.algo == "ula" && !r.converged) {
      why = "ULA cell d=" + std::to_string(r.dim) + " trial " + std::to_string(r.trial) +
            " exhausted its budget";
      return false;
    }
  }
  const Scalar slope = log_log_slope(result.summary, "ula");
  if (!(slope <= 1.5)) {
    why = "ULA log-log slope " + format_double(slope) + " exceeds 1.5";
    return false;
  }

  // EM medians must rise strictly with d until the budget cap censors them,
  // and at least half the trials must exhaust the budget by d <= 12.
  std::vector<const CellSummary*> em_cells;
  for (const CellSummary& s : result.summary)
    if (s.algo == "em") em_cells.push_back(&s);
  std::sort(em_cells.begin(), em_cells.end(),
            [](const CellSummary* a, const CellSummary* b) { return a->dim < b->dim; });
  Index threshold_dim = -1;
  for (const CellSummary* s : em_cells) {
    if (s->exhausted_fraction >= 0.5) {
      threshold_dim = s->dim;
      break;
    }
  }
  if (threshold_dim < 0 || threshold_dim > 12) {
    why = "EM budget-exhaustion never reached 0.5 by d = 12";
    return false;
  }
  const Scalar cap = static_cast<Scalar>(cfg.budget);
  for (size_t i = 1; i < em_cells.size(); ++i) {
    const Scalar prev = em_cells[i - 1]->median_queries;
    const Scalar cur = em_cells[i]->median_queries;
    const bool both_censored = prev >= cap && cur >= cap;
    if (!both_censored && !(cur > prev)) {
      why = "EM median queries not strictly increasing at d = " +
            std::to_string(em_cells[i]->dim);
      return false;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "ULA slope %.3f, EM 50%%-exhaustion at d=%ld", slope,
                static_cast<long>(threshold_dim));
  why = buf;
  return true;
}

// ---------------------------------------------------------------- criterion 8
bool bound_calculators(std::string& why) {
  const Scalar well = 2.0 * std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> +
                      std::numbers::pi_v<Scalar>;
  struct Row {
    const char* name;
    Scalar got, want;
  };
  const Row rows[] = {
      {"rho(1,1,0)", log_sobolev_lower_bound(1.0, 1.0, 0.0), 0.5},
      {"rho(2,1,0)", log_sobolev_lower_bound(2.0, 1.0, 0.0), 1.0},
      {"rho(1,1,0.25)", log_sobolev_lower_bound(1.0, 1.0, 0.25), 0.18393972058572116},
      {"ula_mix", ula_mixing_bound(0.5, 4, 1.0, 0.5, 0.5, 1.0), 528958.11176591973},
      {"ula_mix_unit", ula_mixing_bound(0.5, 4, 1.0, 1.0, 0.0, 1.0), 16.0 * std::log(16.0)},
      {"mala_mix", mala_mixing_bound(std::exp(-1.0), 1, 2.0, 1.0, 0.0, 1.0),
       6.2314205349492308},
      {"ula_step", ula_theorem_stepsize({2.0, 1.0, 0.5, 4}, 0.5, 1.0), 5.24160356097675e-06},
      {"mala_step", mala_theorem_stepsize({2.0, 1.0, 0.0, 1}, std::exp(-1.0), 1.0),
       0.27171126889348030},
      {"opt_lower", optimization_lower_bound(well, 4.0, 1.0 / 16.0, 2, 1.0), 12.0},
      {"opt_lower_p0", optimization_lower_bound(well, 4.0, 1.0 / 16.0, 2, 0.0), 0.0},
      {"opt_fallback", optimization_lower_bound(1.0, 1.0, 0.9, 3, 1.0), 1.0},
      {"beta_req", beta_requirement(0.5, 2, 4.0 * well, 1.0, 1.0), 2.0 * std::log(2.0)},
      {"beta_req_d4", beta_requirement(0.5, 4, 4.0 * well, 1.0, 1.0), 4.0 * std::log(2.0)},
      {"packing20", static_cast<Scalar>(packing_number(1.0, 0.1, 2)), 20.0},
      {"packing1", static_cast<Scalar>(packing_number(0.3, 0.1, 4)), 1.0},
      {"packing0", static_cast<Scalar>(packing_number(0.1, 0.2, 3)), 0.0},
  };
  for (const Row& row : rows) {
    if (!nearly(row.got, row.want, 1e-9)) {
      why = std::string(row.name) + " = " + format_double(row.got) + ", expected " +
            format_double(row.want);
      return false;
    }
  }
  // monotonicity sweeps
  for (Index d = 1; d < 10; ++d) {
    if (ula_mixing_bound(0.3, d + 1, 1.0, 0.5, 0.3, 1.0) <=
            ula_mixing_bound(0.3, d, 1.0, 0.5, 0.3, 1.0) ||
        mala_mixing_bound(0.3, d + 1, 1.0, 0.5, 0.3, 1.0) <=
            mala_mixing_bound(0.3, d, 1.0, 0.5, 0.3, 1.0)) {
      why = "mixing bounds not increasing in d";
      return false;
    }
  }
  for (const Scalar eps : {0.04, 0.08, 0.16, 0.32}) {
    if (ula_mixing_bound(eps, 4, 1.0, 0.5, 0.3, 1.0) <=
            ula_mixing_bound(2 * eps, 4, 1.0, 0.5, 0.3, 1.0) ||
        mala_mixing_bound(eps, 4, 1.0, 0.5, 0.3, 1.0) <
            mala_mixing_bound(2 * eps, 4, 1.0, 0.5, 0.3, 1.0)) {
      why = "mixing bounds not decreasing in eps";
      return false;
    }
  }
  for (const Scalar R : {0.0, 0.2, 0.4}) {
    if (ula_mixing_bound(0.3, 4, 1.0, 0.5, R + 0.1, 1.0) <=
            ula_mixing_bound(0.3, 4, 1.0, 0.5, R, 1.0) ||
        mala_mixing_bound(0.3, 4, 1.0, 0.5, R + 0.1, 1.0) <=
            mala_mixing_bound(0.3, 4, 1.0, 0.5, R, 1.0)) {
      why = "mixing bounds not increasing in R";
      return false;
    }
  }
  for (const Scalar kappa : {1.0, 2.0, 4.0}) {
    if (ula_mixing_bound(0.3, 4, 2.0 * kappa, 1.0, 0.3, 1.0) <=
        ula_mixing_bound(0.3, 4, kappa, 1.0, 0.3, 1.0)) {
      why = "ula mixing bound not increasing in kappa";
      return false;
    }
  }
  for (Index d = 1; d < 6; ++d) {
    if (optimization_lower_bound(well, 4.0, 1.0 / 16.0, d + 1, 1.0) <
        optimization_lower_bound(well, 4.0, 1.0 / 16.0, d, 1.0)) {
      why = "optimization bound not nondecreasing in d";
      return false;
    }
  }
  for (const Scalar eps : {1.0 / 16.0, 1.0 / 32.0}) {
    if (optimization_lower_bound(well, 4.0, eps / 2.0, 3, 1.0) <
        optimization_lower_bound(well, 4.0, eps, 3, 1.0)) {
      why = "optimization bound not nondecreasing in 1/eps";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 9
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  return std::string(std::istreambuf_iterator<char>(in), {});
}

bool determinism_and_persistence(std::string& why) {
  const char* cli = std::getenv("SAMPLEOPT_CLI");
  if (!cli) {
    why = "SAMPLEOPT_CLI is not set";
    return false;
  }
  const std::string dir = "determinism_out";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto run = [&](const std::string& args) {
    const std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  const auto twice_identical = [&](const std::string& args_a, const std::string& file_a,
                                   const std::string& args_b, const std::string& file_b) {
    if (!run(args_a) || !run(args_b)) return false;
    return slurp(file_a) == slurp(file_b) && !slurp(file_a).empty();
  };

  if (!twice_identical("bounds --L 1 --m 0.5 --R 0.3 --eps 0.25 --dim 6 --json --out " + dir +
                           "/b1.json",
                       dir + "/b1.json",
                       "bounds --L 1 --m 0.5 --R 0.3 --eps 0.25 --dim 6 --json --out " + dir +
                           "/b2.json",
                       dir + "/b2.json")) {
    why = "bounds output not byte-identical";
    return false;
  }

  if (!twice_identical(
          "gen-data --kind adversarial --dim 16 --n 64 --mixtures 4 --seed 11 --out " + dir +
              "/d1.json",
          dir + "/d1.json",
          "gen-data --kind adversarial --dim 16 --n 64 --mixtures 4 --seed 11 --out " + dir +
              "/d2.json",
          dir + "/d2.json")) {
    why = "gen-data output not byte-identical";
    return false;
  }
  // dataset round-trips through JSON and re-validates
  {
    const Dataset ds = dataset_from_json(load_json(dir + "/d1.json"));
    if (!validate_dataset(ds).empty()) {
      why = "re-loaded dataset failed validation";
      return false;
    }
    save_json(to_json(ds), dir + "/d1_rt.json");
    if (slurp(dir + "/d1_rt.json") != slurp(dir + "/d1.json")) {
      why = "dataset JSON round-trip is not byte-identical";
      return false;
    }
  }

  if (!twice_identical(
          "run --algo ula --objective quadratic --dim 2 --steps 1000 --seed 7 --csv " + dir +
              "/u1.csv",
          dir + "/u1.csv",
          "run --algo ula --objective quadratic --dim 2 --steps 1000 --seed 7 --csv " + dir +
              "/u2.csv",
          dir + "/u2.csv")) {
    why = "run CSV not byte-identical";
    return false;
  }
  if (!twice_identical("run --algo mala --objective packedwell --dim 2 --eps 0.002 --steps 500 "
                       "--seed 3 --csv " +
                           dir + "/m1.csv",
                       dir + "/m1.csv",
                       "run --algo mala --objective packedwell --dim 2 --eps 0.002 --steps 500 "
                       "--seed 3 --csv " +
                           dir + "/m2.csv",
                       dir + "/m2.csv")) {
    why = "mala run CSV not byte-identical";
    return false;
  }

  // a small sweep twice into fresh directories, then a plot from its table
  const std::string sweep_args =
      "sweep --dims 2 --algos em,ula --trials 2 --budget 60000 --seed 5 --no-resume --out-dir ";
  if (!run(sweep_args + dir + "/s1") || !run(sweep_args + dir + "/s2")) {
    why = "sweep invocation failed";
    return false;
  }
  for (const char* f : {"sweep_raw.csv", "sweep_summary.json", "sweep_plot.svg"}) {
    if (slurp(dir + "/s1/" + f) != slurp(dir + "/s2/" + f)) {
      why = std::string("sweep artifact ") + f + " not byte-identical";
      return false;
    }
  }
  if (!twice_identical("plot --table " + dir + "/s1/sweep_raw.csv --out " + dir + "/p1.svg",
                       dir + "/p1.svg",
                       "plot --table " + dir + "/s1/sweep_raw.csv --out " + dir + "/p2.svg",
                       dir + "/p2.svg")) {
    why = "plot output not byte-identical";
    return false;
  }
  std::filesystem::remove_all(dir);
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "gradient fidelity vs finite differences", gradient_fidelity, 10.0},
      {2, "hard-instance exactness", hard_instance_exactness, 30.0},
      {3, "packing validity", packing_validity, 10.0},
      {4, "sampler oracle in d=1 (grid TV)", sampler_oracle_1d, 300.0},
      {5, "ULA bias / MALA exactness on the quadratic", quadratic_moments, 60.0},
      {6, "EM trapping on the adversarial dataset", em_trapping, 60.0},
      {7, "headline scaling sweep", headline_scaling, 3600.0},
      {8, "bound calculators", bound_calculators, 1.0},
      {9, "determinism & persistence", determinism_and_persistence, 60.0},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > c.budget_seconds) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("runtime ") +
                std::to_string(elapsed) + "s exceeded " + std::to_string(c.budget_seconds) + "s";
    }
    std::printf("%s criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", c.number,
                c.name.c_str(), elapsed, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures == 0) std::printf("all %zu criteria passed\n", criteria.size());
  return failures;
}
