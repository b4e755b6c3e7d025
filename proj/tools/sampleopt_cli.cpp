// Command-line front end: bounds, gen-data, run, sweep, validate, plot.
// Exit codes: 0 success, 1 user error, 2 internal error (validate failures
// and sweep total failure included), 3 sweep finished with some failed cells.

#include "sampleopt/bounds.hpp"
#include "sampleopt/diagnostics.hpp"
#include "sampleopt/gmm_data.hpp"
#include "sampleopt/harness.hpp"
#include "sampleopt/numerics.hpp"
#include "sampleopt/optimizers.hpp"
#include "sampleopt/samplers.hpp"
#include "sampleopt/serialize.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace so = sampleopt;
using nlohmann::json;

namespace {

std::string fd(so::Scalar v) { return so::format_double(v); }

int cmd_bounds(so::Scalar L, so::Scalar m, so::Scalar R, so::Scalar eps, so::Index dim,
               so::Scalar p, so::Scalar c, bool as_json, const std::string& out_path) {
  const so::BoundReport rep = so::make_bound_report(L, m, R, eps, dim, p, c);
  std::string text;
  if (as_json) {
    const json j{{"L", rep.L},
                 {"m", rep.m},
                 {"R", rep.R},
                 {"eps", rep.eps},
                 {"dim", rep.dim},
                 {"p", rep.p},
                 {"prefactor", rep.prefactor},
                 {"rho_lower", rep.rho_lower},
                 {"ula_mixing_upper", rep.ula_mixing_upper},
                 {"mala_mixing_upper", rep.mala_mixing_upper},
                 {"opt_queries_lower", rep.opt_queries_lower},
                 {"packing_eta", rep.packing_eta},
                 {"beta_required", rep.beta_required},
                 {"ula_step", rep.ula_step},
                 {"mala_step", rep.mala_step},
                 {"opt_bound_gap", rep.opt_bound_gap}};
    text = j.dump(2) + "\n";
  } else {
    char buf[256];
    auto row = [&](const char* name, const std::string& v) {
      std::snprintf(buf, sizeof(buf), "%-28s %s\n", name, v.c_str());
      text += buf;
    };
    row("L", fd(rep.L));
    row("m", fd(rep.m));
    row("R", fd(rep.R));
    row("eps", fd(rep.eps));
    row("dim", std::to_string(rep.dim));
    row("p", fd(rep.p));
    row("prefactor c", fd(rep.prefactor));
    row("rho lower bound", fd(rep.rho_lower));
    row("ULA mixing upper bound", fd(rep.ula_mixing_upper));
    row("MALA mixing upper bound", fd(rep.mala_mixing_upper));
    row("opt queries lower bound", fd(rep.opt_queries_lower));
    row("packing eta", std::to_string(rep.packing_eta));
    row("beta required", fd(rep.beta_required));
    row("ULA theorem step", fd(rep.ula_step));
    row("MALA theorem step", fd(rep.mala_step));
    if (rep.opt_bound_gap)
      text += "note: eps falls between the 1/64 validity and 1/36 fallback thresholds\n";
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text;
  }
  return 0;
}

int cmd_gen_data(const std::string& kind, so::Index dim, so::Index n, so::Index mixtures,
                 std::uint64_t seed, const std::string& out_path) {
  so::RngStream rng(seed, 0);
  so::Dataset ds = kind == "sparse" ? so::gen_sparse_dataset(dim, n, rng)
                                    : so::gen_adversarial_dataset(dim, mixtures, n, rng);
  const auto violations = so::validate_dataset(ds);
  if (!violations.empty()) {
    std::cerr << "generated dataset failed validation:\n";
    for (const auto& v : violations) std::cerr << "  " << v.to_string() << "\n";
    return 2;
  }
  so::save_json(so::to_json(ds), out_path);
  std::cout << "wrote " << out_path << " (" << (kind == "sparse" ? "sparse" : "adversarial")
            << ", d=" << ds.dim << ", N=" << ds.count << ")\n";
  return 0;
}

struct RunOptions {
  std::string algo = "ula";
  std::string objective = "quadratic";
  so::Index dim = 2;
  std::int64_t steps = 1000;
  std::uint64_t seed = 1;
  so::Scalar step_size = 0.0;  // 0: pick a default
  std::int64_t thinning = 1;
  std::string csv_path;
  std::string trajectory_path;
  std::string data_path;
  // quadratic
  so::Scalar curvature = 1.0;
  // packed well
  so::Scalar L = 1.0, m = 0.25, R = 2.0, eps = 0.02;
  std::int64_t max_wells = 1000000;
  // gmm
  so::Index mixtures = 0;
  so::Scalar sigma = 0.0, c_lambda = 0.0, const_c = 1.0, prior_m = 1.0 / 64.0, prior_R = 0.0;
};

std::shared_ptr<const so::Objective> make_objective(const RunOptions& opt, so::RngStream& rng,
                                                    std::shared_ptr<so::GmmPosterior>* gmm_out) {
  if (opt.objective == "quadratic") {
    return std::make_shared<so::QuadraticObjective>(opt.dim, opt.curvature);
  }
  if (opt.objective == "packedwell") {
    return std::make_shared<so::PackedWellObjective>(
        so::hard_objective_new(opt.L, opt.m, opt.R, opt.eps, opt.dim, rng, opt.max_wells));
  }
  if (opt.objective != "gmm") throw CLI::ValidationError("unknown objective " + opt.objective);
  if (opt.data_path.empty())
    throw CLI::ValidationError("--data is required for the gmm objective");
  if (!std::filesystem::exists(opt.data_path))
    throw std::invalid_argument("dataset file not found: " + opt.data_path);
  const so::Dataset ds = so::dataset_from_json(so::load_json(opt.data_path));
  const bool sparse = ds.kind == so::DatasetKind::Sparse;
  const so::Index M = opt.mixtures > 0 ? opt.mixtures : std::max<so::Index>(ds.mixtures, 1);
  so::Scalar sigma = opt.sigma;
  if (sigma <= 0.0)
    sigma = sparse ? 1.0 / std::sqrt(static_cast<so::Scalar>(ds.dim)) : ds.sigma;
  so::Scalar c_lambda = opt.c_lambda;
  if (c_lambda <= 0.0) c_lambda = sigma * sigma / (sparse ? 1000.0 : 3200.0);
  so::Scalar prior_R = opt.prior_R;
  if (prior_R <= 0.0) prior_R = sparse ? 2.0 * static_cast<so::Scalar>(ds.mixtures) : 0.5;
  auto post = std::make_shared<so::GmmPosterior>(ds.points, M, sigma, c_lambda, opt.const_c,
                                                 opt.prior_m, prior_R);
  if (gmm_out) *gmm_out = post;
  return post;
}

int cmd_run(const RunOptions& opt) {
  so::RngStream rng(opt.seed, 0);
  std::shared_ptr<so::GmmPosterior> gmm;
  const auto obj = make_objective(opt, rng, &gmm);

  if (opt.algo == "em" || opt.algo == "gd") {
    if (opt.algo == "em" && !gmm)
      throw CLI::ValidationError("em runs on the gmm objective only");
    std::ofstream traj;
    if (!opt.trajectory_path.empty()) {
      traj.open(opt.trajectory_path, std::ios::binary);
      traj << "iteration,value,movement\n";
    }
    if (opt.algo == "em") {
      so::Vec mu = so::em_init_from_data(*gmm, rng);
      so::Vec prev = mu;
      for (std::int64_t t = 1; t <= opt.steps; ++t) {
        const so::Mat gamma = so::em_e_step(*gmm, mu);
        std::vector<so::Index> dormant;
        so::Vec next = so::em_m_step(*gmm, gamma, &dormant);
        const so::Index d = gmm->data_dim();
        for (const so::Index i : dormant) next.segment(i * d, d) = mu.segment(i * d, d);
        prev = mu;
        mu = next;
        if (traj.is_open())
          traj << t << ',' << fd(gmm->value(mu)) << ',' << fd((mu - prev).norm()) << '\n';
      }
      std::cout << "em: iterations=" << opt.steps << " final_value=" << fd(gmm->value(mu))
                << "\n";
    } else {
      const so::Scalar h = opt.step_size > 0.0 ? opt.step_size : 1.0 / obj->constants().L;
      so::Vec x = gmm ? so::em_init_from_data(*gmm, rng)
                      : so::gaussian_vector(rng, obj->constants().dim,
                                            std::sqrt(1.0 / obj->constants().L));
      so::Vec prev = x;
      for (std::int64_t t = 1; t <= opt.steps; ++t) {
        prev = x;
        x = so::gd_step(*obj, x, h);
        if (traj.is_open())
          traj << t << ',' << fd(obj->value(x)) << ',' << fd((x - prev).norm()) << '\n';
      }
      std::cout << "gd: steps=" << opt.steps << " h=" << fd(h)
                << " final_value=" << fd(obj->value(x)) << "\n";
    }
    return 0;
  }

  if (opt.algo != "ula" && opt.algo != "mala")
    throw CLI::ValidationError("unknown algorithm " + opt.algo);
  so::ChainConfig config;
  const so::Scalar h = opt.step_size > 0.0 ? opt.step_size : 0.1 / obj->constants().L;
  config.schedule = so::StepSchedule::constant(h);
  config.max_steps = opt.steps;
  config.thinning = opt.thinning;
  const bool keep = !opt.csv_path.empty();
  const so::ChainRunResult res =
      so::run_chain(*obj, config, opt.algo == "ula" ? so::ChainKind::ULA : so::ChainKind::MALA,
                    rng, nullptr, keep);
  if (keep) {
    std::ofstream out(opt.csv_path, std::ios::binary);
    out << "step";
    for (so::Index j = 0; j < obj->constants().dim; ++j) out << ",x" << j;
    out << "\n";
    for (size_t i = 0; i < res.samples.size(); ++i) {
      out << (static_cast<std::int64_t>(i + 1) * opt.thinning);
      for (so::Index j = 0; j < res.samples[i].size(); ++j)
        out << ',' << fd(res.samples[i][j]);
      out << "\n";
    }
  }
  std::cout << opt.algo << ": steps=" << res.final_state.iteration
            << " gradient_queries=" << res.final_state.gradient_queries << " h=" << fd(h)
            << " final_value=" << fd(obj->value(res.final_state.x));
  if (opt.algo == "mala") std::cout << " acceptance_rate=" << fd(res.acceptance_rate);
  std::cout << "\n";
  return 0;
}

void apply_config_file(so::SweepConfig& cfg, const std::string& path) {
  const json j = so::load_json(path);
  auto get = [&](const char* name, auto& field) {
    if (j.contains(name)) field = j.at(name).get<std::decay_t<decltype(field)>>();
  };
  get("ula_dims", cfg.ula_dims);
  get("em_dims", cfg.em_dims);
  get("algos", cfg.algos);
  get("trials", cfg.trials);
  get("budget", cfg.budget);
  get("master_seed", cfg.master_seed);
  get("weight_divisor", cfg.weight_divisor);
  get("constant_component", cfg.constant_component);
  get("n_cap", cfg.n_cap);
  get("prior_m", cfg.prior_m);
  get("ula_h_scale", cfg.ula_h_scale);
  get("ula_h_max", cfg.ula_h_max);
  get("em_value_tol", cfg.em_value_tol);
  get("sampler_value_tol_rel", cfg.sampler_value_tol_rel);
  get("sampler_mean_tol_rel", cfg.sampler_mean_tol_rel);
  get("em_init_jitter", cfg.em_init_jitter);
  get("ref_opt_replicas", cfg.ref_opt_replicas);
  get("ref_opt_iters", cfg.ref_opt_iters);
  get("ref_opt_agreement", cfg.ref_opt_agreement);
  get("ref_sampler_replicas", cfg.ref_sampler_replicas);
  get("ref_sampler_steps", cfg.ref_sampler_steps);
  get("ref_agreement_frac", cfg.ref_agreement_frac);
  get("ref_max_retries", cfg.ref_max_retries);
  get("workers", cfg.workers);
  get("out_dir", cfg.out_dir);
  get("timings", cfg.timings);
  get("resume", cfg.resume);
}

int cmd_sweep(so::SweepConfig cfg, const std::vector<so::Index>& dims) {
  if (!dims.empty()) {
    cfg.ula_dims = dims;
    cfg.em_dims = dims;
  }
  const so::SweepResult result = so::sweep(cfg);
  std::cout << "algo dim median_queries exhausted_fraction\n";
  for (const so::CellSummary& s : result.summary) {
    std::cout << s.algo << ' ' << s.dim << ' ' << fd(s.median_queries) << ' '
              << fd(s.exhausted_fraction) << "\n";
  }
  if (result.failed_cells == static_cast<int>(result.records.size()) && !result.records.empty())
    return 2;
  return result.failed_cells > 0 ? 3 : 0;
}

int cmd_plot(const std::string& table_path, const std::string& out_path) {
  if (!std::filesystem::exists(table_path)) {
    std::cerr << "plot: no such table " << table_path << "\n";
    return 1;
  }
  const auto records = so::read_records_csv(table_path);
  if (records.empty()) {
    std::cerr << "plot: empty table\n";
    return 1;
  }
  std::int64_t budget = 0;
  for (const auto& r : records) budget = std::max(budget, r.queries);
  so::emit_plot(so::summarize(records), budget, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

// Fast oracle battery behind `validate`.
int cmd_validate(bool quick) {
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!ok && !detail.empty()) std::cout << ": " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
  };

  so::RngStream rng(20250101, 0);

  {  // log_sum_exp shift invariance
    bool ok = true;
    for (int t = 0; t < 50 && ok; ++t) {
      std::vector<so::Scalar> v(5);
      for (auto& x : v) x = 20.0 * rng.uniform() - 10.0;
      const so::Scalar c = 40.0 * rng.uniform() - 20.0;
      std::vector<so::Scalar> shifted = v;
      for (auto& x : shifted) x += c;
      ok = std::abs(so::log_sum_exp(shifted) - so::log_sum_exp(v) - c) < 1e-9;
    }
    report("log_sum_exp shift invariance", ok);
  }

  {  // gradient fidelity across objectives
    const int points = quick ? 10 : 100;
    bool ok = true;
    std::string detail;
    auto check = [&](const so::Objective& obj, const char* name) {
      for (int t = 0; t < points && ok; ++t) {
        so::Vec x = so::gaussian_vector(rng, obj.constants().dim, 1.0);
        const so::Vec g = obj.grad(x);
        const so::Vec fd_g =
            so::finite_diff_grad([&](const so::Vec& p) { return obj.value(p); }, x);
        const so::Scalar rel = (g - fd_g).norm() / std::max(1e-12, g.norm());
        if (rel >= 1e-5 && (g - fd_g).norm() >= 1e-10) {
          ok = false;
          detail = std::string(name) + " rel err " + fd(rel);
        }
      }
    };
    check(so::QuadraticObjective(4, 2.0), "quadratic");
    auto hard = so::hard_objective_new(2.0, 0.5, 4.0, 0.01, 3, rng, 1000);
    check(hard, "packedwell");
    so::Dataset ds = so::gen_sparse_dataset(4, 12, rng);
    so::GmmPosterior post(ds.points, 2, 0.5, 2.5e-4, 1.0, 1.0 / 64.0, 4.0);
    check(post, "gmm");
    check(so::TemperedObjective(std::make_shared<so::QuadraticObjective>(3, 1.0), 2.5),
          "tempered");
    report("gradient fidelity (finite differences)", ok, detail);
  }

  {  // packed-well boundary continuity
    so::RngStream local(7, 7);
    auto hard = so::hard_objective_new(2.0, 0.5, 4.0, 0.01, 3, local, 1000);
    const so::Scalar r = hard.well_radius();
    bool ok = true;
    for (int t = 0; t < 100 && ok; ++t) {
      so::Vec dir = so::gaussian_vector(local, 3, 1.0);
      dir /= dir.norm();
      const so::Vec c = hard.secret_center();
      const so::Scalar in = hard.value(c + dir * (r * (1 - 1e-9)));
      const so::Scalar out = hard.value(c + dir * (r * (1 + 1e-9)));
      ok = std::abs(in - out) < 1e-9;
    }
    report("packed-well boundary continuity", ok);
  }

  {  // packing validity
    bool ok = true;
    for (int t = 0; t < (quick ? 5 : 20) && ok; ++t) {
      const so::Scalar R_outer = 0.5 + rng.uniform();
      const so::Scalar r = R_outer * (0.05 + 0.3 * rng.uniform());
      const so::Index d = 1 + static_cast<so::Index>(rng.uniform_index(4));
      const so::Mat centers = so::packing_centers(R_outer, r, d, 2000);
      for (so::Index a = 0; a < centers.cols() && ok; ++a) {
        ok = centers.col(a).norm() <= (R_outer - r) * (1 + 1e-12);
        for (so::Index b = a + 1; b < centers.cols() && ok; ++b)
          ok = (centers.col(a) - centers.col(b)).norm() >= 2 * r * (1 - 1e-12);
      }
    }
    report("packing validity", ok);
  }

  {  // responsibilities column sums
    so::Dataset ds = so::gen_sparse_dataset(4, 10, rng);
    so::GmmPosterior post(ds.points, 2, 0.5, 2.5e-4, 1.0, 1.0 / 64.0, 4.0);
    const so::Vec mu = so::em_init_from_data(post, rng);
    const so::Mat gamma = so::gmm_responsibilities(post, mu);
    bool ok = true;
    for (so::Index n = 0; n < gamma.cols(); ++n) {
      const so::Scalar s = gamma.col(n).sum();
      ok = ok && s > 0.0 && s < 1.0;
    }
    report("responsibility column sums in (0,1)", ok);
  }

  {  // TV metric axioms
    so::GridSpec spec;
    spec.lo = so::Vec::Constant(1, -1.0);
    spec.hi = so::Vec::Constant(1, 1.0);
    spec.bins = {32};
    auto random_density = [&]() {
      so::GridDensity g;
      g.spec = spec;
      g.cells = so::Vec(32);
      for (so::Index i = 0; i < 32; ++i) g.cells[i] = rng.uniform();
      g.cells /= g.cells.sum();
      return g;
    };
    bool ok = true;
    for (int t = 0; t < 20 && ok; ++t) {
      const auto p = random_density(), q = random_density(), s = random_density();
      const so::Scalar pq = so::tv_distance(p, q);
      ok = so::tv_distance(p, p) == 0.0 && std::abs(pq - so::tv_distance(q, p)) < 1e-15 &&
           pq <= so::tv_distance(p, s) + so::tv_distance(s, q) + 1e-12 && pq >= 0.0 && pq <= 1.0;
    }
    report("tv_distance metric axioms", ok);
  }

  {  // grid density vs error-function oracle
    const so::QuadraticObjective quad(1, 1.0);
    so::GridSpec spec;
    spec.lo = so::Vec::Constant(1, -8.0);
    spec.hi = so::Vec::Constant(1, 8.0);
    spec.bins = {1600};
    const so::GridDensity g = so::grid_density(quad, spec);
    bool ok = true;
    const so::Scalar w = 16.0 / 1600;
    for (so::Index i = 0; i < 1600 && ok; ++i) {
      const so::Scalar a = -8.0 + i * w, b = a + w;
      const so::Scalar exact = 0.5 * (std::erf(b / std::sqrt(2.0)) - std::erf(a / std::sqrt(2.0)));
      ok = std::abs(g.cells[i] - exact) < 1e-4;
    }
    report("grid density matches Gaussian cells", ok);
  }

  {  // determinism and stream independence
    so::RngStream a(42, 1), b(42, 1), c(42, 2);
    bool same = true;
    so::Scalar corr = 0.0, va = 0.0, vc = 0.0;
    const int n = quick ? 10000 : 100000;
    for (int i = 0; i < n; ++i) {
      const so::Scalar xa = a.gaussian(), xb = b.gaussian(), xc = c.gaussian();
      same = same && xa == xb;
      corr += xa * xc;
      va += xa * xa;
      vc += xc * xc;
    }
    const so::Scalar r = corr / std::sqrt(va * vc);
    report("rng determinism + stream independence", same && std::abs(r) < 0.01,
           "corr=" + fd(r));
  }

  {  // MALA identity acceptance and rejection bit-exactness
    const so::QuadraticObjective quad(2, 1.0);
    so::ChainState st;
    st.x = so::Vec::Zero(2);
    so::RngStream local(3, 3);
    bool ok = true;
    for (int t = 0; t < 200; ++t) {
      const so::Vec before = st.x;
      st = so::mala_step(quad, std::move(st), 0.8, local);
      if (st.accepted_count == 0 && (st.x.array() != before.array()).any()) ok = false;
    }
    report("mala rejection keeps position bit-exactly", ok);
  }

  if (failures > 0) std::cout << failures << " checks failed\n";
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Samplers vs optimizers on locally nonconvex objectives"};
  app.require_subcommand(1);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "print closed-form bound calculators");
  so::Scalar bL = 1.0, bm = 1.0, bR = 0.0, beps = 0.5, bp = 1.0, bc = 1.0;
  so::Index bdim = 1;
  bool bjson = false;
  std::string bout;
  bounds_cmd->add_option("--L", bL, "Lipschitz smoothness");
  bounds_cmd->add_option("--m", bm, "strong convexity outside R");
  bounds_cmd->add_option("--R", bR, "radius of the nonconvex region");
  bounds_cmd->add_option("--eps", beps, "target accuracy in (0,1)");
  bounds_cmd->add_option("--dim", bdim, "dimension");
  bounds_cmd->add_option("--p", bp, "success probability");
  bounds_cmd->add_option("--c", bc, "prefactor holding the hidden constants");
  bounds_cmd->add_flag("--json", bjson, "emit JSON instead of aligned text");
  bounds_cmd->add_option("--out", bout, "write to a file instead of stdout");

  // gen-data
  auto* gen_cmd = app.add_subcommand("gen-data", "generate a dataset JSON file");
  std::string gkind = "sparse", gout = "dataset.json";
  so::Index gdim = 8, gn = 64, gm = 4;
  std::uint64_t gseed = 1;
  gen_cmd->add_option("--kind", gkind, "sparse | adversarial")
      ->check(CLI::IsMember({"sparse", "adversarial"}));
  gen_cmd->add_option("--dim", gdim, "data dimension");
  gen_cmd->add_option("--n", gn, "number of points");
  gen_cmd->add_option("--mixtures", gm, "mixture count (adversarial)");
  gen_cmd->add_option("--seed", gseed, "rng seed");
  gen_cmd->add_option("--out", gout, "output path")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "run one algorithm on one objective");
  RunOptions ropt;
  run_cmd->add_option("--algo", ropt.algo, "ula | mala | gd | em")
      ->check(CLI::IsMember({"ula", "mala", "gd", "em"}));
  run_cmd->add_option("--objective", ropt.objective, "quadratic | packedwell | gmm")
      ->check(CLI::IsMember({"quadratic", "packedwell", "gmm"}));
  run_cmd->add_option("--dim", ropt.dim, "dimension");
  run_cmd->add_option("--steps", ropt.steps, "steps / iterations");
  run_cmd->add_option("--seed", ropt.seed, "rng seed");
  run_cmd->add_option("--step", ropt.step_size, "step size (0 picks a default)");
  run_cmd->add_option("--thinning", ropt.thinning, "sample stream thinning factor");
  run_cmd->add_option("--csv", ropt.csv_path, "persist the sample stream as CSV");
  run_cmd->add_option("--trajectory", ropt.trajectory_path,
                      "persist iteration,value,movement CSV (em/gd)");
  run_cmd->add_option("--data", ropt.data_path, "dataset JSON (gmm objective)");
  run_cmd->add_option("--curvature", ropt.curvature, "quadratic curvature");
  run_cmd->add_option("--L", ropt.L, "packed well L");
  run_cmd->add_option("--m", ropt.m, "packed well m");
  run_cmd->add_option("--R", ropt.R, "packed well R");
  run_cmd->add_option("--eps", ropt.eps, "packed well value gap");
  run_cmd->add_option("--max-wells", ropt.max_wells, "packing truncation");
  run_cmd->add_option("--mixtures", ropt.mixtures, "gmm mixture count");
  run_cmd->add_option("--sigma", ropt.sigma, "gmm sigma (0 picks the protocol default)");
  run_cmd->add_option("--c-lambda", ropt.c_lambda, "gmm weight coefficient");
  run_cmd->add_option("--const-c", ropt.const_c, "gmm constant component C");
  run_cmd->add_option("--prior-m", ropt.prior_m, "gmm prior strength");
  run_cmd->add_option("--prior-R", ropt.prior_R, "gmm prior radius");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "dimension sweep comparing algorithms");
  so::SweepConfig scfg;
  std::vector<so::Index> sdims;
  std::string sconfig;
  sweep_cmd->add_option("--config", sconfig, "JSON config mirroring SweepConfig fields");
  sweep_cmd->add_option("--dims", sdims, "dims for every algorithm (overrides per-algo lists)")
      ->delimiter(',');
  sweep_cmd->add_option("--ula-dims", scfg.ula_dims, "sampler dims")->delimiter(',');
  sweep_cmd->add_option("--em-dims", scfg.em_dims, "optimizer dims")->delimiter(',');
  sweep_cmd->add_option("--algos", scfg.algos, "algorithms (em, gd, ula, mala)")->delimiter(',');
  sweep_cmd->add_option("--trials", scfg.trials, "trials per cell");
  sweep_cmd->add_option("--budget", scfg.budget, "gradient-query budget per run");
  sweep_cmd->add_option("--seed", scfg.master_seed, "master seed");
  sweep_cmd->add_option("--out-dir", scfg.out_dir, "artifact directory");
  sweep_cmd->add_option("--workers", scfg.workers,
                        "worker threads (0: SAMPLEOPT_WORKERS env or hardware)");
  bool no_resume = false;
  sweep_cmd->add_flag("--timings", scfg.timings,
                      "record wall-clock times (breaks rerun byte-identity)");
  sweep_cmd->add_flag("--no-resume", no_resume, "recompute every cell");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "run the oracle self-test battery");
  bool vquick = false;
  val_cmd->add_flag("--quick", vquick, "reduced sample counts");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "render a sweep CSV as an SVG figure");
  std::string ptable, pout = "sweep_plot.svg";
  plot_cmd->add_option("--table", ptable, "sweep raw CSV")->required();
  plot_cmd->add_option("--out", pout, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(bL, bm, bR, beps, bdim, bp, bc, bjson, bout);
    if (gen_cmd->parsed()) return cmd_gen_data(gkind, gdim, gn, gm, gseed, gout);
    if (run_cmd->parsed()) return cmd_run(ropt);
    if (sweep_cmd->parsed()) {
      if (!sconfig.empty()) apply_config_file(scfg, sconfig);
      if (no_resume) scfg.resume = false;
      return cmd_sweep(scfg, sdims);
    }
    if (val_cmd->parsed()) return cmd_validate(vquick);
    if (plot_cmd->parsed()) return cmd_plot(ptable, pout);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
