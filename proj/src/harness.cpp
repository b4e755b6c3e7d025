#include "sampleopt/harness.hpp"

#include "sampleopt/numerics.hpp"
#include "sampleopt/optimizers.hpp"
#include "sampleopt/samplers.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sampleopt {

using nlohmann::json;

namespace {

Index floor_log2(Index v) {
  Index l = 0;
  while (v >= 2) {
    v /= 2;
    ++l;
  }
  return l;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t cell_seed(const SweepConfig& cfg, const CellKey& cell) {
  std::uint64_t h = RngStream::split_mix64(cfg.master_seed);
  h = RngStream::split_mix64(h ^ hash_string(cell.algo));
  h = RngStream::split_mix64(h ^ static_cast<std::uint64_t>(cell.dim));
  h = RngStream::split_mix64(h ^ static_cast<std::uint64_t>(cell.trial));
  return h;
}

GmmInstance build_instance(const SweepConfig& cfg, Index d, std::uint64_t data_salt,
                           bool want_opt, bool want_sampler) {
  const Index M = floor_log2(d);
  if (M < 1) throw std::invalid_argument("build_instance: dimension must be >= 2");
  const Scalar sigma = 1.0 / std::sqrt(static_cast<Scalar>(d));
  const Scalar c_lambda = sigma * sigma / cfg.weight_divisor;
  Index N = cfg.n_cap;
  if (d < 62 && (Index{1} << d) < N) N = Index{1} << d;
  const Scalar prior_R = 2.0 * static_cast<Scalar>(M);

  const Scalar constant =
      cfg.constant_component < 0.0 ? c_lambda : cfg.constant_component;

  GmmInstance inst;
  RngStream data_rng(cfg.master_seed,
                     RngStream::split_mix64(hash_string("data") ^
                                            RngStream::split_mix64(static_cast<std::uint64_t>(d)) ^
                                            data_salt));
  inst.dataset = gen_sparse_dataset(d, N, data_rng);
  inst.dataset.mixtures = M;  // mixture count used by the benchmark
  inst.posterior = std::make_shared<GmmPosterior>(inst.dataset.points, M, sigma, c_lambda,
                                                  constant, cfg.prior_m, prior_R);

  // Radial scales of the dominating profile r^{D-1} e^{-m (r - rb)^2}:
  // mode r*, width sigma_r, and the induced scale of U fluctuations.
  const Scalar D = static_cast<Scalar>(d * M);
  const Scalar rb = std::sqrt(static_cast<Scalar>(M)) * prior_R;
  const Scalar pm = cfg.prior_m;
  const Scalar r_star = 0.5 * rb + std::sqrt(0.25 * rb * rb + (D - 1.0) / (2.0 * pm));
  const Scalar sigma_r = 1.0 / std::sqrt((D - 1.0) / (r_star * r_star) + 2.0 * pm);
  const Scalar std_u = 2.0 * pm * (r_star - rb) * sigma_r;

  inst.ula_h = std::min(cfg.ula_h_scale * sigma_r * sigma_r, cfg.ula_h_max);
  inst.sampler_value_tol = cfg.sampler_value_tol_rel * std::max(1.0, std_u);
  inst.sampler_mean_tol = cfg.sampler_mean_tol_rel * r_star;

  ReferenceConfig rc;
  rc.opt_replicas = cfg.ref_opt_replicas;
  rc.opt_iters = cfg.ref_opt_iters;
  rc.opt_agreement_tol = cfg.ref_opt_agreement;
  rc.init_jitter = 0.01 * sigma;
  rc.sampler_replicas = cfg.ref_sampler_replicas;
  rc.sampler_steps = cfg.ref_sampler_steps;
  rc.sampler_step_size = inst.ula_h;
  rc.value_agreement_tol = cfg.ref_agreement_frac * inst.sampler_value_tol;
  rc.mean_agreement_tol = cfg.ref_agreement_frac * inst.sampler_mean_tol;
  rc.max_retries = cfg.ref_max_retries;
  rc.want_opt = want_opt;
  rc.want_sampler = want_sampler;

  RngStream ref_rng(cfg.master_seed,
                    RngStream::split_mix64(hash_string("refs") ^
                                           RngStream::split_mix64(static_cast<std::uint64_t>(d)) ^
                                           data_salt));
  inst.refs = estimate_references(*inst.posterior, rc, ref_rng);
  return inst;
}

namespace {

// Running tail averages: prefix sums snapshotted every kSnapshotStride steps;
// the first 10% of the trajectory is discarded as burn-in when comparing
// against the references. Convergence is therefore detected on a
// kSnapshotStride-step grid.
constexpr std::int64_t kSnapshotStride = 32;

struct TailAverager {
  explicit TailAverager(Index dim) : sum_x(Vec::Zero(dim)) {}

  Vec sum_x;
  Scalar sum_u = 0.0;
  std::int64_t count = 0;
  std::vector<Vec> snap_x;
  std::vector<Scalar> snap_u;

  void push(const Vec& x, Scalar u) {
    sum_x += x;
    sum_u += u;
    ++count;
    if (count % kSnapshotStride == 0) {
      snap_x.push_back(sum_x);
      snap_u.push_back(sum_u);
    }
  }

  bool ready() const { return count % kSnapshotStride == 0 && count > 0; }

  // Average over the most recent 90% (snapshot-aligned).
  std::pair<Scalar, Vec> tail_average() const {
    const std::int64_t burn = count / 10;
    const auto base = static_cast<std::int64_t>(burn / kSnapshotStride);  // snapshots to drop
    const std::int64_t base_count = base * kSnapshotStride;
    const Scalar denom = static_cast<Scalar>(count - base_count);
    if (base == 0) return {sum_u / denom, sum_x / denom};
    return {(sum_u - snap_u[static_cast<size_t>(base - 1)]) / denom,
            (sum_x - snap_x[static_cast<size_t>(base - 1)]) / denom};
  }
};

RunRecord base_record(const CellKey& cell, const SweepConfig& cfg, const GmmInstance& inst) {
  RunRecord rec;
  rec.algo = cell.algo;
  rec.objective = "gmm";
  rec.dim = inst.dataset.dim;
  rec.mixtures = inst.posterior->mixtures();
  rec.n_data = inst.dataset.count;
  rec.trial = cell.trial;
  rec.seed = cell_seed(cfg, cell);
  return rec;
}

// Optimizer trials restart from a fresh random data initialization whenever a
// run goes stationary away from the reference value; queries accumulate
// across restarts until the value criterion fires or the budget runs out.
void run_em_cell(RunRecord& rec, const SweepConfig& cfg, const GmmInstance& inst,
                 RngStream& rng) {
  if (!inst.refs.opt_converged) {
    rec.error = "non-convergent optimizer reference";
    rec.queries = cfg.budget;
    return;
  }
  const GmmPosterior& post = *inst.posterior;
  const Scalar vstar = inst.refs.value_star;
  std::int64_t used = 0;
  Scalar last_value = 0.0;
  while (used < cfg.budget) {
    const Vec mu0 = em_init_from_data(post, rng, cfg.em_init_jitter);
    Scalar fired_value = 0.0;
    auto stop = [&](const EmState&, Scalar value) {
      fired_value = value;
      return value - vstar < cfg.em_value_tol;
    };
    EmRunResult res = run_em(post, mu0, stop, cfg.budget - used, /*stop_at_fixed_point=*/true,
                             /*keep_trace=*/false, /*stationary_tol=*/1e-13);
    used += res.state.gradient_query_equivalents;
    last_value = post.value(res.state.mu);
    if (res.converged) {
      if (fired_value < vstar - 10.0 * cfg.em_value_tol) {
        rec.error = "trial undercut the reference optimum";  // reference failure guard
        break;
      }
      rec.converged = true;
      break;
    }
    if (!res.reached_fixed_point) break;  // budget exhausted mid-run
  }
  rec.queries = rec.converged ? used : cfg.budget;
  rec.final_value = last_value;
}

void run_gd_cell(RunRecord& rec, const SweepConfig& cfg, const GmmInstance& inst,
                 RngStream& rng) {
  if (!inst.refs.opt_converged) {
    rec.error = "non-convergent optimizer reference";
    rec.queries = cfg.budget;
    return;
  }
  const GmmPosterior& post = *inst.posterior;
  const Scalar h = 1.0 / post.constants().L;
  rec.step_size = h;
  const Scalar vstar = inst.refs.value_star;
  std::int64_t used = 0;
  Scalar value = 0.0;
  while (used < cfg.budget && !rec.converged) {
    Vec x = em_init_from_data(post, rng, cfg.em_init_jitter);
    value = post.value(x);
    Vec prev = x;
    while (used < cfg.budget) {
      x = gd_step(post, x, h);
      value = post.value(x);
      ++used;
      if (value - vstar < cfg.em_value_tol) {
        rec.converged = true;
        break;
      }
      if ((x - prev).cwiseAbs().maxCoeff() <= 1e-13) break;  // stationary: restart
      prev = x;
    }
  }
  rec.queries = rec.converged ? used : cfg.budget;
  rec.final_value = value;
}

void run_sampler_cell(RunRecord& rec, const SweepConfig& cfg, const GmmInstance& inst,
                      RngStream& rng, bool mala) {
  if (!inst.refs.sampler_converged) {
    rec.error = "non-convergent sampler reference";
    rec.queries = cfg.budget;
    return;
  }
  const GmmPosterior& post = *inst.posterior;
  const Index D = post.constants().dim;
  const std::int64_t queries_per_step = mala ? 2 : 1;
  const std::int64_t max_steps = cfg.budget / queries_per_step;

  Scalar h = inst.ula_h;
  for (int attempt = 0; attempt < 9; ++attempt) {
    RngStream stream = rng.derive(static_cast<std::uint64_t>(attempt));
    TailAverager avg(D);
    bool diverged = false;

    try {
      if (mala) {
        ChainState st;
        st.x = gaussian_vector(rng, D, std::sqrt(1.0 / post.constants().L));
        for (std::int64_t k = 0; k < max_steps; ++k) {
          st = mala_step(post, std::move(st), h, stream);
          avg.push(st.x, *st.cached_value);
          if (avg.ready()) {
            auto [au, ax] = avg.tail_average();
            if (std::abs(au - inst.refs.expected_value) < inst.sampler_value_tol &&
                (ax - inst.refs.expected_mu).norm() < inst.sampler_mean_tol) {
              rec.converged = true;
              rec.queries = st.gradient_queries;
              break;
            }
          }
        }
        rec.acceptance_rate =
            st.iteration > 0
                ? static_cast<Scalar>(st.accepted_count) / static_cast<Scalar>(st.iteration)
                : 0.0;
        rec.final_value = st.cached_value.value_or(0.0);
      } else {
        Vec x = gaussian_vector(rng, D, std::sqrt(1.0 / post.constants().L));
        auto [u, g] = post.value_and_grad(x);
        for (std::int64_t k = 1; k <= max_steps; ++k) {
          if (!g.allFinite()) throw std::runtime_error("non-finite gradient");
          x = x - h * g + gaussian_vector(stream, D, std::sqrt(2.0 * h));
          std::tie(u, g) = post.value_and_grad(x);
          if (!std::isfinite(u)) throw std::runtime_error("non-finite value");
          avg.push(x, u);
          if (avg.ready()) {
            auto [au, ax] = avg.tail_average();
            if (std::abs(au - inst.refs.expected_value) < inst.sampler_value_tol &&
                (ax - inst.refs.expected_mu).norm() < inst.sampler_mean_tol) {
              rec.converged = true;
              rec.queries = k;
              break;
            }
          }
        }
        rec.final_value = u;
      }
    } catch (const std::runtime_error&) {
      diverged = true;
    }
    if (!diverged) {
      rec.step_size = h;
      if (!rec.converged) rec.queries = cfg.budget;
      return;
    }
    h *= 0.5;  // divergence back-off, rerun with a smaller step
    rec.converged = false;
  }
  rec.error = "diverged at every step size tried";
  rec.step_size = h;
  rec.queries = cfg.budget;
}

}  // namespace

RunRecord run_experiment(const CellKey& cell, const SweepConfig& cfg, const GmmInstance& inst) {
  RunRecord rec = base_record(cell, cfg, inst);
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(rec.seed, 0);
  try {
    if (cfg.budget <= 0) {
      rec.queries = 0;
      rec.converged = false;
    } else if (cell.algo == "em") {
      run_em_cell(rec, cfg, inst, rng);
    } else if (cell.algo == "gd") {
      run_gd_cell(rec, cfg, inst, rng);
    } else if (cell.algo == "ula") {
      run_sampler_cell(rec, cfg, inst, rng, /*mala=*/false);
    } else if (cell.algo == "mala") {
      run_sampler_cell(rec, cfg, inst, rng, /*mala=*/true);
    } else {
      throw std::invalid_argument("unknown algorithm: " + cell.algo);
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.queries = std::min<std::int64_t>(rec.queries, cfg.budget);
    rec.converged = false;
  }
  // error rows carry a NaN final value so a resumed sweep recomputes them
  if (!rec.error.empty()) rec.final_value = std::numeric_limits<Scalar>::quiet_NaN();
  if (cfg.timings) {
    rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  }
  return rec;
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, Index>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) groups[{r.algo, r.dim}].push_back(&r);

  std::vector<CellSummary> out;
  for (const auto& [key, rows] : groups) {
    CellSummary s;
    s.algo = key.first;
    s.dim = key.second;
    s.trials = static_cast<int>(rows.size());
    std::vector<Scalar> queries;
    Scalar total = 0.0;
    int exhausted = 0;
    for (const RunRecord* r : rows) {
      if (!r->error.empty()) ++s.errors;
      const auto q = static_cast<Scalar>(r->queries);
      queries.push_back(q);
      total += q;
      if (!r->converged) ++exhausted;
    }
    std::sort(queries.begin(), queries.end());
    const size_t n = queries.size();
    s.median_queries = n % 2 == 1 ? queries[n / 2] : 0.5 * (queries[n / 2 - 1] + queries[n / 2]);
    s.mean_queries = total / static_cast<Scalar>(n);
    s.exhausted_fraction = static_cast<Scalar>(exhausted) / static_cast<Scalar>(n);
    out.push_back(s);
  }
  return out;
}

Scalar log_log_slope(const std::vector<CellSummary>& summary, const std::string& algo) {
  Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const CellSummary& s : summary) {
    if (s.algo != algo || s.median_queries <= 0.0) continue;
    const Scalar x = std::log(static_cast<Scalar>(s.dim));
    const Scalar y = std::log(s.median_queries);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  return (static_cast<Scalar>(n) * sxy - sx * sy) / (static_cast<Scalar>(n) * sxx - sx * sx);
}

std::string format_double(Scalar v) {
  char buf[40];
  for (const int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_records_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_records_csv: cannot open " + path);
  out << kCsvHeader << '\n';
  for (const RunRecord& r : records) {
    out << r.algo << ',' << r.objective << ',' << r.dim << ',' << r.mixtures << ',' << r.n_data
        << ',' << r.trial << ',' << r.seed << ',' << format_double(r.step_size) << ','
        << r.queries << ',' << (r.converged ? 1 : 0) << ',' << r.wall_ms << ','
        << format_double(r.final_value) << ',' << format_double(r.acceptance_rate) << '\n';
  }
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_records_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("read_records_csv: unexpected header in " + path);
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 13) throw std::runtime_error("read_records_csv: malformed row");
    RunRecord r;
    r.algo = fields[0];
    r.objective = fields[1];
    r.dim = std::stoll(fields[2]);
    r.mixtures = std::stoll(fields[3]);
    r.n_data = std::stoll(fields[4]);
    r.trial = std::stoi(fields[5]);
    r.seed = std::stoull(fields[6]);
    r.step_size = std::strtod(fields[7].c_str(), nullptr);
    r.queries = std::stoll(fields[8]);
    r.converged = fields[9] == "1";
    r.wall_ms = std::stoll(fields[10]);
    r.final_value = std::strtod(fields[11].c_str(), nullptr);
    r.acceptance_rate = std::strtod(fields[12].c_str(), nullptr);
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

bool record_less(const RunRecord& a, const RunRecord& b) {
  return std::tie(a.algo, a.dim, a.trial) < std::tie(b.algo, b.dim, b.trial);
}

int worker_count(const SweepConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("SAMPLEOPT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace

SweepResult sweep(const SweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (cfg.budget < 0) throw std::invalid_argument("sweep: budget must be >= 0");

  std::vector<CellKey> cells;
  for (const std::string& algo : cfg.algos) {
    const auto& dims = (algo == "em" || algo == "gd") ? cfg.em_dims : cfg.ula_dims;
    for (const Index d : dims)
      for (int t = 0; t < cfg.trials; ++t) cells.push_back({algo, d, t});
  }

  // Previously completed cells are reused when identity and seed both match.
  std::map<std::tuple<std::string, Index, int>, RunRecord> done;
  const std::string raw_path =
      cfg.out_dir.empty() ? std::string() : cfg.out_dir + "/sweep_raw.csv";
  if (cfg.resume && !raw_path.empty() && std::filesystem::exists(raw_path)) {
    for (RunRecord& r : read_records_csv(raw_path)) {
      if (std::isnan(r.final_value)) continue;  // error row, recompute
      done[{r.algo, r.dim, r.trial}] = std::move(r);
    }
  }

  std::vector<CellKey> pending;
  for (const CellKey& c : cells) {
    const auto it = done.find({c.algo, c.dim, c.trial});
    if (it == done.end() || it->second.seed != cell_seed(cfg, c)) pending.push_back(c);
  }

  // Sampler cells share one instance per dimension, built sequentially
  // before the workers start; optimizer cells re-draw their dataset per
  // trial, so each worker builds and discards its own instance. Instance
  // construction is a pure function of (config, dim, salt), so the execution
  // order cannot perturb results.
  const auto salt_of = [](const CellKey& c) -> std::uint64_t {
    return (c.algo == "em" || c.algo == "gd") ? static_cast<std::uint64_t>(c.trial) + 1 : 0;
  };
  std::map<Index, GmmInstance> shared_instances;
  for (const CellKey& c : pending) {
    if (salt_of(c) == 0 && !shared_instances.count(c.dim))
      shared_instances.emplace(c.dim, build_instance(cfg, c.dim, 0, false, true));
  }

  std::vector<RunRecord> fresh(pending.size());
  std::mutex io_mutex;
  std::ofstream append;
  if (!raw_path.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const bool existed = std::filesystem::exists(raw_path);
    append.open(raw_path, existed && cfg.resume ? std::ios::app : std::ios::trunc);
    if (!existed || !cfg.resume) append << kCsvHeader << '\n';
  }

  std::atomic<size_t> next{0};
  const int workers = std::min<int>(worker_count(cfg), std::max<size_t>(pending.size(), 1));
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const CellKey& c = pending[i];
      const std::uint64_t salt = salt_of(c);
      RunRecord rec =
          salt == 0 ? run_experiment(c, cfg, shared_instances.at(c.dim))
                    : run_experiment(c, cfg, build_instance(cfg, c.dim, salt, true, false));
      {
        std::lock_guard<std::mutex> lock(io_mutex);
        if (append.is_open()) {
          append << rec.algo << ',' << rec.objective << ',' << rec.dim << ',' << rec.mixtures
                 << ',' << rec.n_data << ',' << rec.trial << ',' << rec.seed << ','
                 << format_double(rec.step_size) << ',' << rec.queries << ','
                 << (rec.converged ? 1 : 0) << ',' << rec.wall_ms << ','
                 << format_double(rec.final_value) << ',' << format_double(rec.acceptance_rate)
                 << '\n';
          append.flush();
        }
      }
      fresh[i] = std::move(rec);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  append.close();

  SweepResult result;
  for (const CellKey& c : cells) {
    const auto it = done.find({c.algo, c.dim, c.trial});
    if (it != done.end() && it->second.seed == cell_seed(cfg, c)) result.records.push_back(it->second);
  }
  for (RunRecord& r : fresh) result.records.push_back(std::move(r));
  std::sort(result.records.begin(), result.records.end(), record_less);
  for (const RunRecord& r : result.records)
    if (!r.error.empty()) ++result.failed_cells;
  result.summary = summarize(result.records);

  if (!raw_path.empty()) {
    write_records_csv(result.records, raw_path);  // canonical sorted rewrite
    write_summary_json(result, cfg, cfg.out_dir + "/sweep_summary.json");
    emit_plot(result.summary, cfg.budget, cfg.out_dir + "/sweep_plot.svg");
  }
  return result;
}

void write_summary_json(const SweepResult& result, const SweepConfig& cfg,
                        const std::string& path) {
  json cellsj = json::array();
  for (const CellSummary& s : result.summary) {
    cellsj.push_back({{"algo", s.algo},
                      {"dim", s.dim},
                      {"median_queries", s.median_queries},
                      {"mean_queries", s.mean_queries},
                      {"exhausted_fraction", s.exhausted_fraction},
                      {"trials", s.trials},
                      {"errors", s.errors}});
  }
  json errors = json::array();
  for (const RunRecord& r : result.records)
    if (!r.error.empty())
      errors.push_back({{"algo", r.algo}, {"dim", r.dim}, {"trial", r.trial}, {"error", r.error}});

  const json j{{"budget", cfg.budget},
               {"trials", cfg.trials},
               {"master_seed", cfg.master_seed},
               {"query_exchange_rate",
                "1 EM sweep = 1 query, 1 ULA step = 1 query, 1 MALA step = 2 queries"},
               {"em_value_tol", cfg.em_value_tol},
               {"sampler_value_tol_rel", cfg.sampler_value_tol_rel},
               {"sampler_mean_tol_rel", cfg.sampler_mean_tol_rel},
               {"failed_cells", result.failed_cells},
               {"cells", cellsj},
               {"errors", errors}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_summary_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

void emit_plot(const std::vector<CellSummary>& summary, std::int64_t budget,
               const std::string& path) {
  if (summary.empty()) throw std::invalid_argument("emit_plot: empty table");

  const int width = 640, height = 480;
  const int mleft = 70, mright = 20, mtop = 30, mbottom = 50;
  Scalar dmin = 1e300, dmax = 0, qmin = 1e300, qmax = 0;
  for (const CellSummary& s : summary) {
    dmin = std::min(dmin, static_cast<Scalar>(s.dim));
    dmax = std::max(dmax, static_cast<Scalar>(s.dim));
    if (s.median_queries > 0) {
      qmin = std::min(qmin, s.median_queries);
      qmax = std::max(qmax, s.median_queries);
    }
  }
  if (qmin > qmax) {
    qmin = 1;
    qmax = static_cast<Scalar>(std::max<std::int64_t>(budget, 10));
  }
  qmin = std::max(qmin / 2, 0.5);
  qmax = std::max(qmax * 2, qmin * 10);
  if (dmax <= dmin) dmax = dmin + 1;

  const auto sx = [&](Scalar d) {
    return mleft + (d - dmin) / (dmax - dmin) * (width - mleft - mright);
  };
  const auto sy = [&](Scalar q) {
    const Scalar t = (std::log(q) - std::log(qmin)) / (std::log(qmax) - std::log(qmin));
    return height - mbottom - t * (height - mtop - mbottom);
  };
  const auto fmt = [](Scalar v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return std::string(buf);
  };

  std::vector<std::string> algos;
  for (const CellSummary& s : summary)
    if (std::find(algos.begin(), algos.end(), s.algo) == algos.end()) algos.push_back(s.algo);
  std::sort(algos.begin(), algos.end());
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << "median gradient queries to converge vs dimension</text>\n";
  // axes
  out << "<line x1=\"" << mleft << "\" y1=\"" << height - mbottom << "\" x2=\"" << width - mright
      << "\" y2=\"" << height - mbottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << mleft << "\" y1=\"" << mtop << "\" x2=\"" << mleft << "\" y2=\""
      << height - mbottom << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-size=\"12\">dimension d</text>\n";
  for (Scalar q = std::pow(10.0, std::ceil(std::log10(qmin))); q <= qmax; q *= 10) {
    out << "<line x1=\"" << mleft - 4 << "\" y1=\"" << fmt(sy(q)) << "\" x2=\"" << width - mright
        << "\" y2=\"" << fmt(sy(q)) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << mleft - 8 << "\" y=\"" << fmt(sy(q) + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">1e" << static_cast<int>(std::log10(q))
        << "</text>\n";
  }
  for (Scalar d = dmin; d <= dmax; d += std::max(1.0, std::floor((dmax - dmin) / 8))) {
    out << "<text x=\"" << fmt(sx(d)) << "\" y=\"" << height - mbottom + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << static_cast<int>(d) << "</text>\n";
  }

  for (size_t a = 0; a < algos.size(); ++a) {
    const std::string& algo = algos[a];
    const char* color = colors[a % 4];
    std::string pts;
    for (const CellSummary& s : summary) {
      if (s.algo != algo || s.median_queries <= 0) continue;
      pts += fmt(sx(static_cast<Scalar>(s.dim))) + "," + fmt(sy(s.median_queries)) + " ";
    }
    out << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    for (const CellSummary& s : summary) {
      if (s.algo != algo || s.median_queries <= 0) continue;
      const std::string x = fmt(sx(static_cast<Scalar>(s.dim)));
      const std::string y = fmt(sy(s.median_queries));
      if (s.exhausted_fraction > 0.0) {
        // budget-exhausted cells carry an x marker
        out << "<path d=\"M " << x << " " << y << " m -4 -4 l 8 8 m -8 0 l 8 -8\" stroke=\""
            << color << "\" stroke-width=\"2\"/>\n";
      } else {
        out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << color
            << "\"/>\n";
      }
    }
    out << "<text x=\"" << width - mright - 10 << "\" y=\"" << mtop + 16 * (a + 1)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << algo
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace sampleopt
