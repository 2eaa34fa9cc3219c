#include "sarrs/simbench.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <sstream>
#include <thread>

#include "sarrs/rng.hpp"

namespace sarrs {

void Scenario::validate() const {
  if (n < 2 || m < 1 || p < 1) throw InputError("scenario dimensions must be positive (n >= 2)");
  if (s < 1 || s > p)
    throw InputError("scenario sparsity s must lie in [1, p], got " + std::to_string(s));
  if (r < 1 || r > std::min(s, m))
    throw InputError("scenario rank r must lie in [1, min(s, m)], got " + std::to_string(r));
  if (!(rho >= 0.0 && rho < 1.0))
    throw InputError("scenario correlation rho must lie in [0, 1), got " + std::to_string(rho));
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InputError("scenario noise level must be a finite nonnegative real");
  if (!(signal > 0.0) || !std::isfinite(signal))
    throw InputError("scenario signal magnitude must be positive");
  if (n_validation < 0) throw InputError("scenario validation size must be nonnegative");
}

Scenario Scenario::paper_high_dim(double signal) {
  Scenario s;
  s.name = "high-dim-b" + std::to_string(signal).substr(0, 4);
  s.n = 30; s.m = 10; s.p = 100; s.s = 15; s.r = 2;
  s.rho = 0.1; s.sigma = 1.0; s.signal = signal;
  return s;
}

Scenario Scenario::paper_low_dim(double signal) {
  Scenario s;
  s.name = "low-dim-b" + std::to_string(signal).substr(0, 4);
  s.n = 100; s.m = 25; s.p = 25; s.s = 15; s.r = 5;
  s.rho = 0.1; s.sigma = 1.0; s.signal = signal;
  return s;
}

namespace {

// Lower Cholesky factor of the AR(1) covariance rho^|j-k|.
Matrix ar1_cholesky(Index p, double rho) {
  if (rho == 0.0) return Matrix::Identity(p, p);
  Matrix cov(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index k = 0; k < p; ++k) cov(j, k) = std::pow(rho, std::abs(double(j - k)));
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("AR(1) covariance factorization failed at rho = " + std::to_string(rho));
  return llt.matrixL();
}

}  // namespace

ScenarioData generate_scenario(const Scenario& sc, std::uint64_t seed) {
  sc.validate();
  const Matrix chol = ar1_cholesky(sc.p, sc.rho);

  // Independent substreams per block keep the coefficient draw invariant to
  // the sample sizes.
  Rng coef_rng = Rng::derive(seed, 1);
  Rng train_rng = Rng::derive(seed, 2);
  Rng vld_rng = Rng::derive(seed, 3);

  const Matrix b0 = coef_rng.gaussian_matrix(sc.s, sc.r);
  const Matrix b1 = coef_rng.gaussian_matrix(sc.r, sc.m);
  Matrix a = Matrix::Zero(sc.p, sc.m);
  a.topRows(sc.s) = sc.signal * b0 * b1;

  ScenarioData data;
  data.a = a;
  data.x = train_rng.gaussian_matrix(sc.n, sc.p) * chol.transpose();
  data.y = data.x * a + sc.sigma * train_rng.gaussian_matrix(sc.n, sc.m);
  if (sc.n_validation > 0) {
    data.x_validation = vld_rng.gaussian_matrix(sc.n_validation, sc.p) * chol.transpose();
    data.y_validation =
        data.x_validation * a + sc.sigma * vld_rng.gaussian_matrix(sc.n_validation, sc.m);
  }
  return data;
}

Metrics evaluate(const Matrix& a_hat, const Matrix& a_true, const Matrix& x_test,
                 const Matrix& y_test, const std::vector<double>& q_list) {
  require_finite(a_hat, "coefficient estimate");
  require_finite(a_true, "true coefficients");
  if (a_hat.rows() != a_true.rows() || a_hat.cols() != a_true.cols())
    throw InputError("coefficient estimate and truth have different shapes");
  if (x_test.cols() != a_hat.rows() || x_test.rows() != y_test.rows() ||
      y_test.cols() != a_hat.cols())
    throw InputError("test data is inconsistent with the coefficient shape");
  if (x_test.rows() == 0) throw InputError("test set is empty");

  Metrics out;
  const double mn = static_cast<double>(y_test.cols()) * static_cast<double>(y_test.rows());
  out.prediction_error = (x_test * a_hat - y_test).squaredNorm() / mn;
  out.estimation_error =
      (a_hat - a_true).squaredNorm() /
      (static_cast<double>(a_hat.rows()) * static_cast<double>(a_hat.cols()));
  for (Index j = 0; j < a_hat.rows(); ++j)
    if (a_hat.row(j).norm() > 0.0) ++out.support_size;
  for (double q : q_list) out.schatten_losses.push_back(schatten_norm_sq(a_hat - a_true, SchattenQ(q)));
  return out;
}

const char* method_name(Method m) { return m == Method::Sarrs ? "sarrs" : "bsw"; }

std::vector<double> CvPlan::default_grid(const Matrix& x, int r, double sigma, int count) {
  if (count < 1) throw InputError("lambda grid needs at least one point");
  const double top = lambda_grid_max(x, r, sigma);
  if (!(top > 0.0))
    throw NumericalError("lambda grid endpoint is zero; noise level or design is degenerate");
  std::vector<double> grid(count);
  for (int k = 1; k <= count; ++k) grid[k - 1] = top * static_cast<double>(k) / count;
  return grid;
}

CvResult cross_validate(const Matrix& x, const Matrix& y, const Matrix& x_validation,
                        const Matrix& y_validation, const CvPlan& plan, Method method,
                        const SarrsConfig& base) {
  if (plan.lambda_grid.empty()) throw InputError("tuning plan has an empty lambda grid");
  for (std::size_t i = 0; i < plan.lambda_grid.size(); ++i) {
    if (!(plan.lambda_grid[i] > 0.0))
      throw InputError("lambda grid entries must be positive");
    if (i > 0 && plan.lambda_grid[i] <= plan.lambda_grid[i - 1])
      throw InputError("lambda grid must be strictly ascending");
  }
  if (x_validation.rows() == 0 || x_validation.rows() != y_validation.rows())
    throw InputError("validation pair is empty or mismatched");

  std::vector<int> ranks;
  if (plan.rank_candidates.empty()) {
    ranks.push_back(0);  // resolved by the fit's init
  } else {
    ranks = plan.rank_candidates;
    for (int r : ranks)
      if (r < 1) throw InputError("rank candidates must be positive");
  }

  CvResult out;
  out.best_score = std::numeric_limits<double>::infinity();
  bool have_best = false;
  std::string last_failure;
  for (int rank : ranks) {
    for (double lambda : plan.lambda_grid) {
      SarrsConfig config = base;
      config.auto_lambda = false;
      config.penalty = base.penalty.at_level(lambda);
      if (rank > 0) config.rank = rank;
      out.fits_attempted++;
      FitReport fit;
      try {
        fit = method == Method::Sarrs ? sarrs_fit(x, y, config) : bsw_fit(x, y, config);
      } catch (const NumericalError& err) {
        out.fits_failed++;
        last_failure = err.what();
        continue;
      }
      const double mn =
          static_cast<double>(y_validation.cols()) * static_cast<double>(y_validation.rows());
      const double score = (x_validation * fit.a_hat - y_validation).squaredNorm() / mn;
      const int solves = method == Method::Sarrs ? fit.diagnostics.gpls_invocations
                                                 : fit.diagnostics.alternations;
      out.invocations_per_fit.push_back(solves);
      // Ties break toward the larger lambda; the grid ascends, so <= keeps
      // the later fit.
      const bool better =
          score < out.best_score ||
          (score == out.best_score && rank == out.best_rank && lambda > out.best_lambda);
      if (!have_best || better) {
        have_best = true;
        out.best_score = score;
        out.best_lambda = lambda;
        out.best_rank = rank;
        out.best_fit = std::move(fit);
      }
    }
  }
  if (!have_best)
    throw NumericalError("every tuning fit failed; last failure: " + last_failure);
  return out;
}

CvResult cross_validate(const Matrix& x, const Matrix& y, const CvPlan& plan, Method method,
                        const SarrsConfig& base) {
  if (!(plan.validation_fraction > 0.0 && plan.validation_fraction < 1.0))
    throw InputError("validation fraction must lie in (0, 1)");
  const Index n = x.rows();
  const Index n_vld = std::max<Index>(1, static_cast<Index>(std::floor(
                                             plan.validation_fraction * static_cast<double>(n))));
  if (n_vld >= n) throw InputError("not enough rows to hold out a validation block");
  const Index n_train = n - n_vld;
  return cross_validate(x.topRows(n_train), y.topRows(n_train), x.bottomRows(n_vld),
                        y.bottomRows(n_vld), plan, method, base);
}

int harness_threads(int requested) {
  if (requested > 0) return std::min(requested, 64);
  if (const char* env = std::getenv("SRRR_THREADS")) {
    int value = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end || value < 1)
      throw InputError(std::string("SRRR_THREADS must be a positive integer, got \"") + env +
                       "\"");
    return std::min(value, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<int>(static_cast<int>(hw == 0 ? 1 : hw), 1, 64);
}

void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn) {
  if (n_tasks <= 0) return;
  threads = std::clamp(threads, 1, n_tasks);
  if (threads == 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n_tasks) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct RepOutcome {
  bool completed = false;
  SimResult result;
};

SimResult run_replication(const Scenario& sc, Method method, PenaltyKind kind,
                          const BenchmarkConfig& config, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioData data = generate_scenario(sc, seed);
  if (data.x_validation.rows() <= sc.p)
    throw InputError("benchmark needs n_validation > p to estimate the noise level");

  // Residual noise estimate from the held-out block.
  const Matrix resid =
      data.y_validation - project_onto_column_space(data.x_validation, data.y_validation);
  const double df = static_cast<double>(sc.m) * static_cast<double>(data.x_validation.rows()) -
                    static_cast<double>(sc.m) * static_cast<double>(sc.p);
  const double sigma_hat = std::sqrt(resid.squaredNorm() / df);

  SarrsConfig base;
  base.init = InitMethod::LowRank;
  base.sigma = sigma_hat;
  // Shape defaults only; the tuning scan fills the level (and the capped-L1
  // cap tracks it).
  base.penalty = PenaltySpec::auto_level(kind);

  const InitResult init = init_low_rank(data.x, data.y, sigma_hat);
  CvPlan plan;
  plan.lambda_grid =
      CvPlan::default_grid(data.x, init.r_hat, sigma_hat, config.lambda_count);

  const CvResult cv = cross_validate(data.x, data.y, data.x_validation, data.y_validation, plan,
                                     method, base);

  SimResult out;
  out.completed = true;
  out.metrics = evaluate(cv.best_fit.a_hat, data.a, data.x_validation, data.y_validation,
                         config.q_list);
  out.r_hat = cv.best_fit.rank_used;
  out.best_lambda = cv.best_lambda;
  out.invocations_at_optimum = method == Method::Sarrs
                                   ? cv.best_fit.diagnostics.gpls_invocations
                                   : cv.best_fit.diagnostics.alternations;
  double sum = 0.0;
  for (int v : cv.invocations_per_fit) sum += v;
  out.mean_invocations_scan =
      cv.invocations_per_fit.empty() ? 0.0 : sum / static_cast<double>(cv.invocations_per_fit.size());
  out.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress) {
  if (config.scenarios.empty()) throw InputError("benchmark has no scenarios");
  if (config.methods.empty()) throw InputError("benchmark has no methods");
  if (config.penalties.empty()) throw InputError("benchmark has no penalties");
  if (config.replications < 1) throw InputError("benchmark needs at least one replication");
  for (const Scenario& sc : config.scenarios) sc.validate();

  struct Task {
    std::size_t cell;
    int rep;
    std::uint64_t scenario_index;
  };
  std::vector<BenchmarkCell> cells;
  std::vector<Task> tasks;
  for (std::size_t si = 0; si < config.scenarios.size(); ++si)
    for (Method method : config.methods)
      for (PenaltyKind kind : config.penalties) {
        BenchmarkCell cell;
        cell.scenario = config.scenarios[si].name;
        cell.method = method;
        cell.penalty = kind;
        cell.replications = config.replications;
        for (int rep = 0; rep < config.replications; ++rep)
          tasks.push_back({cells.size(), rep, si});
        cells.push_back(std::move(cell));
      }

  std::vector<RepOutcome> outcomes(tasks.size());
  const int threads = harness_threads(config.threads);
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int ti) {
    const Task& task = tasks[static_cast<std::size_t>(ti)];
    const BenchmarkCell& cell = cells[task.cell];
    const Scenario& sc = config.scenarios[task.scenario_index];
    // The data seed depends on (scenario, replication) only, so every
    // method/penalty cell sees the same replicated data sets.
    const std::uint64_t rep_index = config.vary_seed_by_replication ? task.rep : 0;
    Rng seed_rng = Rng::derive(config.master_seed, task.scenario_index, rep_index);
    const std::uint64_t seed = seed_rng.engine()();
    RepOutcome& slot = outcomes[static_cast<std::size_t>(ti)];
    try {
      slot.result = run_replication(sc, cell.method, cell.penalty, config, seed);
      slot.completed = true;
    } catch (const NumericalError&) {
      slot.completed = false;
    }
  });

  // Aggregate per cell in task order (deterministic, schedule-free).
  std::vector<std::vector<SimResult>> per_cell(cells.size());
  for (std::size_t ti = 0; ti < tasks.size(); ++ti)
    if (outcomes[ti].completed) per_cell[tasks[ti].cell].push_back(outcomes[ti].result);

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    BenchmarkCell& cell = cells[ci];
    const auto& reps = per_cell[ci];
    cell.completed = static_cast<int>(reps.size());
    auto collect = [&](const std::string& name, auto getter) {
      std::vector<double> xs;
      xs.reserve(reps.size());
      for (const SimResult& r : reps) xs.push_back(static_cast<double>(getter(r)));
      cell.stats.emplace_back(name, mean_sd(xs));
    };
    collect("pred_err", [](const SimResult& r) { return r.metrics.prediction_error; });
    collect("est_err", [](const SimResult& r) { return r.metrics.estimation_error; });
    collect("support", [](const SimResult& r) { return r.metrics.support_size; });
    collect("r_hat", [](const SimResult& r) { return r.r_hat; });
    collect("lambda", [](const SimResult& r) { return r.best_lambda; });
    collect("solves_at_opt", [](const SimResult& r) { return r.invocations_at_optimum; });
    collect("solves_scan_mean", [](const SimResult& r) { return r.mean_invocations_scan; });
    for (std::size_t qi = 0; qi < config.q_list.size(); ++qi)
      collect("schatten_q" + format_double(config.q_list[qi]),
              [qi](const SimResult& r) { return r.metrics.schatten_losses[qi]; });
    if (progress)
      progress(cell.scenario + " " + method_name(cell.method) + " " + penalty_name(cell.penalty) +
               ": " + std::to_string(cell.completed) + "/" +
               std::to_string(cell.replications) + " replications");
  }

  return {std::move(cells)};
}

std::string benchmark_to_csv(const BenchmarkResult& result) {
  std::ostringstream os;
  os << "scenario,method,penalty,metric,mean,sd,replications,completed\n";
  for (const BenchmarkCell& cell : result.cells)
    for (const auto& [metric, ms] : cell.stats)
      os << cell.scenario << ',' << method_name(cell.method) << ',' << penalty_name(cell.penalty)
         << ',' << metric << ',' << format_double(ms.first) << ',' << format_double(ms.second)
         << ',' << cell.replications << ',' << cell.completed << '\n';
  return os.str();
}

std::string benchmark_to_json(const BenchmarkResult& result) {
  std::ostringstream os;
  os << "{\n  \"cells\": [\n";
  for (std::size_t ci = 0; ci < result.cells.size(); ++ci) {
    const BenchmarkCell& cell = result.cells[ci];
    os << "    {\"scenario\": \"" << cell.scenario << "\", \"method\": \""
       << method_name(cell.method) << "\", \"penalty\": \"" << penalty_name(cell.penalty)
       << "\", \"replications\": " << cell.replications << ", \"completed\": " << cell.completed
       << ", \"stats\": {";
    for (std::size_t si = 0; si < cell.stats.size(); ++si) {
      const auto& [metric, ms] = cell.stats[si];
      os << "\"" << metric << "\": {\"mean\": " << format_double(ms.first)
         << ", \"sd\": " << format_double(ms.second) << "}";
      if (si + 1 < cell.stats.size()) os << ", ";
    }
    os << "}}";
    os << (ci + 1 < result.cells.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace sarrs
