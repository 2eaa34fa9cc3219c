#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sarrs/estimators.hpp"
#include "sarrs/matrix.hpp"

namespace sarrs {

// Simulation design: X rows are i.i.d. N(0, Sigma) with the autoregressive
// covariance Sigma_jk = rho^|j-k|; the coefficient matrix is b * B0 * B1 on
// its first s rows (B0 is s x r, B1 is r x m, standard gaussian entries) and
// zero below; Y = X A + sigma * Z.
struct Scenario {
  std::string name;
  Index n = 0, m = 0, p = 0;
  Index s = 0;        // nonzero coefficient rows
  Index r = 0;        // true rank, r <= min(s, m)
  double rho = 0.0;   // AR(1) correlation, in [0, 1)
  double sigma = 1.0; // noise scale, >= 0
  double signal = 1.0;  // coefficient magnitude b
  Index n_validation = 2000;

  void validate() const;
  static Scenario paper_high_dim(double signal = 0.5);  // n=30, m=10, p=100, s=15, r=2
  static Scenario paper_low_dim(double signal = 0.2);   // n=100, m=25, p=25, s=15, r=5
};

struct ScenarioData {
  Matrix x, a, y;
  Matrix x_validation, y_validation;
};

// Deterministic in (scenario, seed); training data is drawn before validation
// data, each block row-major.
ScenarioData generate_scenario(const Scenario& scenario, std::uint64_t seed);

// Fit quality against the truth and a held-out set.
struct Metrics {
  double prediction_error = 0.0;  // ||X_t A_hat - Y_t||_F^2 / (m * n_t)
  double estimation_error = 0.0;  // ||A_hat - A||_F^2 / (m * p)
  int support_size = 0;           // nonzero rows of a_hat
  std::vector<double> schatten_losses;  // schatten_norm_sq(A_hat - A, q) per requested q
};
Metrics evaluate(const Matrix& a_hat, const Matrix& a_true, const Matrix& x_test,
                 const Matrix& y_test, const std::vector<double>& q_list = {});

enum class Method { Sarrs, Bsw };
const char* method_name(Method m);

// Holdout tuning plan: fits at every lambda in the grid (and every rank
// candidate when given), scores prediction error on the validation pair, and
// keeps the minimizer; ties break toward the larger lambda.
struct CvPlan {
  std::vector<double> lambda_grid;     // strictly positive, ascending
  std::vector<int> rank_candidates;    // empty = rank resolved by the fit's init
  double validation_fraction = 0.2;    // used only by the self-splitting overload

  // 50 equally spaced levels in (0, lambda_grid_max(x, r, sigma)].
  static std::vector<double> default_grid(const Matrix& x, int r, double sigma, int count = 50);
};

struct CvResult {
  double best_lambda = 0.0;
  int best_rank = 0;               // 0 = rank came from the fit's init
  double best_score = 0.0;
  FitReport best_fit;
  int fits_attempted = 0;
  int fits_failed = 0;             // numerical failures skipped during the scan
  std::vector<int> invocations_per_fit;  // solver calls per successful fit
};

CvResult cross_validate(const Matrix& x, const Matrix& y, const Matrix& x_validation,
                        const Matrix& y_validation, const CvPlan& plan, Method method,
                        const SarrsConfig& base);

// Splits (x, y) by the plan's validation fraction (validation block = trailing
// rows) and delegates to the explicit-holdout overload.
CvResult cross_validate(const Matrix& x, const Matrix& y, const CvPlan& plan, Method method,
                        const SarrsConfig& base);

// One benchmark replication after tuning.
struct SimResult {
  bool completed = false;
  Metrics metrics;
  int r_hat = 0;
  double best_lambda = 0.0;
  int invocations_at_optimum = 0;     // solver calls of the tuned fit
  double mean_invocations_scan = 0.0;  // mean solver calls across the lambda scan
  double wall_time_seconds = 0.0;      // diagnostic only, never emitted in tables
};

struct BenchmarkCell {
  std::string scenario;
  Method method;
  PenaltyKind penalty;
  int replications = 0;
  int completed = 0;
  // Aggregates are (mean, sd) over completed replications; sd uses n-1.
  std::vector<std::pair<std::string, std::pair<double, double>>> stats;
};

struct BenchmarkConfig {
  std::vector<Scenario> scenarios;
  std::vector<Method> methods = {Method::Sarrs, Method::Bsw};
  std::vector<PenaltyKind> penalties = {PenaltyKind::GroupLasso, PenaltyKind::GroupMcp};
  int replications = 50;
  std::uint64_t master_seed = 20230301;
  std::vector<double> q_list;
  int lambda_count = 50;
  bool vary_seed_by_replication = true;  // off = degenerate identical replications
  int threads = 0;  // 0 = SRRR_THREADS env or hardware default
};

struct BenchmarkResult {
  std::vector<BenchmarkCell> cells;
};

using ProgressFn = std::function<void(const std::string&)>;
BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress = {});

// Table serializations (schema documented in the README): rows are
// scenario, method, penalty, metric, mean, sd, replications, completed.
std::string benchmark_to_csv(const BenchmarkResult& result);
std::string benchmark_to_json(const BenchmarkResult& result);

// Thread pool size: explicit requested value if > 0, else SRRR_THREADS, else
// hardware concurrency, clamped to [1, 64].
int harness_threads(int requested = 0);

// Runs fn(0..n_tasks-1) on a pool of `threads` workers; tasks own disjoint
// output slots so results are schedule-independent. First exception rethrown.
void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn);

}  // namespace sarrs
