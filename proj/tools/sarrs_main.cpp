// Command line front end: fit, simulate, benchmark.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sarrs/csv.hpp"
#include "sarrs/estimators.hpp"
#include "sarrs/simbench.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

sarrs::PenaltySpec build_penalty(const std::string& name, double lambda,
                                 std::optional<double> gamma, std::optional<double> cap) {
  return sarrs::PenaltySpec::auto_level(sarrs::penalty_kind(name), gamma, cap).at_level(lambda);
}

struct FitArgs {
  std::string x_path, y_path, output;
  std::string method = "sarrs";
  std::string penalty = "grlasso";
  std::string lambda = "auto";
  std::string rank = "auto";
  std::string init = "lowrank";
  std::string sigma = "auto";
  std::optional<double> gamma, cap;
  double eta = -1.0;
  double tol = 1e-7;
  int max_iter = 10000;
};

double parse_positive(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw sarrs::InputError(std::string(what) + " must be a number or \"auto\", got \"" + text +
                            "\"");
  }
}

int cmd_fit(const FitArgs& args) {
  const sarrs::Matrix x = sarrs::read_matrix_csv(args.x_path);
  const sarrs::Matrix y = sarrs::read_matrix_csv(args.y_path);

  sarrs::SarrsConfig config;
  config.solver.tol = args.tol;
  config.solver.max_iter = args.max_iter;
  config.eta = args.eta;

  if (args.init == "lowrank") config.init = sarrs::InitMethod::LowRank;
  else if (args.init == "sparse") config.init = sarrs::InitMethod::Sparse;
  else throw sarrs::InputError("unknown init \"" + args.init + "\"; expected lowrank or sparse");

  std::string rank_source = "auto";
  if (args.rank == "full") {
    config.rank = static_cast<int>(std::min(x.cols(), y.cols()));
    rank_source = "full";
  } else if (args.rank != "auto") {
    config.rank = static_cast<int>(parse_positive(args.rank, "--rank"));
    rank_source = "fixed";
  }

  if (args.sigma != "auto") config.sigma = parse_positive(args.sigma, "--sigma");

  std::string lambda_source = "auto";
  if (args.lambda == "auto") {
    config.auto_lambda = true;
    config.penalty =
        sarrs::PenaltySpec::auto_level(sarrs::penalty_kind(args.penalty), args.gamma, args.cap);
  } else {
    lambda_source = "flag";
    config.penalty =
        build_penalty(args.penalty, parse_positive(args.lambda, "--lambda"), args.gamma, args.cap);
  }

  sarrs::FitReport report;
  if (args.method == "sarrs") report = sarrs::sarrs_fit(x, y, config);
  else if (args.method == "bsw") report = sarrs::bsw_fit(x, y, config);
  else throw sarrs::InputError("unknown method \"" + args.method + "\"; expected sarrs or bsw");

  const fs::path out_csv = args.output + ".csv";
  const fs::path out_json = args.output + ".json";
  if (out_csv.has_parent_path()) fs::create_directories(out_csv.parent_path());
  sarrs::write_matrix_csv(out_csv.string(), report.a_hat);

  json side;
  side["command"] = "fit";
  side["method"] = args.method;
  side["penalty"] = args.penalty;
  side["lambda"] = report.diagnostics.lambda_used;
  side["lambda_source"] = lambda_source;
  side["rank_used"] = report.rank_used;
  side["rank_source"] = rank_source;
  side["rank_truncated"] = report.diagnostics.rank_truncated;
  side["sigma"] = report.diagnostics.sigma_used;
  side["sigma_source"] = report.diagnostics.sigma_source;
  side["init"] = report.diagnostics.init_method;
  side["eta_used"] = report.diagnostics.eta_used;
  side["support"] = report.support;
  side["support_size"] = report.support.size();
  side["gpls_invocations"] = report.diagnostics.gpls_invocations;
  side["gpls_sweeps"] = report.diagnostics.gpls_sweeps;
  side["alternations"] = report.diagnostics.alternations;
  side["elapsed_seconds"] = report.diagnostics.elapsed_seconds;
  side["inputs"] = {{"x", args.x_path}, {"y", args.y_path},
                    {"n", x.rows()},    {"p", x.cols()},
                    {"m", y.cols()}};
  side["output_csv"] = out_csv.string();
  std::ofstream js(out_json);
  if (!js) throw sarrs::InputError("cannot open \"" + out_json.string() + "\" for writing");
  js << side.dump(2) << '\n';

  std::cout << "fit: rank " << report.rank_used << ", support " << report.support.size()
            << ", lambda " << report.diagnostics.lambda_used << ", wrote " << out_csv.string()
            << " and " << out_json.string() << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string output;
  std::string preset;
  std::uint64_t seed = 1;
  std::optional<int> n, m, p, s, r, n_validation;
  std::optional<double> rho, sigma, b;
};

int cmd_simulate(const SimulateArgs& args) {
  sarrs::Scenario scenario;
  if (args.preset == "paper-high-dim") scenario = sarrs::Scenario::paper_high_dim();
  else if (args.preset == "paper-low-dim") scenario = sarrs::Scenario::paper_low_dim();
  else if (!args.preset.empty())
    throw sarrs::InputError("unknown preset \"" + args.preset +
                            "\"; expected paper-high-dim or paper-low-dim");
  if (args.preset.empty()) {
    if (!(args.n && args.m && args.p && args.s && args.r))
      throw sarrs::InputError("simulate needs --preset or all of --n --m --p --s --r");
    scenario.name = "custom";
  }
  if (args.n) scenario.n = *args.n;
  if (args.m) scenario.m = *args.m;
  if (args.p) scenario.p = *args.p;
  if (args.s) scenario.s = *args.s;
  if (args.r) scenario.r = *args.r;
  if (args.rho) scenario.rho = *args.rho;
  if (args.sigma) scenario.sigma = *args.sigma;
  if (args.b) scenario.signal = *args.b;
  scenario.n_validation = args.n_validation.value_or(0);
  scenario.validate();

  const sarrs::ScenarioData data = sarrs::generate_scenario(scenario, args.seed);
  fs::create_directories(args.output);
  const fs::path dir(args.output);
  sarrs::write_matrix_csv((dir / "x.csv").string(), data.x);
  sarrs::write_matrix_csv((dir / "y.csv").string(), data.y);
  sarrs::write_matrix_csv((dir / "a_true.csv").string(), data.a);
  json files = {{"x", "x.csv"}, {"y", "y.csv"}, {"a_true", "a_true.csv"}};
  if (scenario.n_validation > 0) {
    sarrs::write_matrix_csv((dir / "x_validation.csv").string(), data.x_validation);
    sarrs::write_matrix_csv((dir / "y_validation.csv").string(), data.y_validation);
    files["x_validation"] = "x_validation.csv";
    files["y_validation"] = "y_validation.csv";
  }

  json meta;
  meta["command"] = "simulate";
  if (!args.preset.empty()) meta["preset"] = args.preset;
  meta["n"] = scenario.n;
  meta["m"] = scenario.m;
  meta["p"] = scenario.p;
  meta["s"] = scenario.s;
  meta["r"] = scenario.r;
  meta["rho"] = scenario.rho;
  meta["sigma"] = scenario.sigma;
  meta["b"] = scenario.signal;
  meta["n_validation"] = scenario.n_validation;
  meta["seed"] = args.seed;
  meta["covariance"] = scenario.rho == 0.0 ? "identity" : "ar1";
  meta["files"] = files;
  std::ofstream js(dir / "meta.json");
  if (!js) throw sarrs::InputError("cannot open meta.json for writing");
  js << meta.dump(2) << '\n';

  std::cout << "simulate: wrote " << (scenario.n_validation > 0 ? 5 : 3) << " csv files and meta.json to "
            << args.output << '\n';
  return kExitOk;
}

struct BenchmarkArgs {
  std::string preset;
  std::string config_path;
  std::string output = ".";
  std::string format = "both";
  int reps = 0;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int threads = 0;
  int lambda_count = 0;
  std::optional<int> n_validation;
  bool quiet = false;
};

sarrs::BenchmarkConfig benchmark_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sarrs::InputError("cannot open config \"" + path + "\"");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw sarrs::InputError("config \"" + path + "\" is not valid JSON: " + err.what());
  }
  sarrs::BenchmarkConfig config;
  config.methods.clear();
  config.penalties.clear();
  if (!doc.contains("scenarios") || !doc["scenarios"].is_array())
    throw sarrs::InputError("config needs a \"scenarios\" array");
  for (const json& sj : doc["scenarios"]) {
    sarrs::Scenario sc;
    sc.name = sj.value("name", "scenario-" + std::to_string(config.scenarios.size()));
    sc.n = sj.value("n", 0);
    sc.m = sj.value("m", 0);
    sc.p = sj.value("p", 0);
    sc.s = sj.value("s", 0);
    sc.r = sj.value("r", 0);
    sc.rho = sj.value("rho", 0.0);
    sc.sigma = sj.value("sigma", 1.0);
    sc.signal = sj.value("b", 1.0);
    sc.n_validation = sj.value("n_validation", 2000);
    config.scenarios.push_back(sc);
  }
  for (const std::string& name : doc.value("methods", std::vector<std::string>{"sarrs", "bsw"}))
    config.methods.push_back(name == "sarrs" ? sarrs::Method::Sarrs
                             : name == "bsw" ? sarrs::Method::Bsw
                                             : throw sarrs::InputError("unknown method \"" + name +
                                                                       "\" in config"));
  for (const std::string& name :
       doc.value("penalties", std::vector<std::string>{"grlasso", "grmcp"}))
    config.penalties.push_back(sarrs::penalty_kind(name));
  config.replications = doc.value("replications", 50);
  config.master_seed = doc.value("master_seed", std::uint64_t{20230301});
  config.lambda_count = doc.value("lambda_count", 50);
  if (doc.contains("q_list")) config.q_list = doc["q_list"].get<std::vector<double>>();
  return config;
}

int cmd_benchmark(const BenchmarkArgs& args) {
  sarrs::BenchmarkConfig config;
  if (!args.config_path.empty() && !args.preset.empty())
    throw sarrs::InputError("--preset and --config are mutually exclusive");
  if (!args.config_path.empty()) {
    config = benchmark_from_json(args.config_path);
  } else if (args.preset == "table1") {
    config.scenarios = {sarrs::Scenario::paper_high_dim(0.5), sarrs::Scenario::paper_high_dim(1.0)};
  } else if (args.preset == "table2") {
    config.scenarios = {sarrs::Scenario::paper_low_dim(0.2), sarrs::Scenario::paper_low_dim(0.4)};
  } else if (args.preset == "smoke") {
    sarrs::Scenario sc = sarrs::Scenario::paper_high_dim(1.0);
    sc.name = "smoke";
    sc.n_validation = 400;
    config.scenarios = {sc};
    config.replications = 2;
    config.lambda_count = 10;
    config.penalties = {sarrs::PenaltyKind::GroupLasso};
  } else if (args.preset.empty()) {
    throw sarrs::InputError("benchmark needs --preset (table1, table2, smoke) or --config FILE");
  } else {
    throw sarrs::InputError("unknown preset \"" + args.preset +
                            "\"; expected table1, table2, or smoke");
  }
  if (args.reps > 0) config.replications = args.reps;
  if (args.have_seed) config.master_seed = args.seed;
  if (args.threads > 0) config.threads = args.threads;
  if (args.lambda_count > 0) config.lambda_count = args.lambda_count;
  if (args.n_validation)
    for (sarrs::Scenario& sc : config.scenarios) sc.n_validation = *args.n_validation;
  if (args.format != "csv" && args.format != "json" && args.format != "both")
    throw sarrs::InputError("--format must be csv, json, or both");

  sarrs::ProgressFn progress;
  if (!args.quiet) progress = [](const std::string& line) { std::cerr << line << '\n'; };
  const sarrs::BenchmarkResult result = sarrs::run_benchmark(config, progress);

  fs::create_directories(args.output);
  const fs::path dir(args.output);
  if (args.format != "json") {
    std::ofstream os(dir / "benchmark.csv", std::ios::binary);
    if (!os) throw sarrs::InputError("cannot open benchmark.csv for writing");
    os << sarrs::benchmark_to_csv(result);
  }
  if (args.format != "csv") {
    std::ofstream os(dir / "benchmark.json", std::ios::binary);
    if (!os) throw sarrs::InputError("cannot open benchmark.json for writing");
    os << sarrs::benchmark_to_json(result);
  }
  std::cout << "benchmark: " << result.cells.size() << " cells written to " << args.output << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse reduced-rank multivariate regression"};
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit coefficients from CSV data");
  fit_cmd->add_option("--x", fit.x_path, "Design matrix CSV")->required();
  fit_cmd->add_option("--y", fit.y_path, "Response matrix CSV")->required();
  fit_cmd->add_option("--output", fit.output, "Output path prefix")->required();
  fit_cmd->add_option("--method", fit.method, "sarrs or bsw");
  fit_cmd->add_option("--penalty", fit.penalty, "grlasso, grmcp, grscad, cappedl1");
  fit_cmd->add_option("--lambda", fit.lambda, "Penalty level or \"auto\"");
  fit_cmd->add_option("--gamma", fit.gamma, "Concavity parameter for grmcp/grscad");
  fit_cmd->add_option("--cap", fit.cap, "Cap for cappedl1 (default: lambda)");
  fit_cmd->add_option("--rank", fit.rank, "Rank: integer, \"auto\", or \"full\"");
  fit_cmd->add_option("--init", fit.init, "lowrank or sparse");
  fit_cmd->add_option("--sigma", fit.sigma, "Noise level or \"auto\"");
  fit_cmd->add_option("--eta", fit.eta, "Init threshold (default rule when negative)");
  fit_cmd->add_option("--tol", fit.tol, "Solver tolerance");
  fit_cmd->add_option("--max-iter", fit.max_iter, "Solver sweep cap");

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Write a synthetic data set");
  sim_cmd->add_option("--output", sim.output, "Output directory")->required();
  sim_cmd->add_option("--preset", sim.preset, "paper-high-dim or paper-low-dim");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--n", sim.n, "Training rows");
  sim_cmd->add_option("--m", sim.m, "Responses");
  sim_cmd->add_option("--p", sim.p, "Predictors");
  sim_cmd->add_option("--s", sim.s, "Nonzero coefficient rows");
  sim_cmd->add_option("--r", sim.r, "True rank");
  sim_cmd->add_option("--rho", sim.rho, "AR(1) correlation");
  sim_cmd->add_option("--sigma", sim.sigma, "Noise scale");
  sim_cmd->add_option("--b", sim.b, "Signal magnitude");
  sim_cmd->add_option("--n-validation", sim.n_validation, "Also write a validation pair");

  BenchmarkArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("benchmark", "Run the simulation benchmark");
  bench_cmd->add_option("--preset", bench.preset, "table1, table2, or smoke");
  bench_cmd->add_option("--config", bench.config_path, "Benchmark config JSON");
  bench_cmd->add_option("--output", bench.output, "Output directory");
  bench_cmd->add_option("--reps", bench.reps, "Replications per cell");
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->each([&](const std::string&) {
    bench.have_seed = true;
  });
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (default: SRRR_THREADS or cores)");
  bench_cmd->add_option("--lambda-count", bench.lambda_count, "Tuning grid size");
  bench_cmd->add_option("--n-validation", bench.n_validation, "Validation rows per scenario");
  bench_cmd->add_option("--format", bench.format, "csv, json, or both");
  bench_cmd->add_flag("--quiet", bench.quiet, "Suppress progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);
    app.exit(err);
    return kExitInput;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (bench_cmd->parsed()) return cmd_benchmark(bench);
    throw sarrs::InputError("no subcommand given");
  } catch (const sarrs::InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  } catch (const sarrs::NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "unexpected error: " << err.what() << '\n';
    return kExitNumerical;
  }
}
