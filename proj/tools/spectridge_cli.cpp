// spectridge command line: simulate, estimate, benchmark, plot.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spectridge/bench.hpp"

using namespace spectridge;

namespace {

struct SimulateArgs {
  double mu = 1.0;
  double alpha = 0.5;
  double beta = 2.0;
  double T = 100.0;
  double burn_in = kDefaultBurnIn;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::string out;
};

struct EstimateArgs {
  std::string events;
  std::string method = "SLS";
  std::string mode = "none";
  double A = 2.0;
  double kappa = 0.0;
  std::vector<double> p_values;
  std::vector<int> log2_kappa_range;
  std::size_t n_thinnings = 10;
  std::size_t k = 4;
  std::uint64_t seed = 1;
};

struct BenchmarkArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> n_sim;
  bool no_plots = false;
};

struct PlotArgs {
  std::string summary;
  std::string selection;
  std::string out = ".";
};

int run_simulate(const SimulateArgs& a) {
  const HawkesParams params(a.mu, a.alpha, a.beta);
  const auto pattern = simulate(params, ObservationWindow(0.0, a.T), a.burn_in,
                                RngStream(a.seed, a.stream));
  if (a.out.empty()) {
    bench::write_events(std::cout, pattern);
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    bench::write_events(out, pattern);
  }
  std::cerr << pattern.count() << " events on [0, " << a.T << ")\n";
  return 0;
}

int run_estimate(const EstimateArgs& a) {
  std::ifstream in(a.events);
  if (!in) throw std::runtime_error("cannot read " + a.events);
  const PointPattern pattern = bench::read_events(in);
  const Method method = parse_method(a.method);
  const bench::EstimatorSpec spec(method, bench::parse_mode(a.mode));

  bench::ExperimentConfig config;
  config.A = a.A;
  config.loocv_k = a.k;
  config.cv.n_thinnings = a.n_thinnings;
  if (!a.p_values.empty()) config.cv.p_values = a.p_values;
  if (!a.log2_kappa_range.empty()) {
    if (a.log2_kappa_range.size() != 2) {
      throw CLI::ValidationError("--log2-kappa", "expects two integers");
    }
    const auto grid =
        power_of_two_grid(a.log2_kappa_range[0], a.log2_kappa_range[1]);
    config.pthin_kappas[method] = grid;
    config.loocv_kappas[method] = grid;
  }

  bench::ReplicationRecord rec;
  if (spec.mode() == bench::Mode::none) {
    FitOptions options;
    options.optimizer = config.optimizer;
    rec.method = method;
    try {
      const auto fit = fit_pattern(pattern, method, a.A, a.kappa, options);
      rec.estimate = fit.estimate;
      rec.converged = fit.converged;
      if (a.kappa > 0.0) rec.kappa_hat = a.kappa;
    } catch (const EstimationFailure& e) {
      std::cerr << "estimation failed: " << e.what() << '\n';
      return 2;
    }
  } else {
    rec = bench::run_estimator(pattern, spec, config, RngStream(a.seed, 0));
    if (rec.failed()) {
      std::cerr << "estimation failed\n";
      return 2;
    }
  }
  std::cout << "mu_hat,alpha_hat,beta_hat,p_hat,kappa_hat,converged\n"
            << bench::format_double(rec.estimate->mu) << ','
            << bench::format_double(rec.estimate->alpha) << ','
            << bench::format_double(rec.estimate->beta) << ','
            << (rec.p_hat ? bench::format_double(*rec.p_hat) : "") << ','
            << (rec.kappa_hat ? bench::format_double(*rec.kappa_hat) : "") << ','
            << (rec.converged ? 1 : 0) << '\n';
  return 0;
}

int run_benchmark(const BenchmarkArgs& a) {
  bench::ExperimentConfig config =
      a.config.empty() ? bench::ExperimentConfig{} : bench::load_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.out) config.output_dir = *a.out;
  if (a.jobs) config.jobs = *a.jobs;
  if (a.n_sim) config.n_sim = *a.n_sim;
  config.validate();
  const auto result = bench::run_experiment(config);
  std::size_t failed = 0;
  for (const auto& r : result.records) failed += r.failed() ? 1 : 0;
  std::cerr << result.records.size() << " records (" << failed
            << " failed) written to " << config.output_dir.string() << '\n';
  if (!a.no_plots) {
    try {
      bench::emit_plots(result.summary, result.selection, config.output_dir);
    } catch (const std::exception& e) {
      std::cerr << "warning: plotting failed, CSV output only: " << e.what()
                << '\n';
    }
  }
  return 0;
}

int run_plot(const PlotArgs& a) {
  std::ifstream summary_in(a.summary);
  if (!summary_in) throw std::runtime_error("cannot read " + a.summary);
  const auto summary = bench::read_summary_csv(summary_in);
  std::vector<bench::SelectionRow> selection;
  if (!a.selection.empty()) {
    std::ifstream selection_in(a.selection);
    if (!selection_in) throw std::runtime_error("cannot read " + a.selection);
    selection = bench::read_selection_csv(selection_in);
  }
  for (const auto& p : bench::emit_plots(summary, selection, a.out)) {
    std::cout << p.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ridge-penalised spectral estimation for Hawkes processes"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate an exponential Hawkes pattern");
  s->add_option("--mu", sim.mu, "Baseline intensity")->capture_default_str();
  s->add_option("--alpha", sim.alpha, "Branching ratio")->capture_default_str();
  s->add_option("--beta", sim.beta, "Decay rate")->capture_default_str();
  s->add_option("--T", sim.T, "Window length")->capture_default_str();
  s->add_option("--burn-in", sim.burn_in, "Burn-in duration")->capture_default_str();
  s->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  s->add_option("--stream", sim.stream, "Random stream id")->capture_default_str();
  s->add_option("--out", sim.out, "Event file (stdout if omitted)");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate (mu, alpha, beta) from an event file");
  e->add_option("--events", est.events, "Event file")->required();
  e->add_option("--method", est.method, "OLS, ML, SL, SLS or SP")->capture_default_str();
  e->add_option("--mode", est.mode, "none, pthin or loocv")->capture_default_str();
  e->add_option("--A", est.A, "Frequency half-width")->capture_default_str();
  e->add_option("--kappa", est.kappa, "Fixed ridge penalty for mode none")
      ->capture_default_str();
  e->add_option("--p-values", est.p_values, "p-thinning retention grid");
  e->add_option("--log2-kappa", est.log2_kappa_range,
                "Penalty grid 2^lo..2^hi (two integers)")
      ->expected(2);
  e->add_option("--n-thinnings", est.n_thinnings, "Thinnings per p")
      ->capture_default_str();
  e->add_option("--k", est.k, "LOOCV block count")->capture_default_str();
  e->add_option("--seed", est.seed, "Random seed for thinning")->capture_default_str();

  BenchmarkArgs bm;
  auto* b = app.add_subcommand("benchmark", "Run the Monte Carlo study");
  b->add_option("--config", bm.config, "JSON config file");
  b->add_option("--seed", bm.seed, "Override the config seed");
  b->add_option("--out", bm.out, "Override the output directory");
  b->add_option("--jobs", bm.jobs, "Override the worker count");
  b->add_option("--n-sim", bm.n_sim, "Override the replication count");
  b->add_flag("--no-plots", bm.no_plots, "Skip SVG output");

  PlotArgs pl;
  auto* p = app.add_subcommand("plot", "Draw charts from summary CSV files");
  p->add_option("--summary", pl.summary, "summary.csv")->required();
  p->add_option("--selection", pl.selection, "selection.csv");
  p->add_option("--out", pl.out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s) return run_simulate(sim);
    if (*e) return run_estimate(est);
    if (*b) return run_benchmark(bm);
    if (*p) return run_plot(pl);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
