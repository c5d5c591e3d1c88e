#pragma once

// Monte Carlo benchmark of the five estimators under their penalisation
// modes: simulation sweep, per-replication records, MSE summaries,
// hyperparameter-selection tables and SVG plots.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectridge/contrasts.hpp"
#include "spectridge/crossval.hpp"
#include "spectridge/hawkes.hpp"

namespace spectridge::bench {

enum class Mode { none, pthin, loocv };

std::string_view mode_name(Mode m);
Mode parse_mode(std::string_view name);

/// An (estimator, mode) pair that the benchmark can run. p-thinning needs
/// a tractable thinned spectrum, so temporal estimators reject it.
class EstimatorSpec {
 public:
  EstimatorSpec(Method method, Mode mode);
  Method method() const { return method_; }
  Mode mode() const { return mode_; }
  friend auto operator<=>(const EstimatorSpec&, const EstimatorSpec&) = default;

 private:
  Method method_;
  Mode mode_;
};

struct ExperimentConfig {
  double mu = 1.0;
  double alpha = 0.5;
  double beta = 2.0;
  std::vector<double> horizons{50, 100, 200, 400};
  std::size_t n_sim = 256;
  double burn_in = kDefaultBurnIn;
  double A = 2.0;
  std::vector<EstimatorSpec> estimators = all_estimators();
  /// Shared p grid and thinning count; kappa grid per spectral method.
  CvGrid cv;
  std::map<Method, std::vector<double>> pthin_kappas = default_pthin_kappas();
  std::size_t loocv_k = 4;
  std::map<Method, std::vector<double>> loocv_kappas = default_loocv_kappas();
  std::uint64_t seed = 20240601;
  std::filesystem::path output_dir = "bench_out";
  std::size_t jobs = 1;
  NelderMeadOptions optimizer;

  static std::vector<EstimatorSpec> all_estimators();
  static std::map<Method, std::vector<double>> default_pthin_kappas();
  static std::map<Method, std::vector<double>> default_loocv_kappas();

  void validate() const;
};

/// Reads a JSON config; absent keys keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);

struct ReplicationRecord {
  std::size_t rep = 0;
  double T = 0.0;
  Method method = Method::SLS;
  Mode mode = Mode::none;
  /// Empty on hard estimation failure.
  std::optional<Estimate> estimate;
  std::optional<double> p_hat;
  std::optional<double> kappa_hat;
  double seconds = 0.0;
  bool converged = false;

  bool failed() const { return !estimate.has_value(); }
};

struct MseBreakdown {
  double total = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t n_used = 0;
  std::size_t n_failed = 0;
};

/// Mean squared l2 error over non-failed records. Throws
/// std::invalid_argument if none remain.
MseBreakdown mse(const std::vector<ReplicationRecord>& records,
                 const Estimate& theta_star);

struct SummaryRow {
  Method method;
  Mode mode;
  double T;
  MseBreakdown mse;
};

struct SelectionRow {
  Method method;
  Mode mode;
  double T;
  std::optional<double> p_hat;
  double log2_kappa;
  std::size_t count;
};

struct TimingRow {
  Method method;
  Mode mode;
  double T;
  double mean_seconds;
};

struct ExperimentResult {
  std::vector<ReplicationRecord> records;
  std::vector<SummaryRow> summary;
  std::vector<SelectionRow> selection;
  std::vector<TimingRow> timing;
};

/// Runs one estimator on one pattern. Hard failures come back as a record
/// without estimate.
ReplicationRecord run_estimator(const PointPattern& pattern,
                                const EstimatorSpec& spec,
                                const ExperimentConfig& config,
                                const RngStream& rng);

/// Simulates each (T, replication) once, runs every estimator, writes
/// records.csv, summary.csv, selection.csv and timing.csv into
/// config.output_dir. Throws std::runtime_error if the directory is not
/// writable.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<SummaryRow> summarise(const std::vector<ReplicationRecord>& records,
                                  const Estimate& theta_star);
std::vector<SelectionRow> selection_table(
    const std::vector<ReplicationRecord>& records);
std::vector<TimingRow> timing_table(
    const std::vector<ReplicationRecord>& records);

inline constexpr const char* kRecordsHeader =
    "rep,T,estimator,mode,mu_hat,alpha_hat,beta_hat,p_hat,kappa_hat,seconds,"
    "converged";

/// 17 significant digits, '.' separator.
std::string format_double(double v);

void write_records_csv(std::ostream& out,
                       const std::vector<ReplicationRecord>& records);
std::vector<ReplicationRecord> read_records_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);
void write_selection_csv(std::ostream& out,
                         const std::vector<SelectionRow>& rows);
std::vector<SelectionRow> read_selection_csv(std::istream& in);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

/// One float per line after the header "# window <start> <end>".
void write_events(std::ostream& out, const PointPattern& pattern);
PointPattern read_events(std::istream& in);

// Plotting.

struct ChartPoint {
  double x;
  double y;
};

struct ChartSeries {
  std::string label;
  std::vector<ChartPoint> points;  // data coordinates
};

/// Log-log line chart. The slope -1 reference passes through the first point
/// of the first series.
struct LogLogChart {
  std::string title;
  std::string y_label;
  std::vector<ChartSeries> series;

  std::vector<ChartPoint> reference_line() const;
  std::string to_svg() const;
};

/// Heatmap of selection counts over (log2 kappa, p) for one T.
struct SelectionHistogram {
  std::string title;
  std::vector<double> p_values;
  std::vector<double> log2_kappas;
  std::vector<std::size_t> counts;  // [p][kappa]

  std::string to_svg() const;
};

std::vector<LogLogChart> mse_charts(const std::vector<SummaryRow>& summary);
std::vector<SelectionHistogram> selection_histograms(
    const std::vector<SelectionRow>& selection, Method method = Method::SLS);

/// Writes mse_<param>.svg and selection_T<T>.svg; returns written paths. An
/// empty summary writes nothing and warns on stderr.
std::vector<std::filesystem::path> emit_plots(
    const std::vector<SummaryRow>& summary,
    const std::vector<SelectionRow>& selection,
    const std::filesystem::path& dir);

}  // namespace spectridge::bench
