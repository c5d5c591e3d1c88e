#include "spectridge/bench.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spectridge/parallel.hpp"

namespace spectridge::bench {

namespace {

using json = nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<double> read_kappa_spec(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return power_of_two_grid(j.at("log2_min").get<int>(),
                           j.at("log2_max").get<int>());
}

double log2_kappa(double kappa) {
  return kappa > 0.0 ? std::log2(kappa)
                     : -std::numeric_limits<double>::infinity();
}

}  // namespace

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::none: return "none";
    case Mode::pthin: return "pthin";
    case Mode::loocv: return "loocv";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::none, Mode::pthin, Mode::loocv}) {
    if (mode_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

EstimatorSpec::EstimatorSpec(Method method, Mode mode)
    : method_(method), mode_(mode) {
  if (mode == Mode::pthin && !is_spectral(method)) {
    throw std::invalid_argument(std::string(method_name(method)) +
                                " has no p-thinning form");
  }
}

std::vector<EstimatorSpec> ExperimentConfig::all_estimators() {
  std::vector<EstimatorSpec> all;
  for (Method m : {Method::OLS, Method::ML, Method::SL, Method::SLS,
                   Method::SP}) {
    for (Mode mode : {Mode::none, Mode::pthin, Mode::loocv}) {
      if (mode == Mode::pthin && !is_spectral(m)) continue;
      all.emplace_back(m, mode);
    }
  }
  return all;
}

std::map<Method, std::vector<double>> ExperimentConfig::default_pthin_kappas() {
  const auto g = power_of_two_grid(-14, 3);
  return {{Method::SL, g}, {Method::SLS, g}, {Method::SP, g}};
}

std::map<Method, std::vector<double>> ExperimentConfig::default_loocv_kappas() {
  const auto g = power_of_two_grid(-14, 3);
  return {{Method::SL, g},
          {Method::SLS, g},
          {Method::SP, g},
          {Method::ML, power_of_two_grid(-10, 7)},
          {Method::OLS, power_of_two_grid(-6, 10)}};
}

void ExperimentConfig::validate() const {
  [[maybe_unused]] const HawkesParams check(mu, alpha, beta);
  if (horizons.empty() || n_sim == 0) {
    throw std::invalid_argument("config needs horizons and n_sim >= 1");
  }
  for (double T : horizons) {
    if (!(T > 0.0)) throw std::invalid_argument("horizons must be > 0");
  }
  if (!(burn_in >= 0.0) || !(A > 0.0) || loocv_k < 2 || jobs == 0) {
    throw std::invalid_argument("invalid burn_in, A, loocv k or jobs");
  }
  for (const auto& spec : estimators) {
    if (spec.mode() == Mode::pthin) {
      CvGrid g = cv;
      g.kappa_values = pthin_kappas.at(spec.method());
      g.validate();
    }
    if (spec.mode() == Mode::loocv && loocv_kappas.at(spec.method()).empty()) {
      throw std::invalid_argument("empty LOOCV kappa grid");
    }
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig c;
  if (j.contains("true_params")) {
    const auto& t = j["true_params"];
    c.mu = t.value("mu", c.mu);
    c.alpha = t.value("alpha", c.alpha);
    c.beta = t.value("beta", c.beta);
  }
  if (j.contains("horizons")) c.horizons = j["horizons"].get<std::vector<double>>();
  c.n_sim = j.value("n_sim", c.n_sim);
  c.burn_in = j.value("burn_in", c.burn_in);
  c.A = j.value("A", c.A);
  if (j.contains("estimators")) {
    c.estimators.clear();
    for (const auto& [name, modes] : j["estimators"].items()) {
      for (const auto& mode : modes) {
        c.estimators.emplace_back(parse_method(name),
                                  parse_mode(mode.get<std::string>()));
      }
    }
  }
  if (j.contains("cv")) {
    const auto& cv = j["cv"];
    if (cv.contains("p_values")) {
      c.cv.p_values = cv["p_values"].get<std::vector<double>>();
    }
    c.cv.n_thinnings = cv.value("n_thinnings", c.cv.n_thinnings);
    if (cv.contains("kappas")) {
      for (const auto& [name, spec] : cv["kappas"].items()) {
        c.pthin_kappas[parse_method(name)] = read_kappa_spec(spec);
      }
    }
  }
  if (j.contains("loocv")) {
    const auto& lo = j["loocv"];
    c.loocv_k = lo.value("k", c.loocv_k);
    if (lo.contains("kappas")) {
      for (const auto& [name, spec] : lo["kappas"].items()) {
        c.loocv_kappas[parse_method(name)] = read_kappa_spec(spec);
      }
    }
  }
  if (j.contains("optimizer")) {
    const auto& o = j["optimizer"];
    c.optimizer.max_iterations =
        o.value("max_iterations", c.optimizer.max_iterations);
    c.optimizer.diameter_tolerance =
        o.value("diameter_tolerance", c.optimizer.diameter_tolerance);
    c.optimizer.initial_step = o.value("initial_step", c.optimizer.initial_step);
  }
  c.seed = j.value("seed", c.seed);
  if (j.contains("output_dir")) {
    c.output_dir = j["output_dir"].get<std::string>();
  }
  c.jobs = j.value("jobs", c.jobs);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

MseBreakdown mse(const std::vector<ReplicationRecord>& records,
                 const Estimate& theta_star) {
  MseBreakdown out;
  for (const auto& r : records) {
    if (r.failed()) {
      ++out.n_failed;
      continue;
    }
    const double dmu = r.estimate->mu - theta_star.mu;
    const double da = r.estimate->alpha - theta_star.alpha;
    const double db = r.estimate->beta - theta_star.beta;
    out.mu += dmu * dmu;
    out.alpha += da * da;
    out.beta += db * db;
    ++out.n_used;
  }
  if (out.n_used == 0) {
    throw std::invalid_argument("MSE needs at least one successful record");
  }
  const auto n = static_cast<double>(out.n_used);
  out.mu /= n;
  out.alpha /= n;
  out.beta /= n;
  out.total = out.mu + out.alpha + out.beta;
  return out;
}

ReplicationRecord run_estimator(const PointPattern& pattern,
                                const EstimatorSpec& spec,
                                const ExperimentConfig& config,
                                const RngStream& rng) {
  ReplicationRecord rec;
  rec.T = pattern.window().length();
  rec.method = spec.method();
  rec.mode = spec.mode();
  FitOptions options;
  options.optimizer = config.optimizer;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (spec.mode()) {
      case Mode::none: {
        const FitResult fit = fit_pattern(pattern, spec.method(), config.A, 0.0,
                                          options);
        rec.estimate = fit.estimate;
        rec.converged = fit.converged;
        break;
      }
      case Mode::pthin: {
        CvGrid grid = config.cv;
        grid.kappa_values = config.pthin_kappas.at(spec.method());
        const auto freq = fourier_grid(pattern.window().length(), config.A);
        const CvReport report = pthin_cv(pattern, as_spectral(spec.method()),
                                         grid, freq, rng, options);
        rec.estimate = report.final_estimate;
        rec.p_hat = report.selected_p;
        rec.kappa_hat = report.selected_kappa;
        rec.converged = report.converged;
        break;
      }
      case Mode::loocv: {
        const CvReport report =
            block_loocv(pattern, spec.method(),
                        config.loocv_kappas.at(spec.method()), config.loocv_k,
                        config.A, options);
        rec.estimate = report.final_estimate;
        rec.kappa_hat = report.selected_kappa;
        rec.converged = report.converged;
        break;
      }
    }
  } catch (const EstimationFailure& e) {
    rec.estimate.reset();
    rec.p_hat.reset();
    rec.kappa_hat.reset();
    rec.converged = false;
  }
  rec.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  const fs::path records_path = config.output_dir / "records.csv";
  std::ofstream records_out(records_path, std::ios::binary);
  if (ec || !records_out) {
    throw std::runtime_error("output directory not writable: " +
                             config.output_dir.string());
  }

  const HawkesParams truth(config.mu, config.alpha, config.beta);
  const RngStream root(config.seed, 0);
  const std::size_t n_specs = config.estimators.size();
  const std::size_t n_tasks = config.horizons.size() * config.n_sim;
  std::vector<ReplicationRecord> records(n_tasks * n_specs);

  parallel_for(n_tasks, config.jobs, [&](std::size_t task) {
    const std::size_t iT = task / config.n_sim;
    const std::size_t rep = task % config.n_sim;
    const double T = config.horizons[iT];
    const auto t_bits = std::bit_cast<std::uint64_t>(T);
    const PointPattern pattern =
        simulate(truth, ObservationWindow(0.0, T), config.burn_in,
                 root.child({stream_tag("simulate"), t_bits, rep}));
    for (std::size_t s = 0; s < n_specs; ++s) {
      const auto& spec = config.estimators[s];
      const RngStream rng = root.child(
          {stream_tag("estimate"), t_bits, rep,
           static_cast<std::uint64_t>(spec.method()),
           static_cast<std::uint64_t>(spec.mode())});
      ReplicationRecord rec = run_estimator(pattern, spec, config, rng);
      rec.rep = rep;
      rec.T = T;
      records[task * n_specs + s] = rec;
    }
  });

  ExperimentResult result;
  result.records = std::move(records);
  const Estimate star{config.mu, config.alpha, config.beta};
  result.summary = summarise(result.records, star);
  result.selection = selection_table(result.records);
  result.timing = timing_table(result.records);

  write_records_csv(records_out, result.records);
  std::ofstream summary_out(config.output_dir / "summary.csv", std::ios::binary);
  write_summary_csv(summary_out, result.summary);
  std::ofstream selection_out(config.output_dir / "selection.csv",
                              std::ios::binary);
  write_selection_csv(selection_out, result.selection);
  std::ofstream timing_out(config.output_dir / "timing.csv", std::ios::binary);
  write_timing_csv(timing_out, result.timing);
  if (!records_out || !summary_out || !selection_out || !timing_out) {
    throw std::runtime_error("failed writing benchmark outputs");
  }
  return result;
}

std::vector<SummaryRow> summarise(const std::vector<ReplicationRecord>& records,
                                  const Estimate& theta_star) {
  std::map<std::tuple<Method, Mode, double>, std::vector<ReplicationRecord>>
      groups;
  for (const auto& r : records) groups[{r.method, r.mode, r.T}].push_back(r);
  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    SummaryRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key), {}};
    try {
      row.mse = mse(group, theta_star);
    } catch (const std::invalid_argument&) {
      row.mse.total = row.mse.mu = row.mse.alpha = row.mse.beta =
          std::numeric_limits<double>::quiet_NaN();
      row.mse.n_failed = group.size();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SelectionRow> selection_table(
    const std::vector<ReplicationRecord>& records) {
  std::map<std::tuple<Method, Mode, double, double, double>, std::size_t>
      counts;
  constexpr double kNoP = -1.0;
  for (const auto& r : records) {
    if (r.failed() || !r.kappa_hat) continue;
    counts[{r.method, r.mode, r.T, r.p_hat.value_or(kNoP),
            log2_kappa(*r.kappa_hat)}]++;
  }
  std::vector<SelectionRow> rows;
  for (const auto& [key, n] : counts) {
    const auto [method, mode, T, p, lk] = key;
    rows.push_back({method, mode, T,
                    p == kNoP ? std::nullopt : std::optional<double>(p), lk, n});
  }
  return rows;
}

std::vector<TimingRow> timing_table(
    const std::vector<ReplicationRecord>& records) {
  std::map<std::tuple<Method, Mode, double>, std::pair<double, std::size_t>>
      acc;
  for (const auto& r : records) {
    auto& [sum, n] = acc[{r.method, r.mode, r.T}];
    sum += r.seconds;
    ++n;
  }
  std::vector<TimingRow> rows;
  for (const auto& [key, v] : acc) {
    rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                    v.first / static_cast<double>(v.second)});
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_records_csv(std::ostream& out,
                       const std::vector<ReplicationRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << r.rep << ',' << format_double(r.T) << ',' << method_name(r.method)
        << ',' << mode_name(r.mode) << ',';
    if (r.estimate) {
      out << format_double(r.estimate->mu) << ','
          << format_double(r.estimate->alpha) << ','
          << format_double(r.estimate->beta) << ',';
    } else {
      out << ",,,";
    }
    out << format_optional(r.p_hat) << ',' << format_optional(r.kappa_hat)
        << ',' << format_double(r.seconds) << ',' << (r.converged ? 1 : 0)
        << '\n';
  }
}

std::vector<ReplicationRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw std::invalid_argument("records CSV header mismatch");
  }
  std::vector<ReplicationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) throw std::invalid_argument("bad records row: " + line);
    ReplicationRecord r;
    r.rep = static_cast<std::size_t>(parse_double(f[0]));
    r.T = parse_double(f[1]);
    r.method = parse_method(f[2]);
    r.mode = parse_mode(f[3]);
    if (!f[4].empty()) {
      r.estimate = Estimate{parse_double(f[4]), parse_double(f[5]),
                            parse_double(f[6])};
    }
    r.p_hat = parse_optional(f[7]);
    r.kappa_hat = parse_optional(f[8]);
    r.seconds = parse_double(f[9]);
    r.converged = f[10] == "1";
    records.push_back(r);
  }
  return records;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "estimator,mode,T,n_used,n_failed,mse,mse_mu,mse_alpha,mse_beta\n";
  for (const auto& r : rows) {
    out << method_name(r.method) << ',' << mode_name(r.mode) << ','
        << format_double(r.T) << ',' << r.mse.n_used << ',' << r.mse.n_failed
        << ',' << format_double(r.mse.total) << ',' << format_double(r.mse.mu)
        << ',' << format_double(r.mse.alpha) << ','
        << format_double(r.mse.beta) << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string line;
  std::getline(in, line);
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw std::invalid_argument("bad summary row: " + line);
    SummaryRow r{parse_method(f[0]), parse_mode(f[1]), parse_double(f[2]), {}};
    r.mse.n_used = static_cast<std::size_t>(parse_double(f[3]));
    r.mse.n_failed = static_cast<std::size_t>(parse_double(f[4]));
    auto num = [](const std::string& s) {
      return s == "nan" || s == "-nan" ? std::numeric_limits<double>::quiet_NaN()
                                       : parse_double(s);
    };
    r.mse.total = num(f[5]);
    r.mse.mu = num(f[6]);
    r.mse.alpha = num(f[7]);
    r.mse.beta = num(f[8]);
    rows.push_back(r);
  }
  return rows;
}

void write_selection_csv(std::ostream& out,
                         const std::vector<SelectionRow>& rows) {
  out << "estimator,mode,T,p_hat,log2_kappa_hat,count\n";
  for (const auto& r : rows) {
    out << method_name(r.method) << ',' << mode_name(r.mode) << ','
        << format_double(r.T) << ',' << format_optional(r.p_hat) << ','
        << format_double(r.log2_kappa) << ',' << r.count << '\n';
  }
}

std::vector<SelectionRow> read_selection_csv(std::istream& in) {
  std::string line;
  std::getline(in, line);
  std::vector<SelectionRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw std::invalid_argument("bad selection row: " + line);
    const double lk = f[4] == "-inf" ? -std::numeric_limits<double>::infinity()
                                     : parse_double(f[4]);
    rows.push_back({parse_method(f[0]), parse_mode(f[1]), parse_double(f[2]),
                    parse_optional(f[3]), lk,
                    static_cast<std::size_t>(parse_double(f[5]))});
  }
  return rows;
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "estimator,mode,T,mean_seconds\n";
  for (const auto& r : rows) {
    out << method_name(r.method) << ',' << mode_name(r.mode) << ','
        << format_double(r.T) << ',' << format_double(r.mean_seconds) << '\n';
  }
}

void write_events(std::ostream& out, const PointPattern& pattern) {
  out << "# window " << format_double(pattern.window().start()) << ' '
      << format_double(pattern.window().end()) << '\n';
  for (double t : pattern.times()) out << format_double(t) << '\n';
}

PointPattern read_events(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("event file is empty");
  }
  std::istringstream header(line);
  std::string hash, word, start, end;
  header >> hash >> word >> start >> end;
  if (hash != "#" || word != "window" || start.empty() || end.empty()) {
    throw std::invalid_argument("event file header must be '# window <start> <end>'");
  }
  const ObservationWindow window(parse_double(start), parse_double(end));
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const double t = parse_double(line);
    if (!window.contains(t)) {
      throw std::invalid_argument("event time outside header window: " + line);
    }
    times.push_back(t);
  }
  return PointPattern::from_unsorted(std::move(times), window);
}

}  // namespace spectridge::bench
