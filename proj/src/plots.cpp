#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "spectridge/bench.hpp"

namespace spectridge::bench {

namespace {

constexpr double kWidth = 680;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 190;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf", "#393b79", "#637939",
                                "#8c6d31"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct LogAxis {
  double lo;
  double hi;
  double pixel_lo;
  double pixel_hi;
  double operator()(double v) const {
    const double s = (std::log10(v) - std::log10(lo)) /
                     (std::log10(hi) - std::log10(lo));
    return pixel_lo + s * (pixel_hi - pixel_lo);
  }
};

LogAxis padded_axis(double lo, double hi, double pixel_lo, double pixel_hi) {
  if (lo == hi) {
    lo /= 2.0;
    hi *= 2.0;
  }
  const double pad = std::pow(hi / lo, 0.05);
  return {lo / pad, hi * pad, pixel_lo, pixel_hi};
}

std::string tick_label(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

std::vector<ChartPoint> LogLogChart::reference_line() const {
  if (series.empty() || series.front().points.empty()) return {};
  double x_lo = INFINITY, x_hi = 0.0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
    }
  }
  const ChartPoint anchor = series.front().points.front();
  // y x = const
  const double c = anchor.x * anchor.y;
  return {{x_lo, c / x_lo}, {x_hi, c / x_hi}};
}

std::string LogLogChart::to_svg() const {
  double x_lo = INFINITY, x_hi = 0.0, y_lo = INFINITY, y_hi = 0.0;
  auto extend = [&](const ChartPoint& p) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  };
  for (const auto& s : series) {
    for (const auto& p : s.points) extend(p);
  }
  const auto reference = reference_line();
  for (const auto& p : reference) extend(p);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 - kRight / 2 << "\" y=\"22\" "
      << "text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
  if (!(x_hi > 0.0) || !(y_hi > 0.0)) {
    svg << "</svg>\n";
    return svg.str();
  }
  const LogAxis x = padded_axis(x_lo, x_hi, kLeft, kWidth - kRight);
  const LogAxis y = padded_axis(y_lo, y_hi, kHeight - kBottom, kTop);

  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  std::set<double> x_ticks;
  for (const auto& s : series) {
    for (const auto& p : s.points) x_ticks.insert(p.x);
  }
  for (double t : x_ticks) {
    svg << "<line x1=\"" << x(t) << "\" x2=\"" << x(t) << "\" y1=\""
        << kHeight - kBottom << "\" y2=\"" << kHeight - kBottom + 5
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << x(t) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(std::log10(y.lo)));
       e <= static_cast<int>(std::floor(std::log10(y.hi))); ++e) {
    const double v = std::pow(10.0, e);
    svg << "<line x1=\"" << kLeft - 5 << "\" x2=\"" << kWidth - kRight
        << "\" y1=\"" << y(v) << "\" y2=\"" << y(v)
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << y(v) + 4
        << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\""
      << kHeight - 12 << "\" text-anchor=\"middle\">T</text>\n";
  svg << "<text transform=\"translate(16," << (kTop + kHeight - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label)
      << "</text>\n";

  if (reference.size() == 2) {
    svg << "<polyline class=\"reference\" fill=\"none\" stroke=\"#999999\" "
        << "stroke-dasharray=\"6,4\" points=\"";
    for (const auto& p : reference) svg << x(p.x) << ',' << y(p.y) << ' ';
    svg << "\"/>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* colour = kPalette[i % std::size(kPalette)];
    svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& p : series[i].points) svg << x(p.x) << ',' << y(p.y) << ' ';
    svg << "\"/>\n";
    for (const auto& p : series[i].points) {
      svg << "<circle cx=\"" << x(p.x) << "\" cy=\"" << y(p.y)
          << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    }
    const double ly = kTop + 14 + 16 * static_cast<double>(i);
    svg << "<line x1=\"" << kWidth - kRight + 12 << "\" x2=\""
        << kWidth - kRight + 32 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly << "\">"
        << escape(series[i].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string SelectionHistogram::to_svg() const {
  const double cell_w = 34, cell_h = 28, left = 60, top = 50;
  const double width = left + cell_w * static_cast<double>(log2_kappas.size()) + 20;
  const double height = top + cell_h * static_cast<double>(p_values.size()) + 50;
  std::size_t max_count = 1;
  for (auto c : counts) max_count = std::max(max_count, c);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << escape(title) << "</text>\n";
  for (std::size_t ip = 0; ip < p_values.size(); ++ip) {
    const double yy = top + cell_h * static_cast<double>(ip);
    svg << "<text x=\"" << left - 6 << "\" y=\"" << yy + cell_h / 2 + 4
        << "\" text-anchor=\"end\">p=" << tick_label(p_values[ip])
        << "</text>\n";
    for (std::size_t ik = 0; ik < log2_kappas.size(); ++ik) {
      const std::size_t c = counts[ip * log2_kappas.size() + ik];
      const double shade = static_cast<double>(c) / static_cast<double>(max_count);
      const int level = static_cast<int>(std::lround(255.0 * (1.0 - shade)));
      const double xx = left + cell_w * static_cast<double>(ik);
      svg << "<rect x=\"" << xx << "\" y=\"" << yy << "\" width=\"" << cell_w
          << "\" height=\"" << cell_h << "\" fill=\"rgb(" << level << ','
          << level << ",255)\" stroke=\"#cccccc\"/>\n";
      if (c > 0) {
        svg << "<text x=\"" << xx + cell_w / 2 << "\" y=\"" << yy + cell_h / 2 + 4
            << "\" text-anchor=\"middle\">" << c << "</text>\n";
      }
    }
  }
  const double axis_y = top + cell_h * static_cast<double>(p_values.size()) + 16;
  for (std::size_t ik = 0; ik < log2_kappas.size(); ++ik) {
    svg << "<text x=\"" << left + cell_w * (static_cast<double>(ik) + 0.5)
        << "\" y=\"" << axis_y << "\" text-anchor=\"middle\">"
        << tick_label(log2_kappas[ik]) << "</text>\n";
  }
  svg << "<text x=\"" << width / 2 << "\" y=\"" << axis_y + 20
      << "\" text-anchor=\"middle\">log2 kappa</text>\n</svg>\n";
  return svg.str();
}

std::vector<LogLogChart> mse_charts(const std::vector<SummaryRow>& summary) {
  struct Part {
    const char* name;
    double MseBreakdown::*field;
  };
  const Part parts[] = {{"overall", &MseBreakdown::total},
                        {"mu", &MseBreakdown::mu},
                        {"alpha", &MseBreakdown::alpha},
                        {"beta", &MseBreakdown::beta}};
  std::vector<LogLogChart> charts;
  for (const auto& part : parts) {
    LogLogChart chart;
    chart.title = std::string("MSE (") + part.name + ")";
    chart.y_label = "MSE";
    std::map<std::pair<Method, Mode>, std::vector<ChartPoint>> by_estimator;
    for (const auto& row : summary) {
      const double v = row.mse.*part.field;
      if (std::isfinite(v) && v > 0.0) {
        by_estimator[{row.method, row.mode}].push_back({row.T, v});
      }
    }
    for (auto& [key, points] : by_estimator) {
      std::sort(points.begin(), points.end(),
                [](auto a, auto b) { return a.x < b.x; });
      chart.series.push_back({std::string(method_name(key.first)) + " " +
                                  std::string(mode_name(key.second)),
                              points});
    }
    charts.push_back(std::move(chart));
  }
  return charts;
}

std::vector<SelectionHistogram> selection_histograms(
    const std::vector<SelectionRow>& selection, Method method) {
  std::map<double, std::vector<const SelectionRow*>> by_T;
  for (const auto& row : selection) {
    if (row.method == method && row.mode == Mode::pthin && row.p_hat) {
      by_T[row.T].push_back(&row);
    }
  }
  std::vector<SelectionHistogram> out;
  for (const auto& [T, rows] : by_T) {
    std::set<double> ps, ks;
    for (const auto* r : rows) {
      ps.insert(*r->p_hat);
      ks.insert(r->log2_kappa);
    }
    SelectionHistogram h;
    h.title = std::string(method_name(method)) + " selections, T=" + tick_label(T);
    h.p_values.assign(ps.begin(), ps.end());
    h.log2_kappas.assign(ks.begin(), ks.end());
    h.counts.assign(ps.size() * ks.size(), 0);
    for (const auto* r : rows) {
      const auto ip = static_cast<std::size_t>(
          std::distance(ps.begin(), ps.find(*r->p_hat)));
      const auto ik = static_cast<std::size_t>(
          std::distance(ks.begin(), ks.find(r->log2_kappa)));
      h.counts[ip * ks.size() + ik] += r->count;
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::filesystem::path> emit_plots(
    const std::vector<SummaryRow>& summary,
    const std::vector<SelectionRow>& selection,
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  if (summary.empty()) {
    std::cerr << "warning: no estimators in summary; no plots written\n";
    return written;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "warning: could not write plot " << path << '\n';
      return;
    }
    written.push_back(path);
  };
  const char* names[] = {"overall", "mu", "alpha", "beta"};
  const auto charts = mse_charts(summary);
  for (std::size_t i = 0; i < charts.size(); ++i) {
    write(dir / (std::string("mse_") + names[i] + ".svg"), charts[i].to_svg());
  }
  for (const auto& h : selection_histograms(selection)) {
    const auto T = h.title.substr(h.title.find("T=") + 2);
    write(dir / ("selection_T" + T + ".svg"), h.to_svg());
  }
  return written;
}

}  // namespace spectridge::bench
