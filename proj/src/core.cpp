#include "spectridge/core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace spectridge {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

ObservationWindow::ObservationWindow(double start, double end)
    : start_(start), end_(end) {
  if (!std::isfinite(start) || !std::isfinite(end) || !(end > start)) {
    std::ostringstream msg;
    msg << "observation window requires end > start, got [" << start << ", "
        << end << ")";
    throw std::domain_error(msg.str());
  }
}

PointPattern::PointPattern(std::vector<double> times, ObservationWindow window)
    : times_(std::move(times)), window_(window) {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!window_.contains(times_[i])) {
      throw std::invalid_argument("event time outside observation window");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("event times must be strictly increasing");
    }
  }
}

PointPattern PointPattern::from_unsorted(std::vector<double> times,
                                         ObservationWindow window) {
  std::erase_if(times, [&](double t) { return !window.contains(t); });
  std::sort(times.begin(), times.end());
  std::size_t ties = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) {
      times[i] = std::nextafter(times[i - 1],
                                std::numeric_limits<double>::infinity());
      ++ties;
    }
  }
  if (ties > 0) {
    std::cerr << "warning: separated " << ties
              << " tied event time(s) by one ulp\n";
    std::erase_if(times, [&](double t) { return !window.contains(t); });
  }
  return PointPattern(std::move(times), window);
}

RngStream RngStream::child(std::initializer_list<std::uint64_t> tags) const {
  std::uint64_t id = mix64(stream_ + kGolden);
  for (std::uint64_t tag : tags) {
    id = mix64(id ^ mix64(tag + kGolden));
  }
  return RngStream(seed_, id);
}

std::mt19937_64 RngStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                    static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(stream_),
                    static_cast<std::uint32_t>(stream_ >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t stream_tag(const std::string& purpose) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ThinningSplit thin(const PointPattern& pattern, double p,
                   const RngStream& rng) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("thinning probability must lie in (0, 1)");
  }
  auto engine = rng.engine();
  std::bernoulli_distribution keep(p);
  std::vector<double> retained;
  std::vector<double> rejected;
  retained.reserve(static_cast<std::size_t>(p * pattern.count()) + 8);
  rejected.reserve(static_cast<std::size_t>((1 - p) * pattern.count()) + 8);
  for (double t : pattern.times()) {
    (keep(engine) ? retained : rejected).push_back(t);
  }
  return ThinningSplit{PointPattern(std::move(retained), pattern.window()),
                       PointPattern(std::move(rejected), pattern.window()), p};
}

PointPattern restrict(const PointPattern& pattern,
                      const ObservationWindow& window) {
  const auto& t = pattern.times();
  auto first = std::lower_bound(t.begin(), t.end(), window.start());
  auto last = std::lower_bound(first, t.end(), window.end());
  return PointPattern(std::vector<double>(first, last), window);
}

PointPattern concatenate_blocks(const PointPattern& pattern,
                                const ObservationWindow& removed) {
  const auto& window = pattern.window();
  if (!window.contains(removed)) {
    throw std::domain_error("removed block must lie inside the window");
  }
  const double shift = removed.length();
  if (!(window.length() - shift > 0.0)) {
    throw std::domain_error("removing the whole window leaves no data");
  }
  std::vector<double> kept;
  kept.reserve(pattern.count());
  for (double t : pattern.times()) {
    if (t < removed.start()) {
      kept.push_back(t);
    } else if (t >= removed.end()) {
      kept.push_back(t - shift);
    }
  }
  ObservationWindow shortened(window.start(), window.end() - shift);
  // Shifting can round a time onto the new end; clamp back inside.
  for (double& t : kept) {
    if (t >= shortened.end()) {
      t = std::nextafter(shortened.end(), shortened.start());
    }
  }
  return PointPattern::from_unsorted(std::move(kept), shortened);
}

PointPattern shift_to(const PointPattern& pattern, double new_start) {
  const double offset = new_start - pattern.window().start();
  std::vector<double> times(pattern.times());
  for (double& t : times) t += offset;
  ObservationWindow window(new_start, new_start + pattern.window().length());
  return PointPattern::from_unsorted(std::move(times), window);
}

}  // namespace spectridge
