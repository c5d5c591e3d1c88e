#pragma once

// Point patterns on a half-open observation window, reproducible random
// streams, and the pattern operations used for subsampling (p-thinning,
// restriction, block removal).

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectridge {

/// Raised when an estimator cannot produce a value (empty data, all
/// optimiser starts non-finite, every CV cell invalid).
class EstimationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Half-open interval [start, end) with end > start.
class ObservationWindow {
 public:
  ObservationWindow(double start, double end);

  double start() const { return start_; }
  double end() const { return end_; }
  double length() const { return end_ - start_; }
  bool contains(double t) const { return start_ <= t && t < end_; }
  bool contains(const ObservationWindow& other) const {
    return start_ <= other.start_ && other.end_ <= end_;
  }

  friend bool operator==(const ObservationWindow&,
                         const ObservationWindow&) = default;

 private:
  double start_;
  double end_;
};

/// Strictly increasing event times, all inside `window`.
class PointPattern {
 public:
  /// Validates ordering and containment; throws std::invalid_argument.
  PointPattern(std::vector<double> times, ObservationWindow window);

  /// Sorts, drops events outside the window and separates ties by the
  /// smallest representable increment (with a warning on stderr).
  static PointPattern from_unsorted(std::vector<double> times,
                                    ObservationWindow window);

  static PointPattern empty(ObservationWindow window) {
    return PointPattern({}, window);
  }

  const std::vector<double>& times() const { return times_; }
  const ObservationWindow& window() const { return window_; }
  std::size_t count() const { return times_.size(); }
  bool is_empty() const { return times_.empty(); }
  /// N_T / T.
  double mean_rate() const {
    return static_cast<double>(times_.size()) / window_.length();
  }

  friend bool operator==(const PointPattern&, const PointPattern&) = default;

 private:
  std::vector<double> times_;
  ObservationWindow window_;
};

struct ThinningSplit {
  PointPattern retained;
  PointPattern rejected;
  double p;
};

/// A named, reproducible random stream. Identical (seed, stream) pairs
/// always yield the identical sequence; child() derives new stream ids
/// for nested tasks (replication, thinning index, purpose, ...).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  RngStream child(std::initializer_list<std::uint64_t> tags) const;
  RngStream child(std::uint64_t tag) const { return child({tag}); }

  /// Fresh engine positioned at the start of this stream.
  std::mt19937_64 engine() const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Stable 64-bit tag for a purpose string ("simulate", "thin", ...).
std::uint64_t stream_tag(const std::string& purpose);

/// Independently keeps each event with probability p. Throws
/// std::domain_error unless 0 < p < 1.
ThinningSplit thin(const PointPattern& pattern, double p, const RngStream& rng);

/// Events inside `window`, re-windowed to it.
PointPattern restrict(const PointPattern& pattern,
                      const ObservationWindow& window);

/// Removes the block `removed` and closes the gap: later events shift left
/// by removed.length(). Throws std::domain_error when `removed` is not
/// inside the pattern window or covers all of it.
PointPattern concatenate_blocks(const PointPattern& pattern,
                                const ObservationWindow& removed);

/// Same events translated so the window starts at `new_start`.
PointPattern shift_to(const PointPattern& pattern, double new_start);

}  // namespace spectridge
