#ifndef GRADFUSE_METRICS_HPP
#define GRADFUSE_METRICS_HPP

#include <cstdint>
#include <string>

#include "gradfuse/core.hpp"

namespace gf {

// Pixel-pooled error sums over one or many image pairs. Mergeable, so pairs
// may be evaluated in parallel and combined afterwards.
struct MetricsAccumulator {
  double sum_rel = 0.0;
  double sum_log10 = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count_delta1 = 0;
  std::uint64_t count_delta2 = 0;
  std::uint64_t count_delta3 = 0;
  std::uint64_t total = 0;  // valid pixels seen
};

struct MetricsReport {
  double rel = 0.0;
  double log10 = 0.0;
  double rms = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  std::uint64_t pixels = 0;
};

// Adds one prediction/ground-truth pair. Both maps must be Linear scale with
// positive depths at valid pixels; only jointly valid pixels contribute.
// Threshold comparisons are strict: max(gt/d, d/gt) < 1.25^k.
void accumulate(MetricsAccumulator& acc, const DepthMap& d_gt, const DepthMap& d);

MetricsAccumulator merge(const MetricsAccumulator& a, const MetricsAccumulator& b);

// rel and log10 are means, rms the root of the mean square, deltas fractions.
// Throws EmptyAccumulator when no pixels were accumulated.
MetricsReport finalize(const MetricsAccumulator& acc);

// Convenience for per-image reports.
MetricsReport evaluate_pair(const DepthMap& d_gt, const DepthMap& d);

// "rel=... log10=... rms=... d1=... d2=... d3=... pixels=..."
std::string format_report(const MetricsReport& r);

// Stable machine-readable form.
std::string csv_header();
std::string csv_row(const MetricsReport& r);

}  // namespace gf

#endif  // GRADFUSE_METRICS_HPP
