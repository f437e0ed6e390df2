#include "gradfuse/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace gf {

void accumulate(MetricsAccumulator& acc, const DepthMap& d_gt, const DepthMap& d) {
  require_same_shape(d_gt, d, "metrics");
  if (d_gt.scale != Scale::Linear || d.scale != Scale::Linear) {
    throw WrongScale("metrics: depths must be linear meters");
  }
  for (std::size_t p = 0; p < d.values.size(); ++p) {
    if (!d_gt.mask.bits[p] || !d.mask.bits[p]) continue;
    double gt = d_gt.values[p];
    double pred = d.values[p];
    if (gt <= 0.0 || pred <= 0.0) {
      throw NonPositiveDepth("metrics: non-positive depth at valid pixel " + std::to_string(p));
    }
    double diff = gt - pred;
    acc.sum_rel += std::abs(diff) / gt;
    acc.sum_log10 += std::abs(std::log10(gt) - std::log10(pred));
    acc.sum_sq += diff * diff;
    double ratio = std::max(gt / pred, pred / gt);
    if (ratio < 1.25) ++acc.count_delta1;
    if (ratio < 1.25 * 1.25) ++acc.count_delta2;
    if (ratio < 1.25 * 1.25 * 1.25) ++acc.count_delta3;
    ++acc.total;
  }
}

MetricsAccumulator merge(const MetricsAccumulator& a, const MetricsAccumulator& b) {
  MetricsAccumulator out = a;
  out.sum_rel += b.sum_rel;
  out.sum_log10 += b.sum_log10;
  out.sum_sq += b.sum_sq;
  out.count_delta1 += b.count_delta1;
  out.count_delta2 += b.count_delta2;
  out.count_delta3 += b.count_delta3;
  out.total += b.total;
  return out;
}

MetricsReport finalize(const MetricsAccumulator& acc) {
  if (acc.total == 0) throw EmptyAccumulator("metrics: no valid pixels accumulated");
  MetricsReport r;
  double t = static_cast<double>(acc.total);
  r.rel = acc.sum_rel / t;
  r.log10 = acc.sum_log10 / t;
  r.rms = std::sqrt(acc.sum_sq / t);
  r.delta1 = static_cast<double>(acc.count_delta1) / t;
  r.delta2 = static_cast<double>(acc.count_delta2) / t;
  r.delta3 = static_cast<double>(acc.count_delta3) / t;
  r.pixels = acc.total;
  return r;
}

MetricsReport evaluate_pair(const DepthMap& d_gt, const DepthMap& d) {
  MetricsAccumulator acc;
  accumulate(acc, d_gt, d);
  return finalize(acc);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string format_report(const MetricsReport& r) {
  return "rel=" + fmt(r.rel) + " log10=" + fmt(r.log10) + " rms=" + fmt(r.rms) +
         " d1=" + fmt(r.delta1) + " d2=" + fmt(r.delta2) + " d3=" + fmt(r.delta3) +
         " pixels=" + std::to_string(r.pixels);
}

std::string csv_header() { return "rel,log10,rms,d1,d2,d3,pixels"; }

std::string csv_row(const MetricsReport& r) {
  return fmt(r.rel) + "," + fmt(r.log10) + "," + fmt(r.rms) + "," + fmt(r.delta1) + "," +
         fmt(r.delta2) + "," + fmt(r.delta3) + "," + std::to_string(r.pixels);
}

}  // namespace gf
