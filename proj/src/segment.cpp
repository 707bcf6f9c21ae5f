#include "factorcp/error.hpp"
#include "factorcp/rng.hpp"
#include "factorcp/sntest.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace fcp {
namespace {

struct Interval {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;  // exclusive
};

class Segmenter {
 public:
  Segmenter(const TimeSeriesPanel& panel, double eta1, double eta2, const CriticalValueTable& cv,
            const SegmentOptions& options, std::vector<Interval> intervals)
      : panel_(panel), eta1_(eta1), eta2_(eta2), cv_(cv), options_(options), intervals_(std::move(intervals)) {}

  void run(Eigen::Index begin, Eigen::Index end) {
    if (end - begin < options_.min_len) return;
    const auto whole = statistic(Interval{begin, end});
    if (!whole || !(whole->t_n > cv_.critical_value(options_.alpha))) return;

    // The segment test decides; the random intervals only sharpen where to cut.
    Interval chosen{begin, end};
    double best = whole->t_n;
    for (const auto& interval : intervals_) {
      if (interval.begin < begin || interval.end > end) continue;
      if (interval.end - interval.begin < options_.min_len) continue;
      if (interval.begin == begin && interval.end == end) continue;
      const auto stat = statistic(interval);
      if (stat && stat->t_n > best) {
        best = stat->t_n;
        chosen = interval;
      }
    }

    Eigen::Index cut = 0;
    try {
      LocateOptions locate;
      locate.h0 = options_.h0;
      locate.k1 = options_.k1;
      locate.k2 = options_.k2;
      locate.threads = 1;
      const auto fit = locate_change_point(panel_.slice(chosen.begin, chosen.end), FractionGrid(eta1_, eta2_), locate);
      cut = chosen.begin + fit.r_hat;
    } catch (const Error&) {
      return;
    }
    cuts_.push_back(cut);
    // Points within eta1 * |chosen| of the cut may belong to either side;
    // they are left out of both sub-segments.
    const auto guard = static_cast<Eigen::Index>(std::ceil(eta1_ * static_cast<double>(chosen.end - chosen.begin)));
    run(begin, std::max(begin, cut - guard));
    run(std::min(end, cut + guard), end);
  }

  std::vector<Eigen::Index> cuts() const {
    auto out = cuts_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::optional<SnTestResult> statistic(const Interval& interval) const {
    try {
      TestOptions test;
      test.h0 = options_.h0;
      test.k1 = options_.k1;
      test.k2 = options_.k2;
      test.alphas = {options_.alpha};
      return test_change_point(panel_.slice(interval.begin, interval.end), eta1_, eta2_, cv_, test);
    } catch (const Error&) {
      // too short or degenerate to test
      return std::nullopt;
    }
  }

  const TimeSeriesPanel& panel_;
  double eta1_;
  double eta2_;
  const CriticalValueTable& cv_;
  SegmentOptions options_;
  std::vector<Interval> intervals_;
  std::vector<Eigen::Index> cuts_;
};

}  // namespace

SegmentResult segment_multiple(const TimeSeriesPanel& panel, double eta1, double eta2,
                               const CriticalValueTable& cv_table, const SegmentOptions& options) {
  const FractionGrid grid(eta1, eta2);
  if (options.num_intervals < 1) throw Error(ErrorKind::InvalidParams, "num_intervals must be at least 1");
  const auto min_allowed = static_cast<Eigen::Index>(std::ceil(20.0 / (grid.eta2() - grid.eta1()) - 1e-9));
  if (options.min_len < min_allowed) {
    throw Error(ErrorKind::InvalidParams, "min_len must be at least " + std::to_string(min_allowed));
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw Error(ErrorKind::InvalidParams, "alpha must lie in (0, 1)");

  const auto n = panel.n();
  std::vector<Interval> intervals;
  if (n >= options.min_len) {
    PhiloxStream stream(options.seed, stream_id(StreamPurpose::Intervals));
    std::uniform_int_distribution<Eigen::Index> start(0, n - options.min_len);
    for (int i = 0; i < options.num_intervals; ++i) {
      const auto begin = start(stream);
      std::uniform_int_distribution<Eigen::Index> stop(begin + options.min_len, n);
      intervals.push_back(Interval{begin, stop(stream)});
    }
  }

  Segmenter segmenter(panel, eta1, eta2, cv_table, options, std::move(intervals));
  segmenter.run(0, n);
  SegmentResult out;
  out.indices = segmenter.cuts();
  for (auto r : out.indices) out.fractions.push_back(static_cast<double>(r) / static_cast<double>(n));
  return out;
}

}  // namespace fcp
