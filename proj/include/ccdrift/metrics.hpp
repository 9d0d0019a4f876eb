#pragma once

#include <cstddef>
#include <vector>

#include "ccdrift/embed.hpp"
#include "ccdrift/features.hpp"

namespace ccdrift {

struct Metrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Ratios are 0 when their denominator is 0. Throws on length mismatch.
Metrics evaluate(const std::vector<int>& predictions, const std::vector<int>& labels);

struct CalibrationPoint {
  double mean_predicted = 0.0;
  double observed = 0.0;
  std::size_t count = 0;
};

/// Equal-width bins over [0, 1]; empty bins are left out.
std::vector<CalibrationPoint> calibration(const std::vector<double>& probabilities,
                                          const std::vector<int>& labels, int bin_count = 10);

/// Difference of comment/code similarity before and after the change.
double similarity_shift(const PairChange& pc, const EmbeddingModel& model);

/// 1 iff similarity_shift exceeds the threshold.
int rule_baseline(const PairChange& pc, const EmbeddingModel& model, double threshold = 0.05);

}  // namespace ccdrift
