#include "ccdrift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccdrift {

Metrics evaluate(const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("predictions and labels differ in length");
  Metrics m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] == 1;
    const bool l = labels[i] == 1;
    if (p && l) ++m.tp;
    else if (p) ++m.fp;
    else if (l) ++m.fn;
    else ++m.tn;
  }
  const auto tp = static_cast<double>(m.tp);
  if (m.tp + m.fp > 0) m.precision = tp / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn > 0) m.recall = tp / static_cast<double>(m.tp + m.fn);
  if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

std::vector<CalibrationPoint> calibration(const std::vector<double>& probabilities,
                                          const std::vector<int>& labels, int bin_count) {
  if (probabilities.size() != labels.size())
    throw std::invalid_argument("probabilities and labels differ in length");
  if (bin_count < 1) throw std::invalid_argument("bin count must be positive");
  std::vector<double> sum_p(bin_count, 0.0), sum_y(bin_count, 0.0);
  std::vector<std::size_t> n(bin_count, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
    const int b = std::min(bin_count - 1, static_cast<int>(std::floor(p * bin_count)));
    sum_p[b] += p;
    sum_y[b] += labels[i] == 1;
    ++n[b];
  }
  std::vector<CalibrationPoint> out;
  for (int b = 0; b < bin_count; ++b)
    if (n[b] > 0) {
      const auto c = static_cast<double>(n[b]);
      out.push_back({sum_p[b] / c, sum_y[b] / c, n[b]});
    }
  return out;
}

double similarity_shift(const PairChange& pc, const EmbeddingModel& model) {
  return std::abs(sim_ss(pc.s_cmt, pc.s_code, model) - sim_ss(pc.s_cmt, pc.s_code_new, model));
}

int rule_baseline(const PairChange& pc, const EmbeddingModel& model, double threshold) {
  return similarity_shift(pc, model) > threshold ? 1 : 0;
}

}  // namespace ccdrift
