#include "ccdrift/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccdrift/random.hpp"

namespace ccdrift {
namespace {

double normal(Rng& rng, double mean, double sd) {
  // Box-Muller keeps the stream portable across standard libraries
  const double u1 = 1.0 - uniform_real(rng);
  const double u2 = uniform_real(rng);
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

bool bernoulli(Rng& rng, double p) { return uniform_real(rng) < p; }

double small_count(Rng& rng, double p) {
  double c = 0;
  while (c < 6 && bernoulli(rng, p)) ++c;
  return c;
}

}  // namespace

FeatureTable synthetic_table(const SyntheticConfig& config) {
  if (config.rows < 4) throw std::invalid_argument("synthetic table needs at least four rows");
  if (!(config.positive_rate > 0 && config.positive_rate < 1))
    throw std::invalid_argument("positive rate must lie in (0, 1)");
  const auto& names = feature_names();
  const auto& types = feature_types();
  auto at = [&](const char* n) { return *feature_index(n); };
  const std::size_t d_token = at("d_token_code"), d_code = at("d_cmt_code"), d_smt = at("d_cmt_smt"),
                    common = at("common_token_pair_distance");
  const std::size_t decl[] = {at("class_attributes_change"), at("method_name_change"), at("return_type_change"),
                              at("parameter_change")};

  const auto n_pos = static_cast<std::size_t>(std::llround(config.positive_rate * static_cast<double>(config.rows)));
  Rng rng(derive_seed(config.seed, 0x5e));
  FeatureTable t;
  t.names = names;
  for (std::size_t i = 0; i < config.rows; ++i) t.labels.push_back(i < n_pos ? 1 : 0);
  for (std::size_t i = t.labels.size(); i > 1; --i) std::swap(t.labels[i - 1], t.labels[uniform_index(rng, i)]);

  for (int y : t.labels) {
    std::vector<double> r(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
      switch (types[j]) {
        case FeatureType::binary: r[j] = bernoulli(rng, 0.1); break;
        case FeatureType::discrete: r[j] = small_count(rng, 0.3); break;
        case FeatureType::continuous: r[j] = uniform_real(rng); break;
      }
    }
    const bool pos = y == 1;
    const bool token = config.signal == PlantedSignal::token_distance;
    r[d_token] = std::abs(pos ? normal(rng, token ? 0.12 : 0.04, token ? 0.04 : 0.03) : normal(rng, 0.02, 0.015));
    r[d_code] = std::abs(pos ? normal(rng, 0.06, 0.04) : normal(rng, 0.03, 0.03));
    r[d_smt] = std::abs(pos ? normal(rng, 0.08, 0.06) : normal(rng, 0.04, 0.04));
    const double lose = token ? (pos ? 0.7 : 0.1) : (pos ? 0.95 : 0.03);
    r[common] = bernoulli(rng, lose) ? 1.0 + small_count(rng, 0.3) : 0.0;
    for (auto j : decl) r[j] = bernoulli(rng, pos ? 0.35 : 0.05);
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace ccdrift
