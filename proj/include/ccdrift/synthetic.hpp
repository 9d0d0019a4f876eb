#pragma once

#include <cstdint>

#include "ccdrift/features.hpp"

namespace ccdrift {

enum class PlantedSignal {
  token_distance,  // d_token_code separates the classes
  common_token,    // losing comment words from the code separates them
};

struct SyntheticConfig {
  std::size_t rows = 5000;
  double positive_rate = 0.168;
  std::uint64_t seed = 1;
  PlantedSignal signal = PlantedSignal::token_distance;
};

/// Raw feature table in the extractor's layout. Positives carry raised
/// relation distances, more common-token loss and more declaration
/// changes, with the planted signal the strongest of these; every other
/// column is label-independent noise of its feature type.
FeatureTable synthetic_table(const SyntheticConfig& config = {});

}  // namespace ccdrift
