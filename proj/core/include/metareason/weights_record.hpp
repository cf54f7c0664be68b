#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "metareason/policies.hpp"

namespace metareason {

/// Trained BMPS weights for one experiment cell. Serialised as a small text
/// record starting with the line "metareason-weights v1".
struct WeightsRecord {
  std::string domain;
  int size = 0;  // arms, tree height or cities
  int horizon = 0;
  double cost = 0.0;
  WeightVector weights;
  std::uint64_t seed = 0;

  friend bool operator==(const WeightsRecord&, const WeightsRecord&) = default;
};

std::string format_weights_record(const WeightsRecord& record);
WeightsRecord parse_weights_record(const std::string& text);

/// IoError if the file cannot be written.
void write_weights_record(const std::filesystem::path& path, const WeightsRecord& record);
/// MissingArtifactError if the file does not exist; ConfigError if malformed.
WeightsRecord read_weights_record(const std::filesystem::path& path);

}  // namespace metareason
