// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Data model for prediction pools and labeled-set statistics, plus the
// streaming JSONL reader/writer.
//
// Pool file layout (one JSON object per line):
//
//   {"format_version": 1, "feature_dim": d, "num_classes": C}
//   {"image_id": "a", "instances": [{"category": 0, "score": 0.8,
//                                    "feature": [...d floats...],
//                                    "bbox": [x, y, w, h]}]}
//   ...
//
// Features are 32-bit floats on disk and in memory; every computation over
// them accumulates in double.

#ifndef DETAL_POOL_H_
#define DETAL_POOL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace detal {

inline constexpr int kPoolFormatVersion = 1;
inline constexpr double kDefaultScoreFloor = 0.05;

// Input that violates a documented contract. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable file. The CLI maps it to exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstancePrediction {
  int index = 0;  // ordinal within the image, 0..t-1
  int category = 0;
  double score = 0.0;
  std::vector<float> feature;
  std::optional<std::array<double, 4>> bbox;  // x, y, w, h; audit only

  bool operator==(const InstancePrediction&) const = default;
};

struct ImagePrediction {
  std::string image_id;
  std::vector<InstancePrediction> instances;

  bool operator==(const ImagePrediction&) const = default;
};

struct Pool {
  int feature_dim = 0;
  int num_classes = 0;
  std::vector<ImagePrediction> images;

  std::size_t total_instances() const;
  bool operator==(const Pool&) const = default;
};

// Per-category instance counts over the labeled set.
struct ClassCounts {
  std::vector<std::int64_t> counts;

  int num_classes() const { return static_cast<int>(counts.size()); }
  bool operator==(const ClassCounts&) const = default;
};

struct LoadedPool {
  Pool pool;
  std::size_t dropped_below_floor = 0;
};

// Streams a pool file, validating each record as it is read. Instances with
// score below `score_floor` are dropped and counted; surviving instances are
// renumbered 0..t'-1 in record order.
LoadedPool load_pool(const std::filesystem::path& path,
                     double score_floor = kDefaultScoreFloor);
LoadedPool read_pool(std::istream& in, double score_floor = kDefaultScoreFloor,
                     std::string_view source_name = "<stream>");

void write_pool(const Pool& pool, std::ostream& out);
void save_pool(const Pool& pool, const std::filesystem::path& path);

// Checks every Pool invariant; throws ValidationError on the first violation.
void validate_pool(const Pool& pool);

// Removes instances scoring below `score_floor` and renumbers the rest.
// Returns the number removed.
std::size_t apply_score_floor(ImagePrediction& image, double score_floor);

// Labeled-stats file: {"num_classes": C, "counts": {"<category>": count}}.
ClassCounts load_labeled_stats(const std::filesystem::path& path);
ClassCounts parse_labeled_stats(const nlohmann::json& doc);
// Dense counts from a sparse {"<category>": count} object.
ClassCounts class_counts_from_json(const nlohmann::json& counts, int num_classes);
nlohmann::json labeled_stats_to_json(const ClassCounts& counts);

}  // namespace detal

#endif  // DETAL_POOL_H_
