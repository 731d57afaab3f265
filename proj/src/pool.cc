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

#include "detal/pool.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace detal {

using nlohmann::json;

namespace {

[[noreturn]] void fail_at(std::string_view source, std::size_t line,
                          const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw ValidationError(msg.str());
}

int require_int(const json& obj, const char* key, std::string_view source,
                std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    fail_at(source, line, std::string("missing or non-integer field '") + key + "'");
  }
  return it->get<int>();
}

ImagePrediction parse_image_record(const json& rec, int feature_dim,
                                   int num_classes, std::string_view source,
                                   std::size_t line) {
  if (!rec.is_object()) fail_at(source, line, "record is not a JSON object");
  auto id_it = rec.find("image_id");
  if (id_it == rec.end() || !id_it->is_string()) {
    fail_at(source, line, "missing or non-string 'image_id'");
  }
  ImagePrediction image;
  image.image_id = id_it->get<std::string>();
  if (image.image_id.empty()) fail_at(source, line, "empty 'image_id'");

  auto inst_it = rec.find("instances");
  if (inst_it == rec.end() || !inst_it->is_array()) {
    fail_at(source, line, "image '" + image.image_id + "': missing 'instances' array");
  }
  image.instances.reserve(inst_it->size());
  int index = 0;
  for (const json& inst : *inst_it) {
    const std::string where = "image '" + image.image_id + "' instance " +
                              std::to_string(index) + ": ";
    if (!inst.is_object()) fail_at(source, line, where + "not an object");
    InstancePrediction out;
    out.index = index++;

    auto cat = inst.find("category");
    if (cat == inst.end() || !cat->is_number_integer()) {
      fail_at(source, line, where + "missing or non-integer 'category'");
    }
    const auto category = cat->get<std::int64_t>();
    if (category < 0 || category >= num_classes) {
      fail_at(source, line, where + "category " + std::to_string(category) +
                                " out of range [0, " +
                                std::to_string(num_classes) + ")");
    }
    out.category = static_cast<int>(category);

    auto score = inst.find("score");
    if (score == inst.end() || !score->is_number()) {
      fail_at(source, line, where + "missing or non-numeric 'score'");
    }
    out.score = score->get<double>();
    if (!(out.score >= 0.0 && out.score <= 1.0)) {
      fail_at(source, line, where + "score " + score->dump() + " outside [0, 1]");
    }

    auto feat = inst.find("feature");
    if (feat == inst.end() || !feat->is_array()) {
      fail_at(source, line, where + "missing 'feature' array");
    }
    if (static_cast<int>(feat->size()) != feature_dim) {
      fail_at(source, line, where + "feature dimension mismatch: got " +
                                std::to_string(feat->size()) + ", expected " +
                                std::to_string(feature_dim));
    }
    out.feature.reserve(feature_dim);
    for (const json& v : *feat) {
      if (!v.is_number()) fail_at(source, line, where + "non-numeric feature value");
      out.feature.push_back(static_cast<float>(v.get<double>()));
    }

    if (auto box = inst.find("bbox"); box != inst.end() && !box->is_null()) {
      if (!box->is_array() || box->size() != 4) {
        fail_at(source, line, where + "'bbox' must be a 4-element array");
      }
      std::array<double, 4> b{};
      for (std::size_t i = 0; i < 4; ++i) {
        if (!(*box)[i].is_number()) fail_at(source, line, where + "non-numeric bbox value");
        b[i] = (*box)[i].get<double>();
      }
      out.bbox = b;
    }
    image.instances.push_back(std::move(out));
  }
  return image;
}

}  // namespace

std::size_t Pool::total_instances() const {
  std::size_t total = 0;
  for (const auto& image : images) total += image.instances.size();
  return total;
}

std::size_t apply_score_floor(ImagePrediction& image, double score_floor) {
  const std::size_t before = image.instances.size();
  std::erase_if(image.instances, [score_floor](const InstancePrediction& inst) {
    return inst.score < score_floor;
  });
  for (std::size_t k = 0; k < image.instances.size(); ++k) {
    image.instances[k].index = static_cast<int>(k);
  }
  return before - image.instances.size();
}

LoadedPool read_pool(std::istream& in, double score_floor,
                     std::string_view source_name) {
  if (!(score_floor >= 0.0 && score_floor <= 1.0)) {
    throw ValidationError("score_floor must lie in [0, 1]");
  }
  LoadedPool result;
  std::string text;
  std::size_t line = 0;

  // Header.
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") != std::string::npos) break;
    text.clear();
  }
  if (text.empty()) fail_at(source_name, line, "missing header line");
  json header;
  try {
    header = json::parse(text);
  } catch (const json::parse_error& e) {
    fail_at(source_name, line, std::string("malformed header: ") + e.what());
  }
  if (!header.is_object()) fail_at(source_name, line, "header is not a JSON object");
  const int version = require_int(header, "format_version", source_name, line);
  if (version != kPoolFormatVersion) {
    fail_at(source_name, line, "unsupported format_version " + std::to_string(version));
  }
  Pool& pool = result.pool;
  pool.feature_dim = require_int(header, "feature_dim", source_name, line);
  pool.num_classes = require_int(header, "num_classes", source_name, line);
  if (pool.feature_dim < 1) fail_at(source_name, line, "feature_dim must be >= 1");
  if (pool.num_classes < 1) fail_at(source_name, line, "num_classes must be >= 1");

  std::unordered_set<std::string> seen;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(text);
    } catch (const json::parse_error& e) {
      fail_at(source_name, line, std::string("malformed record: ") + e.what());
    }
    ImagePrediction image =
        parse_image_record(rec, pool.feature_dim, pool.num_classes, source_name, line);
    if (!seen.insert(image.image_id).second) {
      fail_at(source_name, line, "duplicate image_id '" + image.image_id + "'");
    }
    result.dropped_below_floor += apply_score_floor(image, score_floor);
    pool.images.push_back(std::move(image));
  }
  if (in.bad()) throw IoError(std::string(source_name) + ": read error");
  if (pool.images.empty()) {
    throw ValidationError(std::string(source_name) + ": empty pool (no image records)");
  }
  return result;
}

LoadedPool load_pool(const std::filesystem::path& path, double score_floor) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pool file " + path.string());
  return read_pool(in, score_floor, path.string());
}

void write_pool(const Pool& pool, std::ostream& out) {
  json header = {{"format_version", kPoolFormatVersion},
                 {"feature_dim", pool.feature_dim},
                 {"num_classes", pool.num_classes}};
  out << header.dump() << '\n';
  for (const auto& image : pool.images) {
    json instances = json::array();
    for (const auto& inst : image.instances) {
      // float -> double is exact, so the 17-digit rendering reloads bit-exactly.
      json feature = json::array();
      for (float v : inst.feature) feature.push_back(static_cast<double>(v));
      json rec = {{"category", inst.category},
                  {"score", inst.score},
                  {"feature", std::move(feature)}};
      if (inst.bbox) rec["bbox"] = *inst.bbox;
      instances.push_back(std::move(rec));
    }
    out << json{{"image_id", image.image_id}, {"instances", std::move(instances)}}.dump()
        << '\n';
  }
}

void save_pool(const Pool& pool, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write pool file " + path.string());
  write_pool(pool, out);
  if (!out) throw IoError("write failed for " + path.string());
}

void validate_pool(const Pool& pool) {
  if (pool.feature_dim < 1) throw ValidationError("feature_dim must be >= 1");
  if (pool.num_classes < 1) throw ValidationError("num_classes must be >= 1");
  if (pool.images.empty()) throw ValidationError("empty pool");
  std::unordered_set<std::string_view> seen;
  for (const auto& image : pool.images) {
    if (!seen.insert(image.image_id).second) {
      throw ValidationError("duplicate image_id '" + image.image_id + "'");
    }
    for (std::size_t k = 0; k < image.instances.size(); ++k) {
      const auto& inst = image.instances[k];
      const std::string where = "image '" + image.image_id + "' instance " + std::to_string(k);
      if (inst.index != static_cast<int>(k)) {
        throw ValidationError(where + ": instance indices must be 0..t-1");
      }
      if (inst.category < 0 || inst.category >= pool.num_classes) {
        throw ValidationError(where + ": category out of range");
      }
      if (!(inst.score >= 0.0 && inst.score <= 1.0)) {
        throw ValidationError(where + ": score outside [0, 1]");
      }
      if (static_cast<int>(inst.feature.size()) != pool.feature_dim) {
        throw ValidationError(where + ": feature dimension mismatch");
      }
    }
  }
}

ClassCounts class_counts_from_json(const json& counts, int num_classes) {
  if (num_classes < 1) throw ValidationError("num_classes must be >= 1");
  if (!counts.is_object()) throw ValidationError("'counts' must be a JSON object");
  ClassCounts out;
  out.counts.assign(num_classes, 0);
  for (const auto& [key, value] : counts.items()) {
    int category = -1;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), category);
    if (ec != std::errc() || ptr != key.data() + key.size()) {
      throw ValidationError("category key '" + key + "' is not an integer");
    }
    if (category < 0 || category >= num_classes) {
      throw ValidationError("category " + key + " out of range [0, " +
                            std::to_string(num_classes) + ")");
    }
    if (!value.is_number_integer()) {
      throw ValidationError("count for category " + key + " is not an integer");
    }
    const auto count = value.get<std::int64_t>();
    if (count < 0) {
      throw ValidationError("negative count for category " + key);
    }
    out.counts[category] = count;
  }
  return out;
}

ClassCounts parse_labeled_stats(const json& doc) {
  if (!doc.is_object()) throw ValidationError("labeled stats must be a JSON object");
  auto nc = doc.find("num_classes");
  if (nc == doc.end() || !nc->is_number_integer()) {
    throw ValidationError("labeled stats: missing integer 'num_classes'");
  }
  auto counts = doc.find("counts");
  if (counts == doc.end()) throw ValidationError("labeled stats: missing 'counts'");
  return class_counts_from_json(*counts, nc->get<int>());
}

ClassCounts load_labeled_stats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labeled stats file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
  return parse_labeled_stats(doc);
}

json labeled_stats_to_json(const ClassCounts& counts) {
  json sparse = json::object();
  for (int c = 0; c < counts.num_classes(); ++c) {
    sparse[std::to_string(c)] = counts.counts[c];
  }
  return {{"num_classes", counts.num_classes()}, {"counts", std::move(sparse)}};
}

}  // namespace detal
