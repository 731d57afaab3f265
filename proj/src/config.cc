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

#include "detal/config.h"

#include <string>

namespace detal {

using nlohmann::json;

void validate(const AcquisitionConfig& cfg) {
  auto in_range = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in_range(cfg.t_enms, -1.0, 1.0)) throw ValidationError("t_enms must lie in [-1, 1]");
  if (!in_range(cfg.t_intra, -1.0, 1.0)) throw ValidationError("t_intra must lie in [-1, 1]");
  if (!in_range(cfg.t_inter, 0.0, 1.0)) throw ValidationError("t_inter must lie in [0, 1]");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(cfg.beta > cfg.alpha && cfg.beta < 1.0)) {
    throw ValidationError("beta must satisfy alpha < beta < 1");
  }
  if (cfg.budget < 1) throw ValidationError("budget must be >= 1");
  if (!in_range(cfg.score_floor, 0.0, 1.0)) {
    throw ValidationError("score_floor must lie in [0, 1]");
  }
}

json to_json(const AcquisitionConfig& cfg) {
  return {{"t_enms", cfg.t_enms},
          {"t_intra", cfg.t_intra},
          {"t_inter", cfg.t_inter},
          {"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"budget", cfg.budget},
          {"score_floor", cfg.score_floor},
          {"seed", cfg.seed},
          {"prototype_source", std::string(to_string(cfg.prototype_source))},
          {"use_enms", cfg.use_enms}};
}

AcquisitionConfig apply_json(AcquisitionConfig cfg, const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "t_enms") cfg.t_enms = value.get<double>();
      else if (key == "t_intra") cfg.t_intra = value.get<double>();
      else if (key == "t_inter") cfg.t_inter = value.get<double>();
      else if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "budget") cfg.budget = value.get<int>();
      else if (key == "score_floor") cfg.score_floor = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "prototype_source")
        cfg.prototype_source = parse_prototype_source(value.get<std::string>());
      else if (key == "use_enms") cfg.use_enms = value.get<bool>();
      else throw ValidationError("unknown config key '" + key + "'");
    } catch (const json::type_error&) {
      throw ValidationError("config key '" + key + "' has the wrong type");
    }
  }
  return cfg;
}

}  // namespace detal
