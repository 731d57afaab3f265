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

#include "detal/result.h"

#include "detal/pool.h"

namespace detal {

using nlohmann::json;

std::string_view to_string(PolicyId policy) {
  switch (policy) {
    case PolicyId::kRandom: return "random";
    case PolicyId::kEntropyTopk: return "entropy_topk";
    case PolicyId::kCoresetKcenter: return "coreset_kcenter";
    case PolicyId::kUbPairwise: return "ub_pairwise";
    case PolicyId::kEnmsOnly: return "enms_only";
    case PolicyId::kDivproto: return "divproto";
  }
  return "unknown";
}

std::optional<PolicyId> parse_policy(std::string_view name) {
  for (PolicyId p : kAllPolicies) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kBalanced: return "balanced";
    case Phase::kFillup: return "fillup";
    case Phase::kRanked: return "ranked";
  }
  return "unknown";
}

long long QuotaLedger::total() const {
  long long sum = 0;
  for (const auto& [c, q] : quotas) sum += q;
  return sum;
}

json to_json(const QuotaLedger& ledger) {
  json quotas = json::object();
  for (const auto& [c, q] : ledger.quotas) quotas[std::to_string(c)] = q;
  return {{"minority", ledger.minority}, {"quotas", std::move(quotas)}};
}

json to_json(const AuditRecord& r) {
  json out = {{"image_id", r.image_id},
              {"phase", std::string(to_string(r.phase))},
              {"accepted", r.accepted},
              {"entropy_e", r.entropy_e}};
  if (r.m_g) out["m_g"] = *r.m_g;
  if (r.m_p) out["m_p"] = *r.m_p;
  if (r.score) out["score"] = *r.score;
  if (r.phase == Phase::kBalanced) {
    out["decremented"] = r.decremented;
    out["exhausted"] = r.exhausted;
  }
  return out;
}

json to_json(const AcquisitionResult& result, const AcquisitionConfig& cfg,
             const json& extra_echo) {
  json audit = json::array();
  for (const auto& r : result.audit) audit.push_back(to_json(r));
  json echo = to_json(cfg);
  echo["policy"] = std::string(to_string(result.policy));
  for (const auto& [k, v] : extra_echo.items()) echo[k] = v;
  json out = {{"policy", std::string(to_string(result.policy))},
              {"selected", result.selected},
              {"audit", std::move(audit)},
              {"budget_truncated", result.budget_truncated},
              {"config_echo", std::move(echo)}};
  if (result.initial_ledger) out["initial_ledger"] = to_json(*result.initial_ledger);
  if (result.final_ledger) out["final_ledger"] = to_json(*result.final_ledger);
  return out;
}

std::vector<std::string> selected_ids_from_json(const json& doc) {
  auto it = doc.find("selected");
  if (!doc.is_object() || it == doc.end() || !it->is_array()) {
    throw ValidationError("selection file has no 'selected' array");
  }
  std::vector<std::string> ids;
  for (const auto& v : *it) {
    if (!v.is_string()) throw ValidationError("selection ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  return ids;
}

}  // namespace detal
