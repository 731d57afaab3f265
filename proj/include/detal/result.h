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

#ifndef DETAL_RESULT_H_
#define DETAL_RESULT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detal/config.h"
#include "json.hpp"

namespace detal {

enum class PolicyId {
  kRandom,
  kEntropyTopk,
  kCoresetKcenter,
  kUbPairwise,
  kEnmsOnly,
  kDivproto,
};

inline constexpr PolicyId kAllPolicies[] = {
    PolicyId::kRandom,   PolicyId::kEntropyTopk, PolicyId::kCoresetKcenter,
    PolicyId::kUbPairwise, PolicyId::kEnmsOnly,  PolicyId::kDivproto,
};

std::string_view to_string(PolicyId policy);
std::optional<PolicyId> parse_policy(std::string_view name);

enum class Phase {
  kBalanced,  // scanned by the quota-balanced pass (accepted or rejected)
  kFillup,    // added while topping the selection up to the budget
  kRanked,    // chosen by a baseline policy
};

std::string_view to_string(Phase phase);

// Minority classes and their remaining per-class budgets.
struct QuotaLedger {
  std::vector<int> minority;   // ascending category id
  std::map<int, int> quotas;   // keyed exactly by `minority`

  bool empty() const { return minority.empty(); }
  long long total() const;
  bool operator==(const QuotaLedger&) const = default;
};

struct AuditRecord {
  std::string image_id;
  Phase phase = Phase::kRanked;
  bool accepted = true;
  double entropy_e = 0.0;        // ranking entropy of the image
  std::optional<double> m_g;     // intra-class redundancy at decision time
  std::optional<double> m_p;     // minority presence at decision time
  std::optional<double> score;   // policy-specific key for baselines
  std::vector<int> decremented;  // minority quotas charged on acceptance
  std::vector<int> exhausted;    // classes that left the minority set

  bool operator==(const AuditRecord&) const = default;
};

struct AcquisitionResult {
  PolicyId policy = PolicyId::kDivproto;
  std::vector<std::string> selected;  // in acquisition order
  std::vector<AuditRecord> audit;
  bool budget_truncated = false;      // budget exceeded the pool size
  std::optional<QuotaLedger> initial_ledger;
  std::optional<QuotaLedger> final_ledger;

  bool operator==(const AcquisitionResult&) const = default;
};

nlohmann::json to_json(const QuotaLedger& ledger);
nlohmann::json to_json(const AuditRecord& record);
// Result document with a `config_echo` block merged from `cfg` and `extra_echo`.
nlohmann::json to_json(const AcquisitionResult& result, const AcquisitionConfig& cfg,
                       const nlohmann::json& extra_echo = nlohmann::json::object());

// Reads back the `selected` list of a result document.
std::vector<std::string> selected_ids_from_json(const nlohmann::json& doc);

}  // namespace detal

#endif  // DETAL_RESULT_H_
