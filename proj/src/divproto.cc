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

#include "detal/divproto.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "detal/similarity.h"

namespace detal {

QuotaLedger build_minority_set(const ClassCounts& counts, const AcquisitionConfig& cfg) {
  const int num_classes = counts.num_classes();
  if (num_classes < 2) throw ValidationError("minority set needs at least 2 classes");
  if (cfg.budget < 1) throw ValidationError("budget must be >= 1");

  const auto minor = std::max<long>(1, std::lround(cfg.alpha * num_classes));
  const auto quota = std::max<long long>(
      1, static_cast<long long>(std::floor(cfg.beta * cfg.budget / (cfg.alpha * num_classes))));

  std::vector<int> order(num_classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return counts.counts[a] < counts.counts[b];
  });
  order.resize(std::min<long>(minor, num_classes));
  std::sort(order.begin(), order.end());

  QuotaLedger ledger;
  ledger.minority = order;
  for (int c : order) ledger.quotas[c] = static_cast<int>(quota);
  return ledger;
}

void SelectedPrototypeIndex::add(const PrototypeSet& set) {
  for (const auto& proto : set.by_class) {
    by_class_.at(proto.category).push_back(&proto);
  }
}

double SelectedPrototypeIndex::intra_class_metric(const PrototypeSet& candidate) const {
  bool any = false;
  double lowest = 0.0;
  for (const auto& proto : candidate.by_class) {
    const auto& peers = by_class_.at(proto.category);
    if (peers.empty()) continue;
    const std::span<const double> v(proto.vector);
    double best = -1.0;
    for (const Prototype* peer : peers) {
      best = std::max(best, cosine_with_sq_norms(std::span<const double>(peer->vector), v,
                                              peer->sq_norm, proto.sq_norm));
    }
    lowest = any ? std::min(lowest, best) : best;
    any = true;
  }
  return any ? lowest : 0.0;
}

double intra_class_metric(const PrototypeSet& candidate,
                          std::span<const PrototypeSet> selected) {
  bool any = false;
  double lowest = 0.0;
  for (const auto& proto : candidate.by_class) {
    bool seen = false;
    double best = -1.0;
    for (const auto& other : selected) {
      const Prototype* peer = other.find(proto.category);
      if (peer == nullptr) continue;
      best = std::max(best, cosine_similarity(std::span<const double>(peer->vector),
                                              std::span<const double>(proto.vector)));
      seen = true;
    }
    if (!seen) continue;
    lowest = any ? std::min(lowest, best) : best;
    any = true;
  }
  return any ? lowest : 0.0;
}

double class_presence(const ImagePrediction& image, int category) {
  double best = 0.0;
  for (const auto& inst : image.instances) {
    if (inst.category == category) best = std::max(best, inst.score);
  }
  return best;
}

double inter_class_metric(const ImagePrediction& image, const QuotaLedger& ledger) {
  double best = 0.0;
  for (int c : ledger.minority) best = std::max(best, class_presence(image, c));
  return best;
}

AcquisitionResult divproto_select(const Pool& pool, const ClassCounts& counts,
                                  const AcquisitionConfig& cfg) {
  validate(cfg);
  const auto analyses = analyze_pool(pool, cfg);
  return divproto_select(pool, analyses, counts, cfg);
}

AcquisitionResult divproto_select(const Pool& pool,
                                  std::span<const ImageAnalysis> analyses,
                                  const ClassCounts& counts,
                                  const AcquisitionConfig& cfg) {
  validate(cfg);
  if (pool.images.empty()) throw ValidationError("empty pool");
  if (analyses.size() != pool.images.size()) {
    throw ValidationError("scoring pass does not match the pool");
  }
  if (counts.num_classes() != pool.num_classes) {
    throw ValidationError("labeled stats declare " + std::to_string(counts.num_classes()) +
                          " classes but the pool declares " +
                          std::to_string(pool.num_classes));
  }

  AcquisitionResult result;
  result.policy = PolicyId::kDivproto;
  QuotaLedger ledger = build_minority_set(counts, cfg);
  result.initial_ledger = ledger;

  const std::size_t n = pool.images.size();
  const std::size_t target = std::min<std::size_t>(cfg.budget, n);
  result.budget_truncated = static_cast<std::size_t>(cfg.budget) > n;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ea = analyses[a].score.entropy_e;
    const double eb = analyses[b].score.entropy_e;
    if (ea != eb) return ea > eb;
    return pool.images[a].image_id < pool.images[b].image_id;
  });

  std::vector<char> taken(n, 0);
  SelectedPrototypeIndex accepted(pool.num_classes);

  for (std::size_t idx : order) {
    if (result.selected.size() >= target || ledger.empty()) break;
    const auto& image = pool.images[idx];
    AuditRecord rec;
    rec.image_id = image.image_id;
    rec.phase = Phase::kBalanced;
    rec.entropy_e = analyses[idx].score.entropy_e;
    rec.m_g = accepted.intra_class_metric(analyses[idx].prototypes);
    rec.m_p = inter_class_metric(image, ledger);
    rec.accepted = *rec.m_g < cfg.t_intra && *rec.m_p > cfg.t_inter;

    if (rec.accepted) {
      taken[idx] = 1;
      result.selected.push_back(image.image_id);
      accepted.add(analyses[idx].prototypes);
      for (int c : ledger.minority) {
        if (class_presence(image, c) > cfg.t_inter) {
          rec.decremented.push_back(c);
          if (--ledger.quotas[c] == 0) rec.exhausted.push_back(c);
        }
      }
      for (int c : rec.exhausted) {
        ledger.quotas.erase(c);
        std::erase(ledger.minority, c);
      }
    }
    result.audit.push_back(std::move(rec));
  }

  for (std::size_t idx : order) {
    if (result.selected.size() >= target) break;
    if (taken[idx]) continue;
    taken[idx] = 1;
    result.selected.push_back(pool.images[idx].image_id);
    AuditRecord rec;
    rec.image_id = pool.images[idx].image_id;
    rec.phase = Phase::kFillup;
    rec.entropy_e = analyses[idx].score.entropy_e;
    result.audit.push_back(std::move(rec));
  }

  result.final_ledger = std::move(ledger);
  return result;
}

}  // namespace detal
