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

// Diverse-prototype acquisition.
//
// Images are scanned in order of decreasing (post-ENMS) entropy. A candidate
// is accepted when it is not redundant with what has already been accepted
// in the same pass (intra-class metric below t_intra) and when it likely
// contains a minority class that still has quota left (inter-class metric
// above t_inter). Acceptance charges one unit of quota to every minority
// class the image likely contains. The pass stops once the budget is met,
// the minority set runs dry, or the images run out; the selection is then
// topped up with the highest-entropy images not yet taken.

#ifndef DETAL_DIVPROTO_H_
#define DETAL_DIVPROTO_H_

#include <span>
#include <vector>

#include "detal/config.h"
#include "detal/pool.h"
#include "detal/prototypes.h"
#include "detal/result.h"
#include "detal/scoring.h"

namespace detal {

// C_minor = max(1, round(alpha C)) classes with the fewest labeled instances
// (ties: lower id), each with quota max(1, floor(beta b / (alpha C))).
// Requires C >= 2.
QuotaLedger build_minority_set(const ClassCounts& counts, const AcquisitionConfig& cfg);

// min over shared classes c of max over selected j of cos(proto_{j,c}, proto_c).
// Only classes present in the candidate and in at least one selected set take
// part; with none, the result is 0.
double intra_class_metric(const PrototypeSet& candidate,
                          std::span<const PrototypeSet> selected);

// Highest score among instances of category c; 0 if there are none.
double class_presence(const ImagePrediction& image, int category);

// max over current minority classes of class_presence; 0 for an empty ledger.
double inter_class_metric(const ImagePrediction& image, const QuotaLedger& ledger);

// Accepted prototypes grouped by class, for repeated intra-class queries
// against a growing selection.
class SelectedPrototypeIndex {
 public:
  explicit SelectedPrototypeIndex(int num_classes) : by_class_(num_classes) {}

  // `set` must outlive the index.
  void add(const PrototypeSet& set);
  double intra_class_metric(const PrototypeSet& candidate) const;

 private:
  std::vector<std::vector<const Prototype*>> by_class_;
};

AcquisitionResult divproto_select(const Pool& pool, const ClassCounts& counts,
                                  const AcquisitionConfig& cfg);
// Same, reusing a scoring pass already computed with `cfg`.
AcquisitionResult divproto_select(const Pool& pool,
                                  std::span<const ImageAnalysis> analyses,
                                  const ClassCounts& counts,
                                  const AcquisitionConfig& cfg);

}  // namespace detal

#endif  // DETAL_DIVPROTO_H_
