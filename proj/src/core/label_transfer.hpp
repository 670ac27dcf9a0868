// Copyright 2026 The mtm Authors
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

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "matching.hpp"

namespace mtm {

/// Confusion counts keyed by true label, then predicted label. A vertex whose
/// cluster has nothing on the other side is predicted as kNoPrediction.
using Confusion = std::map<std::string, std::map<std::string, std::size_t>>;

inline constexpr const char* kNoPrediction = "<none>";

struct LabelTransferScore {
  double error_g = 0.0;  // G labels predicted from H
  double error_h = 0.0;  // H labels predicted from G
  double mean = 0.0;
  Confusion confusion_g;
  Confusion confusion_h;
};

/// Each vertex is predicted to carry the majority label of the other graph's
/// vertices in its cluster (ties go to the lexicographically smallest label).
/// Throws when a label is missing or empty.
LabelTransferScore score_label_transfer(const Matching& m, const std::vector<std::string>& labels_g,
                                        const std::vector<std::string>& labels_h);

}  // namespace mtm
