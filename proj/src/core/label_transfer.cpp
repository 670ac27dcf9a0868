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

#include "label_transfer.hpp"

namespace mtm {

namespace {

std::string majority(const std::vector<std::size_t>& members, const std::vector<std::string>& labels) {
  if (members.empty()) return kNoPrediction;
  std::map<std::string, std::size_t> votes;
  for (std::size_t v : members) ++votes[labels[v]];
  // std::map iterates in lexical order, so the first maximum wins ties.
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

void check_labels(const std::vector<std::string>& labels, const char* side) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i].empty())
      throw Error(Error::Code::kInvalidArgument, std::string("unlabeled vertex ") + std::to_string(i) + " in " + side);
}

}  // namespace

LabelTransferScore score_label_transfer(const Matching& m, const std::vector<std::string>& labels_g,
                                        const std::vector<std::string>& labels_h) {
  check_labels(labels_g, "G");
  check_labels(labels_h, "H");
  std::vector<int> covered_g(labels_g.size(), 0), covered_h(labels_h.size(), 0);
  for (const Cluster& c : m.clusters) {
    for (std::size_t v : c.g) {
      if (v >= labels_g.size()) throw Error(Error::Code::kInvalidArgument, "unlabeled G vertex " + std::to_string(v));
      ++covered_g[v];
    }
    for (std::size_t v : c.h) {
      if (v >= labels_h.size()) throw Error(Error::Code::kInvalidArgument, "unlabeled H vertex " + std::to_string(v));
      ++covered_h[v];
    }
  }
  for (int c : covered_g)
    if (c != 1) throw Error(Error::Code::kInvalidArgument, "matching does not cover every G vertex exactly once");
  for (int c : covered_h)
    if (c != 1) throw Error(Error::Code::kInvalidArgument, "matching does not cover every H vertex exactly once");

  LabelTransferScore score;
  std::size_t wrong_g = 0, wrong_h = 0;
  for (const Cluster& c : m.clusters) {
    const std::string from_h = majority(c.h, labels_h);
    const std::string from_g = majority(c.g, labels_g);
    for (std::size_t v : c.g) {
      ++score.confusion_g[labels_g[v]][from_h];
      if (from_h != labels_g[v]) ++wrong_g;
    }
    for (std::size_t v : c.h) {
      ++score.confusion_h[labels_h[v]][from_g];
      if (from_g != labels_h[v]) ++wrong_h;
    }
  }
  score.error_g = labels_g.empty() ? 0.0 : static_cast<double>(wrong_g) / static_cast<double>(labels_g.size());
  score.error_h = labels_h.empty() ? 0.0 : static_cast<double>(wrong_h) / static_cast<double>(labels_h.size());
  score.mean = 0.5 * (score.error_g + score.error_h);
  return score;
}

}  // namespace mtm
