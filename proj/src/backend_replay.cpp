// Copyright 2026 The taxeval Authors
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

#include "taxeval/error.hpp"
#include "taxeval/llm.hpp"

namespace taxeval {

ReplayBackend::ReplayBackend(std::vector<RawModelReply> records) {
  for (auto& r : records) {
    auto key = std::make_tuple(r.taxonomy_id, r.instance_id, r.sample_index, r.attempt);
    if (!records_.emplace(std::move(key), std::move(r)).second) {
      throw ValidationError("audit log records the same request twice");
    }
  }
}

std::string ReplayBackend::generate(const GenerationRequest& request) {
  auto it = records_.find({request.taxonomy_id, request.instance_id, request.sample_index, request.attempt});
  if (it == records_.end()) {
    // Logs written for a single taxonomy may omit the id.
    it = records_.find({"", request.instance_id, request.sample_index, request.attempt});
  }
  if (it == records_.end()) {
    throw TransportError("no recorded reply for " + request.instance_id + " sample " +
                         std::to_string(request.sample_index) + " attempt " +
                         std::to_string(request.attempt));
  }
  if (!it->second.text) throw TransportError(it->second.error.empty() ? "recorded failure" : it->second.error);
  return *it->second.text;
}

}  // namespace taxeval
