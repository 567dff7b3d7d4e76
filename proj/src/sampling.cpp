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

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "taxeval/error.hpp"
#include "taxeval/llm.hpp"

namespace taxeval {

SampleOutcome sample_predictions(const SingleErrorInstance& instance, const Taxonomy& taxonomy,
                                 const EvalConfig& config, Backend& backend) {
  GenerationRequest req;
  req.taxonomy_id = taxonomy.id();
  req.instance_id = instance.id;
  req.prompt = build_prompt(instance, taxonomy, config.k);
  req.temperature = config.temperature;
  if (auto g = instance.gold.find(taxonomy.id()); g != instance.gold.end()) {
    req.gold_label = taxonomy.resolve_label(g->second).value_or("");
  }

  SampleOutcome out;
  for (int s = 0; s < config.samples; ++s) {
    req.sample_index = s;
    bool done = false;
    for (int a = 0; a < config.max_attempts && !done; ++a) {
      req.attempt = a;
      RawModelReply reply{taxonomy.id(), instance.id, s, a, std::nullopt, "", false};
      try {
        reply.text = backend.generate(req);
      } catch (const TransportError& e) {
        reply.error = e.what();
      }
      if (reply.text) {
        if (auto set = parse_reply(*reply.text, taxonomy, config.k)) {
          set->instance_id = instance.id;
          out.sets.push_back(std::move(*set));
          reply.parsed = true;
          done = true;
        }
      }
      out.replies.push_back(std::move(reply));
    }
    if (!done) {
      out.complete = false;
      break;
    }
  }
  return out;
}

PredictionRun predict_corpus(const Corpus& corpus, const Taxonomy& taxonomy, const EvalConfig& config,
                             Backend& backend) {
  config.validate();
  const auto& instances = corpus.instances;
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return instances[a].id < instances[b].id; });

  std::vector<SampleOutcome> outcomes(order.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= order.size()) return;
      try {
        outcomes[i] = sample_predictions(instances[order[i]], taxonomy, config, backend);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = order.size();
        return;
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.max_parallel), order.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  PredictionRun run;
  run.taxonomy_id = taxonomy.id();
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& o = outcomes[i];
    InstancePrediction p;
    p.instance_id = instances[order[i]].id;
    if (o.complete) {
      p.aggregated = aggregate_avg_conf(o.sets, config.k);
    } else {
      ++run.excluded;
    }
    for (const auto& r : o.replies) {
      if (!r.text) {
        ++run.transport_failures;
      } else if (!r.parsed) {
        ++run.parse_failures;
      }
    }
    p.samples = std::move(o.sets);
    run.audit.insert(run.audit.end(), std::make_move_iterator(o.replies.begin()),
                     std::make_move_iterator(o.replies.end()));
    run.instances.push_back(std::move(p));
  }
  return run;
}

}  // namespace taxeval
