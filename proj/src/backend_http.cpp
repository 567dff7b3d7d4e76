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

#include <chrono>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "taxeval/error.hpp"
#include "taxeval/llm.hpp"

namespace taxeval {

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  const auto& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("endpoint must be an http(s) URL: " + url);
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ValidationError("unsupported endpoint scheme: " + scheme);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (scheme_host_port_.size() == scheme_end + 3) throw ValidationError("endpoint has no host: " + url);
}

std::string HttpBackend::generate(const GenerationRequest& request) {
  if (request.attempt > 0 && config_.retry_backoff_ms > 0) {
    std::this_thread::sleep_for(std::chrono::milliseconds(config_.retry_backoff_ms << (request.attempt - 1)));
  }

  nlohmann::json body = {
      {"model", config_.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.temperature},
  };

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(config_.request_timeout_seconds);
  client.set_read_timeout(config_.request_timeout_seconds);
  client.set_write_timeout(config_.request_timeout_seconds);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw TransportError("request to " + config_.endpoint + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("endpoint answered HTTP " + std::to_string(res->status));
  }

  try {
    const auto doc = nlohmann::json::parse(res->body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw TransportError("reply content is not a string");
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") + e.what());
  }
}

}  // namespace taxeval
