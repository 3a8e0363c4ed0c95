// Copyright 2026 The TRIBE Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <optional>

namespace tribe {

struct TransportResult {
  bool ok = false;        // request completed with a 2xx status
  long http_status = 0;   // 0 when no response arrived
  std::string body;
  std::string error;
};

// Minimal HTTP POST interface for chat-completion calls.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual TransportResult post_json(const std::string& url, const std::string& body,
                                    const std::string& bearer_token,
                                    int timeout_ms) = 0;
};

// libcurl-backed transport.
class CurlTransport final : public ChatTransport {
 public:
  CurlTransport();
  ~CurlTransport() override;
  CurlTransport(const CurlTransport&) = delete;
  CurlTransport& operator=(const CurlTransport&) = delete;

  TransportResult post_json(const std::string& url, const std::string& body,
                            const std::string& bearer_token, int timeout_ms) override;
};

// {"model":..., "temperature":..., "messages":[{"role":"user","content":...}]}
std::string build_chat_request(const std::string& model, double temperature,
                               const std::string& prompt);

// choices[0].message.content, or nullopt if the reply does not have that shape.
std::optional<std::string> parse_chat_reply(const std::string& body);

}  // namespace tribe
