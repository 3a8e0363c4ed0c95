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

#include "tribe/decision.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "tribe/error.hpp"
#include "tribe/journal.hpp"
#include "tribe/llm_client.hpp"
#include "tribe_assets.hpp"

namespace tribe {

std::string_view to_string(ProviderKind k) noexcept {
  switch (k) {
    case ProviderKind::Bernoulli: return "bernoulli";
    case ProviderKind::LiveLLM: return "live";
    case ProviderKind::Replay: return "replay";
    case ProviderKind::SyntheticBursty: return "bursty";
  }
  return "bernoulli";
}

std::string_view to_string(PromptTemplate t) noexcept {
  switch (t) {
    case PromptTemplate::Timeliness: return "timeliness";
    case PromptTemplate::Aversion1: return "aversion1";
    case PromptTemplate::Aversion2: return "aversion2";
    case PromptTemplate::Aversion3: return "aversion3";
  }
  return "timeliness";
}

std::optional<ProviderKind> parse_provider_kind(std::string_view s) {
  if (s == "bernoulli") return ProviderKind::Bernoulli;
  if (s == "live" || s == "llm") return ProviderKind::LiveLLM;
  if (s == "replay") return ProviderKind::Replay;
  if (s == "bursty" || s == "synthetic-bursty") return ProviderKind::SyntheticBursty;
  return std::nullopt;
}

std::optional<PromptTemplate> parse_prompt_template(std::string_view s) {
  if (s == "timeliness") return PromptTemplate::Timeliness;
  if (s == "aversion1") return PromptTemplate::Aversion1;
  if (s == "aversion2") return PromptTemplate::Aversion2;
  if (s == "aversion3") return PromptTemplate::Aversion3;
  return std::nullopt;
}

void ProviderConfig::validate() const {
  if (bernoulli_p < 0.0 || bernoulli_p > 1.0) {
    throw ConfigError("bernoulli_p must lie in [0, 1]");
  }
  if (!(burst_stay_yes > 0.0 && burst_stay_yes < 1.0 && burst_stay_no > 0.0 &&
        burst_stay_no < 1.0)) {
    throw ConfigError("burst_stay_yes and burst_stay_no must lie in (0, 1)");
  }
  if (max_retries < 0) throw ConfigError("max_retries must be non-negative");
  if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
  if (timeout_ms <= 0) throw ConfigError("timeout_ms must be positive");
  if (kind == ProviderKind::LiveLLM && (endpoint_url.empty() || model_name.empty())) {
    throw ConfigError("live provider requires endpoint_url and model_name");
  }
}

std::string_view prompt_template_text(PromptTemplate t) {
  switch (t) {
    case PromptTemplate::Timeliness: return assets::prompt_timeliness();
    case PromptTemplate::Aversion1: return assets::prompt_aversion1();
    case PromptTemplate::Aversion2: return assets::prompt_aversion2();
    case PromptTemplate::Aversion3: return assets::prompt_aversion3();
  }
  throw ConfigError("unknown prompt template");
}

namespace {

std::string two_decimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_prompt(PromptTemplate t, const DesireQuery& q) {
  const std::string_view text = prompt_template_text(t);
  std::string out;
  out.reserve(text.size() + 16);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const auto close = text.find('}', i);
      if (close != std::string_view::npos) {
        const auto name = text.substr(i + 1, close - i - 1);
        std::optional<std::string> value;
        if (name == "client_bonds" || name == "bonds") value = two_decimals(q.client_bonds);
        else if (name == "client_cash" || name == "cash") value = two_decimals(q.client_cash);
        else if (name == "x") value = std::to_string(q.client_position.x);
        else if (name == "y") value = std::to_string(q.client_position.y);
        if (value) {
          out += *value;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

std::uint64_t prompt_hash(std::string_view rendered) { return fnv1a64(rendered); }

namespace {

// Length of a leading curly quote (UTF-8), or 0.
std::size_t curly_quote_len(std::string_view s) {
  if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xE2 &&
      static_cast<unsigned char>(s[1]) == 0x80) {
    const auto c = static_cast<unsigned char>(s[2]);
    if (c == 0x98 || c == 0x99 || c == 0x9C || c == 0x9D) return 3;
  }
  return 0;
}

}  // namespace

DecisionState normalize_response(std::string_view raw) {
  std::size_t i = 0;
  while (i < raw.size()) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (std::isspace(c) || std::ispunct(c)) {
      ++i;
    } else if (const auto n = curly_quote_len(raw.substr(i)); n > 0) {
      i += n;
    } else {
      break;
    }
  }
  std::string token;
  while (i < raw.size() && std::isalpha(static_cast<unsigned char>(raw[i]))) {
    token += static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i])));
    ++i;
  }
  if (token == "yes") return DecisionState::Yes;
  if (token == "no") return DecisionState::No;
  return DecisionState::Error;
}

DecisionOutcome BernoulliProvider::decide(const DesireQuery&, RandomStream& rng) {
  DecisionOutcome out;
  out.provider = ProviderKind::Bernoulli;
  out.state = rng.bernoulli(p_yes_) ? DecisionState::Yes : DecisionState::No;
  return out;
}

double SyntheticBurstyProvider::stationary_yes() const noexcept {
  return (1.0 - stay_no_) / ((1.0 - stay_yes_) + (1.0 - stay_no_));
}

DecisionOutcome SyntheticBurstyProvider::decide(const DesireQuery&, RandomStream& rng) {
  if (!current_yes_) current_yes_ = rng.bernoulli(stationary_yes());
  DecisionOutcome out;
  out.provider = ProviderKind::SyntheticBursty;
  out.state = *current_yes_ ? DecisionState::Yes : DecisionState::No;
  current_yes_ = *current_yes_ ? rng.bernoulli(stay_yes_) : !rng.bernoulli(stay_no_);
  return out;
}

ReplayProvider::ReplayProvider(std::vector<JournalRecord> records, PromptTemplate tmpl)
    : records_(std::move(records)), template_(tmpl) {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const JournalRecord& a, const JournalRecord& b) { return a.seq < b.seq; });
}

ReplayProvider::~ReplayProvider() = default;

DecisionOutcome ReplayProvider::decide(const DesireQuery& q, RandomStream&) {
  DecisionOutcome out;
  out.provider = ProviderKind::Replay;
  out.state = DecisionState::Error;
  const auto it = std::lower_bound(
      records_.begin(), records_.end(), q.sequence_no,
      [](const JournalRecord& r, std::uint64_t seq) { return r.seq < seq; });
  if (it == records_.end() || it->seq != q.sequence_no) return out;  // exhausted
  if (it->prompt_hash != prompt_hash(render_prompt(template_, q))) return out;
  out.state = it->state;
  out.raw_text = it->raw;
  return out;
}

RateLimiter::RateLimiter(double requests_per_second) {
  if (requests_per_second > 0.0) {
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / requests_per_second));
  }
}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_slot_);
    next_slot_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

LiveLlmProvider::LiveLlmProvider(ProviderConfig cfg, std::string api_key,
                                 std::shared_ptr<ChatTransport> transport,
                                 std::shared_ptr<RateLimiter> limiter)
    : cfg_(std::move(cfg)),
      api_key_(std::move(api_key)),
      transport_(std::move(transport)),
      limiter_(std::move(limiter)) {
  if (!transport_) throw ProviderError("live provider requires a transport");
}

DecisionOutcome LiveLlmProvider::decide(const DesireQuery& q, RandomStream&) {
  const std::string prompt = render_prompt(cfg_.prompt_template, q);
  const std::string body = build_chat_request(cfg_.model_name, cfg_.temperature, prompt);
  DecisionOutcome out;
  out.provider = ProviderKind::LiveLLM;
  out.state = DecisionState::Error;
  const int attempts = 1 + cfg_.max_retries;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (limiter_) limiter_->acquire();
    const auto start = std::chrono::steady_clock::now();
    const TransportResult res =
        transport_->post_json(cfg_.endpoint_url, body, api_key_, cfg_.timeout_ms);
    out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (!res.ok) continue;
    if (auto text = parse_chat_reply(res.body)) {
      out.raw_text = std::move(*text);
      out.state = normalize_response(out.raw_text);
      return out;
    }
  }
  return out;
}

std::string resolve_live_credentials(const ProviderConfig& cfg) {
  if (cfg.endpoint_url.rfind("http://", 0) != 0 && cfg.endpoint_url.rfind("https://", 0) != 0) {
    throw ProviderError("live endpoint must be an http(s) URL: " + cfg.endpoint_url);
  }
  if (cfg.api_key_env.empty()) throw ProviderError("api_key_env is empty");
  const char* token = std::getenv(cfg.api_key_env.c_str());
  if (token == nullptr || *token == '\0') {
    throw ProviderError("environment variable " + cfg.api_key_env +
                        " must hold the API bearer token");
  }
  return token;
}

std::vector<JournalRecord> load_replay_source(const ProviderConfig& cfg) {
  if (cfg.replay_path.empty()) throw ConfigError("replay provider requires replay_path");
  if (cfg.replay_path == kBuiltinAversionCorpus) {
    std::istringstream in(builtin_aversion_corpus());
    return read_journal(in);
  }
  return read_journal(std::filesystem::path(cfg.replay_path));
}

}  // namespace tribe
