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

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tribe/rng.hpp"
#include "tribe/types.hpp"

namespace tribe {

enum class ProviderKind { Bernoulli, LiveLLM, Replay, SyntheticBursty };
enum class PromptTemplate { Timeliness, Aversion1, Aversion2, Aversion3 };

std::string_view to_string(ProviderKind k) noexcept;
std::string_view to_string(PromptTemplate t) noexcept;
std::optional<ProviderKind> parse_provider_kind(std::string_view s);
std::optional<PromptTemplate> parse_prompt_template(std::string_view s);

struct DesireQuery {
  int sim_id = 0;
  int step = 0;
  int mm_id = 0;
  GridPos client_position;
  double client_bonds = 0.0;
  double client_cash = 0.0;
  std::uint64_t sequence_no = 0;
};

struct DecisionOutcome {
  DecisionState state = DecisionState::Error;
  std::string raw_text;
  ProviderKind provider = ProviderKind::Bernoulli;
  std::optional<std::int64_t> latency_ms;
};

// Self-transition probabilities giving a ~57% long-run yes share and a
// rolling-10 std of ~0.18 in which all-No and all-Yes windows occur.
// Output of tools/calibrate_bursty.cpp (grid 0.30..0.90, step 0.01).
inline constexpr double kCalibratedStayYes = 0.64;
inline constexpr double kCalibratedStayNo = 0.53;

inline constexpr std::string_view kDefaultModel = "gpt-4o-mini-2024-07-18";
inline constexpr std::string_view kDefaultEndpoint =
    "https://api.openai.com/v1/chat/completions";
inline constexpr std::string_view kDefaultApiKeyEnv = "OPENAI_API_KEY";
inline constexpr std::string_view kBuiltinAversionCorpus = "builtin:aversion-corpus";

struct ProviderConfig {
  ProviderKind kind = ProviderKind::Bernoulli;
  double bernoulli_p = 0.5;
  PromptTemplate prompt_template = PromptTemplate::Timeliness;
  std::string endpoint_url{kDefaultEndpoint};
  std::string model_name{kDefaultModel};
  std::string api_key_env{kDefaultApiKeyEnv};
  double temperature = 1.0;
  int max_retries = 1;
  int timeout_ms = 30000;
  double rate_limit_rps = 5.0;  // process-wide ceiling; <= 0 disables
  std::string replay_path;
  double burst_stay_yes = kCalibratedStayYes;
  double burst_stay_no = kCalibratedStayNo;

  void validate() const;
};

// Raw template text with `{...}` placeholders.
std::string_view prompt_template_text(PromptTemplate t);

// Substitutes holdings (two fractional digits) and coordinates.
std::string render_prompt(PromptTemplate t, const DesireQuery& q);

// Stable hash of a rendered prompt, as stored in journals.
std::uint64_t prompt_hash(std::string_view rendered);

// Strict-prefix three-state normalization. Total and pure.
DecisionState normalize_response(std::string_view raw);

class DecisionProvider {
 public:
  virtual ~DecisionProvider() = default;
  [[nodiscard]] virtual ProviderKind kind() const noexcept = 0;
  virtual DecisionOutcome decide(const DesireQuery& q, RandomStream& rng) = 0;
};

class BernoulliProvider final : public DecisionProvider {
 public:
  explicit BernoulliProvider(double p_yes) : p_yes_(p_yes) {}
  [[nodiscard]] ProviderKind kind() const noexcept override { return ProviderKind::Bernoulli; }
  DecisionOutcome decide(const DesireQuery& q, RandomStream& rng) override;

 private:
  double p_yes_;
};

// Two-state Markov chain over {Yes, No}. Emits the current state, then
// transitions. The first state is drawn from the stationary distribution.
class SyntheticBurstyProvider final : public DecisionProvider {
 public:
  SyntheticBurstyProvider(double stay_yes, double stay_no)
      : stay_yes_(stay_yes), stay_no_(stay_no) {}
  [[nodiscard]] ProviderKind kind() const noexcept override {
    return ProviderKind::SyntheticBursty;
  }
  DecisionOutcome decide(const DesireQuery& q, RandomStream& rng) override;

  [[nodiscard]] double stationary_yes() const noexcept;

 private:
  double stay_yes_;
  double stay_no_;
  std::optional<bool> current_yes_;
};

struct JournalRecord;

// Serves recorded outcomes by sequence number. A record whose prompt hash
// does not match the query's rendered prompt, or a sequence number past the
// end of the journal, yields Error.
class ReplayProvider final : public DecisionProvider {
 public:
  ReplayProvider(std::vector<JournalRecord> records, PromptTemplate tmpl);
  ~ReplayProvider() override;
  [[nodiscard]] ProviderKind kind() const noexcept override { return ProviderKind::Replay; }
  DecisionOutcome decide(const DesireQuery& q, RandomStream& rng) override;

 private:
  std::vector<JournalRecord> records_;  // sorted by seq
  PromptTemplate template_;
};

// Shared request-rate ceiling. Thread-safe.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);
  void acquire();

 private:
  std::mutex mutex_;
  std::chrono::steady_clock::duration interval_{};
  std::chrono::steady_clock::time_point next_slot_{};
};

class ChatTransport;

class LiveLlmProvider final : public DecisionProvider {
 public:
  // `limiter` may be null. `api_key` is held in memory only.
  LiveLlmProvider(ProviderConfig cfg, std::string api_key,
                  std::shared_ptr<ChatTransport> transport,
                  std::shared_ptr<RateLimiter> limiter);
  [[nodiscard]] ProviderKind kind() const noexcept override { return ProviderKind::LiveLLM; }
  DecisionOutcome decide(const DesireQuery& q, RandomStream& rng) override;

 private:
  ProviderConfig cfg_;
  std::string api_key_;
  std::shared_ptr<ChatTransport> transport_;
  std::shared_ptr<RateLimiter> limiter_;
};

// Reads the bearer token and checks the endpoint. Throws ProviderError so a
// misconfigured live batch fails before any simulation starts.
std::string resolve_live_credentials(const ProviderConfig& cfg);

// Loads the journal named by cfg.replay_path (or the built-in corpus).
// Throws ProviderError if it cannot be read.
std::vector<JournalRecord> load_replay_source(const ProviderConfig& cfg);

}  // namespace tribe
