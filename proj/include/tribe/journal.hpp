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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tribe/decision.hpp"

namespace tribe {

// One line of a decision journal (UTF-8 JSON lines):
//   {"sim":0,"seq":12,"prompt_hash":"<16 hex>","state":"yes","raw":"Yes","latency_ms":412}
// `sim` is omitted in shared corpora, which apply to every simulation.
struct JournalRecord {
  std::optional<int> sim;
  std::uint64_t seq = 0;
  std::uint64_t prompt_hash = 0;
  DecisionState state = DecisionState::Error;
  std::string raw;
  std::optional<std::int64_t> latency_ms;

  friend bool operator==(const JournalRecord&, const JournalRecord&) = default;
};

JournalRecord make_journal_record(const DesireQuery& q, PromptTemplate tmpl,
                                  const DecisionOutcome& outcome,
                                  bool with_sim = true);

std::string to_json_line(const JournalRecord& r);
// Throws ProviderError on malformed input.
JournalRecord parse_journal_line(std::string_view line);

// Appends one record and flushes. Throws IoError on failure.
void journal_append(const std::filesystem::path& path, const DesireQuery& q,
                    PromptTemplate tmpl, const DecisionOutcome& outcome);

std::vector<JournalRecord> read_journal(std::istream& in);
std::vector<JournalRecord> read_journal(const std::filesystem::path& path);

// Records applicable to simulation `sim_id`: those tagged with it plus any
// untagged corpus records.
std::vector<JournalRecord> records_for_sim(const std::vector<JournalRecord>& all,
                                           int sim_id);

std::string builtin_aversion_corpus();

}  // namespace tribe
