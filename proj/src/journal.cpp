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

#include "tribe/journal.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>

#include "tribe/error.hpp"
#include "tribe_assets.hpp"

namespace tribe {

using nlohmann::json;

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t parse_hash_hex(const std::string& s) {
  if (s.size() != 16) throw ProviderError("prompt_hash must be 16 hex digits");
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw ProviderError("prompt_hash must be 16 hex digits");
  return v;
}

}  // namespace

JournalRecord make_journal_record(const DesireQuery& q, PromptTemplate tmpl,
                                  const DecisionOutcome& outcome, bool with_sim) {
  JournalRecord r;
  if (with_sim) r.sim = q.sim_id;
  r.seq = q.sequence_no;
  r.prompt_hash = prompt_hash(render_prompt(tmpl, q));
  r.state = outcome.state;
  r.raw = outcome.raw_text;
  r.latency_ms = outcome.latency_ms;
  return r;
}

std::string to_json_line(const JournalRecord& r) {
  // ordered_json keeps the documented field order on disk.
  nlohmann::ordered_json j;
  if (r.sim) j["sim"] = *r.sim;
  j["seq"] = r.seq;
  j["prompt_hash"] = hash_hex(r.prompt_hash);
  j["state"] = std::string(to_string(r.state));
  j["raw"] = r.raw;
  if (r.latency_ms) j["latency_ms"] = *r.latency_ms;
  else j["latency_ms"] = nullptr;
  return j.dump();
}

JournalRecord parse_journal_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProviderError(std::string("malformed journal line: ") + e.what());
  }
  try {
    JournalRecord r;
    if (j.contains("sim") && !j["sim"].is_null()) r.sim = j["sim"].get<int>();
    r.seq = j.at("seq").get<std::uint64_t>();
    r.prompt_hash = parse_hash_hex(j.at("prompt_hash").get<std::string>());
    const auto state = parse_decision_state(j.at("state").get<std::string>());
    if (!state) throw ProviderError("unknown decision state in journal");
    r.state = *state;
    r.raw = j.value("raw", std::string{});
    if (j.contains("latency_ms") && !j["latency_ms"].is_null()) {
      r.latency_ms = j["latency_ms"].get<std::int64_t>();
    }
    return r;
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed journal record: ") + e.what());
  }
}

void journal_append(const std::filesystem::path& path, const DesireQuery& q,
                    PromptTemplate tmpl, const DecisionOutcome& outcome) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open journal " + path.string());
  out << to_json_line(make_journal_record(q, tmpl, outcome)) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing journal " + path.string());
}

std::vector<JournalRecord> read_journal(std::istream& in) {
  std::vector<JournalRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      records.push_back(parse_journal_line(line));
    } catch (const ProviderError& e) {
      throw ProviderError("journal line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<JournalRecord> read_journal(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProviderError("cannot open journal " + path.string());
  return read_journal(in);
}

std::vector<JournalRecord> records_for_sim(const std::vector<JournalRecord>& all,
                                           int sim_id) {
  std::vector<JournalRecord> out;
  for (const auto& r : all) {
    if (!r.sim || *r.sim == sim_id) out.push_back(r);
  }
  return out;
}

std::string builtin_aversion_corpus() { return std::string(assets::aversion_corpus()); }

}  // namespace tribe
