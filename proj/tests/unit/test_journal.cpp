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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "tribe/error.hpp"

namespace tribe {
namespace {

DesireQuery query(int sim, std::uint64_t seq) {
  DesireQuery q;
  q.sim_id = sim;
  q.sequence_no = seq;
  q.client_bonds = 10.5;
  q.client_cash = 2.25;
  q.client_position = {4, 9};
  return q;
}

TEST(JournalTest, LineFormatIsStable) {
  DecisionOutcome out;
  out.state = DecisionState::Yes;
  out.raw_text = "Yes \"quoted\"";
  out.latency_ms = 412;
  const auto r = make_journal_record(query(2, 12), PromptTemplate::Timeliness, out);
  const auto line = to_json_line(r);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(
                    prompt_hash(render_prompt(PromptTemplate::Timeliness, query(2, 12)))));
  EXPECT_EQ(line, std::string("{\"sim\":2,\"seq\":12,\"prompt_hash\":\"") + hash +
                      "\",\"state\":\"yes\",\"raw\":\"Yes \\\"quoted\\\"\",\"latency_ms\":412}");
}

TEST(JournalTest, RoundTripsThroughText) {
  DecisionOutcome out;
  out.state = DecisionState::Error;
  out.raw_text = "multi\nline \xE2\x80\x9C reply";
  auto r = make_journal_record(query(0, 3), PromptTemplate::Aversion2, out);
  EXPECT_EQ(parse_journal_line(to_json_line(r)), r);
  r.sim.reset();
  r.latency_ms.reset();
  EXPECT_EQ(parse_journal_line(to_json_line(r)), r);
}

TEST(JournalTest, AppendThenReplayGivesSameState) {
  const auto dir = test::scratch_dir("journal-append");
  const auto path = dir / "j.jsonl";
  DecisionOutcome out;
  out.state = DecisionState::No;
  out.raw_text = "No.";
  journal_append(path, query(0, 0), PromptTemplate::Timeliness, out);
  const auto records = read_journal(path);
  ASSERT_EQ(records.size(), 1u);
  ReplayProvider replay(records, PromptTemplate::Timeliness);
  RandomStream rng(0);
  const auto again = replay.decide(query(0, 0), rng);
  EXPECT_EQ(again.state, DecisionState::No);
  EXPECT_EQ(again.raw_text, "No.");
}

TEST(JournalTest, AppendToUnwritablePathThrows) {
  const auto dir = test::scratch_dir("journal-unwritable");
  EXPECT_THROW(journal_append(dir, query(0, 0), PromptTemplate::Timeliness, {}), IoError);
}

TEST(JournalTest, ReaderSkipsBlankLinesAndReportsLineNumbers) {
  std::istringstream ok(
      "{\"seq\":0,\"prompt_hash\":\"00000000000000ff\",\"state\":\"no\",\"raw\":\"no\","
      "\"latency_ms\":null}\r\n\n");
  const auto recs = read_journal(ok);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].prompt_hash, 0xffu);
  EXPECT_FALSE(recs[0].sim);

  std::istringstream bad(
      "{\"seq\":0,\"prompt_hash\":\"0000000000000000\",\"state\":\"no\",\"raw\":\"\"}\n{not json}\n");
  try {
    read_journal(bad);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(JournalTest, RejectsUnknownStateAndBadHash) {
  EXPECT_THROW(parse_journal_line(
                   R"({"seq":0,"prompt_hash":"00","state":"maybe","raw":""})"),
               ProviderError);
  EXPECT_THROW(parse_journal_line(R"({"seq":0,"prompt_hash":"xyz","state":"no","raw":""})"),
               ProviderError);
  EXPECT_THROW(parse_journal_line(R"({"prompt_hash":"00","state":"no","raw":""})"),
               ProviderError);
}

TEST(JournalTest, MissingFileIsAProviderError) {
  EXPECT_THROW(read_journal(std::filesystem::path("/nonexistent/journal.jsonl")),
               ProviderError);
}

TEST(JournalTest, RecordsForSimKeepsTaggedAndSharedRecords) {
  std::vector<JournalRecord> all(4);
  all[0].sim = 0;
  all[1].sim = 1;
  all[2].sim = 1;
  all[3].sim.reset();
  EXPECT_EQ(records_for_sim(all, 1).size(), 3u);
  EXPECT_EQ(records_for_sim(all, 0).size(), 2u);
  EXPECT_EQ(records_for_sim(all, 7).size(), 1u);
}

TEST(AversionCorpusTest, CoversTwoHundredRequestsOfAversionOne) {
  std::istringstream in(builtin_aversion_corpus());
  const auto recs = read_journal(in);
  ASSERT_EQ(recs.size(), 200u);
  const auto hash = prompt_hash(render_prompt(PromptTemplate::Aversion1, {}));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].seq, i);
    EXPECT_FALSE(recs[i].sim);
    EXPECT_EQ(recs[i].prompt_hash, hash);
    EXPECT_EQ(recs[i].state, DecisionState::No);
  }
}

TEST(AversionCorpusTest, EmbeddedCopyMatchesShippedFile) {
  EXPECT_EQ(builtin_aversion_corpus(),
            test::read_file(test::data_dir().parent_path() / "assets" / "corpus" /
                            "aversion_corpus.jsonl"));
}

}  // namespace
}  // namespace tribe
