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

#include "tribe/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tribe {
namespace {

using DS = DecisionState;

TradeRecord client_trade(double bonds, double cash) {
  TradeRecord t;
  t.counterparty = GridPos{0, 0};
  t.client_direction = Direction::Sell;
  t.bond_qty = bonds;
  t.cash_qty = cash;
  return t;
}

TradeRecord bank_trade(double qty) {
  TradeRecord t;
  t.counterparty = InterbankCounterparty{1};
  t.bond_qty = qty;
  t.cash_qty = qty;
  return t;
}

TEST(PercentileTest, LinearInterpolationBetweenRanks) {
  const std::vector<double> v = {10, 20, 30, 40};
  EXPECT_DOUBLE_EQ(percentile(v, 0.5), 25.0);
  EXPECT_DOUBLE_EQ(percentile(v, 0.25), 17.5);
  EXPECT_DOUBLE_EQ(percentile(v, 0.75), 32.5);
  EXPECT_DOUBLE_EQ(percentile(v, 0.0), 10.0);
  EXPECT_DOUBLE_EQ(percentile(v, 1.0), 40.0);
  const std::vector<double> one = {7};
  EXPECT_DOUBLE_EQ(percentile(one, 0.3), 7.0);
}

TEST(DescribeTest, PopulationStatistics) {
  const std::vector<double> v = {40, 10, 30, 20};
  const auto d = describe(v);
  EXPECT_DOUBLE_EQ(d.mean, 25.0);
  EXPECT_DOUBLE_EQ(d.std, std::sqrt(125.0));
  EXPECT_DOUBLE_EQ(d.min, 10.0);
  EXPECT_DOUBLE_EQ(d.max, 40.0);
  EXPECT_DOUBLE_EQ(d.p50, 25.0);
  EXPECT_EQ(d.count, 4u);
  EXPECT_THROW(describe(std::vector<double>{}), std::invalid_argument);
}

TEST(DescribeTest, ConstantInputHasMeanEqualToValue) {
  const std::vector<double> v(1000, 0.1);
  const auto d = describe(v);
  EXPECT_EQ(d.mean, 0.1);
  EXPECT_EQ(d.std, 0.0);
}

TEST(SummaryTest, PercentagesAndLife) {
  SimulationLog log;
  log.rounds = 40;
  log.max_steps = 1500;
  log.initial_client_bonds = 200.0;
  log.initial_client_cash = 50.0;
  log.ceased_at = {12, 39, 5};
  log.trades = {client_trade(30.0, 5.0), client_trade(20.0, 5.0), bank_trade(50.0)};
  log.decisions = {DS::Yes, DS::No, DS::Yes, DS::Error};
  log.contacts = 90;
  const auto s = summarize_simulation(log);
  EXPECT_EQ(s.terminal_step, 39);
  EXPECT_EQ(s.max_life, 39);
  EXPECT_DOUBLE_EQ(s.mm_client_bond_pct, 25.0);
  EXPECT_DOUBLE_EQ(s.mm_client_cash_pct, 20.0);
  EXPECT_DOUBLE_EQ(s.interbank_bond_pct, 50.0);
  EXPECT_DOUBLE_EQ(s.interbank_cash_pct, 100.0 * 50 / 60);
  EXPECT_EQ(s.trade_count, 2);
  EXPECT_EQ(s.interbank_count, 1);
  EXPECT_EQ(s.decision_requests, 4);
  EXPECT_EQ(s.yes_count, 2);
  EXPECT_EQ(s.error_count, 1);
  EXPECT_EQ(s.yes_ratio(), 2.0 / 3.0);
  EXPECT_FALSE(s.any_mm_reached_max);
}

TEST(SummaryTest, SurvivorAtStepCapReachesMax) {
  SimulationLog log;
  log.rounds = 1500;
  log.max_steps = 1500;
  log.terminal = TerminalReason::StepLimit;
  log.ceased_at = {std::nullopt, 20};
  const auto s = summarize_simulation(log);
  EXPECT_EQ(s.terminal_step, 1499);
  EXPECT_EQ(s.max_life, 1499);
  EXPECT_TRUE(s.any_mm_reached_max);
  EXPECT_EQ(s.mm_client_bond_pct, 0.0);
  EXPECT_FALSE(s.yes_ratio());
}

TEST(BatchTest, AggregatesEachMetric) {
  std::vector<SimulationSummary> sums(4);
  for (int i = 0; i < 4; ++i) {
    sums[static_cast<std::size_t>(i)].max_life = 10 * (i + 1);
    sums[static_cast<std::size_t>(i)].mm_client_bond_pct = i;
  }
  sums[3].any_mm_reached_max = true;
  const auto b = aggregate_batch(sums);
  EXPECT_EQ(b.simulations, 4u);
  EXPECT_DOUBLE_EQ(b.max_life.p50, 25.0);
  EXPECT_DOUBLE_EQ(b.mm_client_bond_pct.mean, 1.5);
  EXPECT_EQ(b.sims_reaching_max, 1u);
  EXPECT_THROW(aggregate_batch(std::vector<SimulationSummary>{}), std::invalid_argument);
}

TEST(YesRatioTest, ErrorsAreExcludedAndWindowsSlide) {
  std::vector<DS> d = {DS::Yes, DS::Error, DS::No, DS::Yes, DS::Yes};
  const auto s = yes_ratio_series(d, 2);
  ASSERT_EQ(s.outcomes.size(), 4u);
  EXPECT_EQ(s.cumulative, (std::vector<double>{1.0, 0.5, 2.0 / 3.0, 0.75}));
  EXPECT_EQ(s.rolling, (std::vector<double>{0.5, 0.5, 1.0}));
}

TEST(YesRatioTest, ShortSeriesHasNoRollingWindows) {
  std::vector<DS> d(9, DS::Yes);
  const auto s = yes_ratio_series(d, 10);
  EXPECT_EQ(s.cumulative.size(), 9u);
  EXPECT_TRUE(s.rolling.empty());
  const auto st = describe_series(s);
  ASSERT_TRUE(st);
  EXPECT_EQ(st->rolling.count, 0u);
  EXPECT_FALSE(describe_series(yes_ratio_series(std::vector<DS>{DS::Error}, 10)));
}

// Brute-force rolling mean against the prefix-sum implementation.
TEST(YesRatioTest, RollingMatchesBruteForce) {
  RandomStream rng(4);
  std::vector<DS> d(500);
  for (auto& x : d) x = rng.bernoulli(0.1) ? DS::Error : (rng.bernoulli(0.6) ? DS::Yes : DS::No);
  const auto s = yes_ratio_series(d, 10);
  for (std::size_t i = 0; i < s.rolling.size(); ++i) {
    int yes = 0;
    for (std::size_t k = i; k < i + 10; ++k) yes += s.outcomes[k] == DS::Yes;
    ASSERT_DOUBLE_EQ(s.rolling[i], yes / 10.0);
  }
}

TEST(SeriesCsvTest, HeaderAndBlankLeadingRolling) {
  std::vector<DS> d = {DS::Yes, DS::No, DS::No};
  std::ostringstream out;
  write_series_csv(yes_ratio_series(d, 2), out);
  EXPECT_EQ(out.str(),
            "seq,cumulative,rolling\n0,1.000000,\n1,0.500000,0.500000\n2,0.333333,0.000000\n");
}

BatchSummary sample_batch() {
  std::vector<SimulationSummary> sums(3);
  for (int i = 0; i < 3; ++i) {
    auto& s = sums[static_cast<std::size_t>(i)];
    s.max_life = 100 * (i + 1);
    s.mm_client_bond_pct = 10.0 * i;
    s.mm_client_cash_pct = 5.0 * i;
    s.interbank_bond_pct = 1.0 * i;
    s.interbank_cash_pct = 2.0 * i;
  }
  return aggregate_batch(sums);
}

TEST(TableTest, Table2Schema) {
  const auto t = table2_text(sample_batch());
  for (const char* col : {"Statistic", "MaxLife", "MM-to-Client Bond Trading (%)",
                          "MM-to-Client Cash Trading (%)", "MM-2-MM Bonds (%)",
                          "MM-2-MM Cash (%)"})
    EXPECT_NE(t.find(col), std::string::npos) << col;
  for (const char* row : {"| mean ", "| std ", "| 25% ", "| 50% ", "| 75% ", "| max "})
    EXPECT_NE(t.find(row), std::string::npos) << row;
  EXPECT_EQ(t.find("| min "), std::string::npos);
}

TEST(TableTest, Table3Schema) {
  const auto t = table3_text(sample_batch());
  for (const char* col : {"Max Life Agents", "MM-to-Client Bond Trading (%)",
                          "MM-to-Client Cash Trading (%)"})
    EXPECT_NE(t.find(col), std::string::npos) << col;
  EXPECT_EQ(t.find("MM-2-MM"), std::string::npos);
  for (const char* row : {"| Mean ", "| Std ", "| 25% ", "| 50% ", "| 75% ", "| Max "})
    EXPECT_NE(t.find(row), std::string::npos) << row;
  EXPECT_NE(t.find("10%"), std::string::npos);  // bond pct mean carries a unit
}

TEST(TableTest, Table4SchemaAndMissingStats) {
  YesRatioStats st;
  const std::vector<double> v = {0.5, 0.6};
  st.cumulative = describe(v);
  st.rolling = describe(v);
  const auto t = table4_text(st);
  for (const char* s : {"Yes/No Ratio (%)", "Rolling 10 Requests (%)", "| Mean ", "| Std Dev ",
                        "| Min ", "| Max "})
    EXPECT_NE(t.find(s), std::string::npos) << s;
  EXPECT_NE(t.find("55%"), std::string::npos);
  EXPECT_NE(table4_text(std::nullopt).find("n/a"), std::string::npos);
}

TEST(TableTest, CsvHasHeaderAndSixRows) {
  const auto csv = table2_csv(sample_batch());
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "Statistic,MaxLife,MM-to-Client Bond Trading (%),MM-to-Client Cash Trading (%),"
            "MM-2-MM Bonds (%),MM-2-MM Cash (%)");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

}  // namespace
}  // namespace tribe
