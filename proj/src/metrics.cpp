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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tribe {

std::optional<double> SimulationSummary::yes_ratio() const {
  const int decided = yes_count + no_count;
  if (decided == 0) return std::nullopt;
  return static_cast<double>(yes_count) / decided;
}

std::string_view to_string(TerminalReason r) noexcept {
  switch (r) {
    case TerminalReason::Running: return "running";
    case TerminalReason::AllCeased: return "all_ceased";
    case TerminalReason::StepLimit: return "step_limit";
  }
  return "running";
}

std::optional<TerminalReason> parse_terminal_reason(std::string_view s) {
  if (s == "all_ceased") return TerminalReason::AllCeased;
  if (s == "step_limit") return TerminalReason::StepLimit;
  if (s == "running") return TerminalReason::Running;
  return std::nullopt;
}

SimulationLog extract_log(const SimulationState& state, int max_steps) {
  SimulationLog log;
  log.sim_id = state.sim_id;
  log.rounds = state.step;
  log.max_steps = max_steps;
  log.terminal = state.terminal;
  log.initial_client_bonds = state.initial_client_bonds;
  log.initial_client_cash = state.initial_client_cash;
  log.contacts = state.contacts;
  for (const auto& m : state.mms) log.ceased_at.push_back(m.ceased_at_step);
  log.trades = state.trades;
  log.decisions.reserve(state.decisions.size());
  for (const auto& d : state.decisions) log.decisions.push_back(d.outcome.state);
  return log;
}

namespace {

double pct(double part, double whole) { return whole > 0.0 ? 100.0 * part / whole : 0.0; }

}  // namespace

SimulationSummary summarize_simulation(const SimulationLog& log) {
  SimulationSummary s;
  s.sim_id = log.sim_id;
  s.terminal_reason = log.terminal;
  s.terminal_step = log.rounds > 0 ? log.rounds - 1 : 0;
  s.max_life = 0;
  for (const auto& ceased : log.ceased_at) {
    s.max_life = std::max(s.max_life, ceased ? *ceased : s.terminal_step);
    if (!ceased && log.max_steps > 0 && log.rounds == log.max_steps) s.any_mm_reached_max = true;
  }

  double client_bonds = 0.0, client_cash = 0.0, bank_bonds = 0.0, bank_cash = 0.0;
  for (const auto& t : log.trades) {
    if (t.is_interbank()) {
      bank_bonds += t.bond_qty;
      bank_cash += t.cash_qty;
      ++s.interbank_count;
    } else {
      client_bonds += t.bond_qty;
      client_cash += t.cash_qty;
      ++s.trade_count;
    }
  }
  s.mm_client_bond_pct = pct(client_bonds, log.initial_client_bonds);
  s.mm_client_cash_pct = pct(client_cash, log.initial_client_cash);
  s.interbank_bond_pct = pct(bank_bonds, client_bonds + bank_bonds);
  s.interbank_cash_pct = pct(bank_cash, client_cash + bank_cash);

  s.contacts = log.contacts;
  s.active_mm_steps = log.contacts;
  s.decision_requests = static_cast<int>(log.decisions.size());
  for (const auto d : log.decisions) {
    switch (d) {
      case DecisionState::Yes: ++s.yes_count; break;
      case DecisionState::No: ++s.no_count; break;
      case DecisionState::Error: ++s.error_count; break;
    }
  }
  return s;
}

SimulationSummary summarize_simulation(const SimulationState& state, int max_steps) {
  return summarize_simulation(extract_log(state, max_steps));
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty sample");
  const double rank = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

MetricStats describe(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("no values to describe");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  MetricStats m;
  m.count = sorted.size();
  const double n = static_cast<double>(sorted.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  // Guard the mean against rounding outside [min, max] on constant input.
  m.mean = std::clamp(m.mean, sorted.front(), sorted.back());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std = std::sqrt(ss / n);
  m.min = sorted.front();
  m.max = sorted.back();
  m.p25 = percentile(sorted, 0.25);
  m.p50 = percentile(sorted, 0.50);
  m.p75 = percentile(sorted, 0.75);
  return m;
}

BatchSummary aggregate_batch(std::span<const SimulationSummary> summaries) {
  if (summaries.empty()) throw std::invalid_argument("cannot aggregate an empty batch");
  auto collect = [&](auto field) {
    std::vector<double> v;
    v.reserve(summaries.size());
    for (const auto& s : summaries) v.push_back(static_cast<double>(field(s)));
    return describe(v);
  };
  BatchSummary b;
  b.simulations = summaries.size();
  b.max_life = collect([](const auto& s) { return s.max_life; });
  b.mm_client_bond_pct = collect([](const auto& s) { return s.mm_client_bond_pct; });
  b.mm_client_cash_pct = collect([](const auto& s) { return s.mm_client_cash_pct; });
  b.interbank_bond_pct = collect([](const auto& s) { return s.interbank_bond_pct; });
  b.interbank_cash_pct = collect([](const auto& s) { return s.interbank_cash_pct; });
  b.terminal_step = collect([](const auto& s) { return s.terminal_step; });
  b.decision_requests = collect([](const auto& s) { return s.decision_requests; });
  b.trade_count = collect([](const auto& s) { return s.trade_count; });
  b.sims_reaching_max = static_cast<std::size_t>(std::count_if(
      summaries.begin(), summaries.end(), [](const auto& s) { return s.any_mm_reached_max; }));
  return b;
}

YesRatioSeries yes_ratio_series(std::span<const DecisionState> decisions, std::size_t window) {
  if (window == 0) throw std::invalid_argument("rolling window must be at least 1");
  YesRatioSeries s;
  s.window = window;
  for (const auto d : decisions) {
    if (d != DecisionState::Error) s.outcomes.push_back(d);
  }
  std::vector<int> yes_prefix(s.outcomes.size() + 1, 0);
  for (std::size_t i = 0; i < s.outcomes.size(); ++i) {
    yes_prefix[i + 1] = yes_prefix[i] + (s.outcomes[i] == DecisionState::Yes ? 1 : 0);
    s.cumulative.push_back(static_cast<double>(yes_prefix[i + 1]) / static_cast<double>(i + 1));
    if (i + 1 >= window) {
      s.rolling.push_back(static_cast<double>(yes_prefix[i + 1] - yes_prefix[i + 1 - window]) /
                          static_cast<double>(window));
    }
  }
  return s;
}

std::optional<YesRatioStats> describe_series(const YesRatioSeries& series) {
  if (series.cumulative.empty()) return std::nullopt;
  YesRatioStats st;
  st.cumulative = describe(series.cumulative);
  if (!series.rolling.empty()) st.rolling = describe(series.rolling);
  return st;
}

namespace {

using Row = std::vector<std::string>;

std::string render_text(const std::string& title, const std::vector<Row>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    widths.resize(std::max(widths.size(), r.size()), 0);
    for (std::size_t c = 0; c < r.size(); ++c) widths[c] = std::max(widths[c], r[c].size());
  }
  std::ostringstream out;
  out << title << '\n';
  auto rule = [&] {
    out << '+';
    for (auto w : widths) out << std::string(w + 2, '-') << '+';
    out << '\n';
  };
  rule();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << '|';
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      const auto& cell = rows[i][c];
      out << ' ' << cell << std::string(widths[c] - cell.size(), ' ') << " |";
    }
    out << '\n';
    if (i == 0) rule();
  }
  rule();
  return out.str();
}

std::string render_csv(const std::vector<Row>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out << ',';
      out << r[c];
    }
    out << '\n';
  }
  return out.str();
}

std::string fmt_int(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f", std::round(v));
  return buf;
}
std::string fmt_pct(double v) { return fmt_int(v) + "%"; }
std::string fmt_csv(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

using Cell = double (*)(const MetricStats&);
struct StatRow {
  const char* label_table2;
  const char* label_table3;
  Cell get;
};
constexpr StatRow kBatchRows[] = {
    {"mean", "Mean", [](const MetricStats& m) { return m.mean; }},
    {"std", "Std", [](const MetricStats& m) { return m.std; }},
    {"25%", "25%", [](const MetricStats& m) { return m.p25; }},
    {"50%", "50%", [](const MetricStats& m) { return m.p50; }},
    {"75%", "75%", [](const MetricStats& m) { return m.p75; }},
    {"max", "Max", [](const MetricStats& m) { return m.max; }},
};

const char* const kTable2Title =
    "Summary Statistics for Maximum agent life, Total Bond Accumulation as a %, and Cash "
    "Accumulation as a %";
const char* const kTable3Title =
    "LLM in ABMs for Maximum Agent Life, Bond Trading (%), and Cash Trading (%)";
const char* const kTable4Title = "Summary Statistics for Yes/No Ratio and Rolling 10 Requests";

std::vector<Row> table2_rows(const BatchSummary& b, bool csv) {
  std::vector<Row> rows{{"Statistic", "MaxLife", "MM-to-Client Bond Trading (%)",
                         "MM-to-Client Cash Trading (%)", "MM-2-MM Bonds (%)",
                         "MM-2-MM Cash (%)"}};
  for (const auto& r : kBatchRows) {
    auto f = csv ? fmt_csv : fmt_int;
    rows.push_back({r.label_table2, f(r.get(b.max_life)), f(r.get(b.mm_client_bond_pct)),
                    f(r.get(b.mm_client_cash_pct)), f(r.get(b.interbank_bond_pct)),
                    f(r.get(b.interbank_cash_pct))});
  }
  return rows;
}

std::vector<Row> table3_rows(const BatchSummary& b, bool csv) {
  std::vector<Row> rows{{"Statistic", "Max Life Agents", "MM-to-Client Bond Trading (%)",
                         "MM-to-Client Cash Trading (%)"}};
  for (const auto& r : kBatchRows) {
    rows.push_back({r.label_table3, csv ? fmt_csv(r.get(b.max_life)) : fmt_int(r.get(b.max_life)),
                    csv ? fmt_csv(r.get(b.mm_client_bond_pct)) : fmt_pct(r.get(b.mm_client_bond_pct)),
                    csv ? fmt_csv(r.get(b.mm_client_cash_pct)) : fmt_pct(r.get(b.mm_client_cash_pct))});
  }
  return rows;
}

std::vector<Row> table4_rows(const std::optional<YesRatioStats>& s, bool csv) {
  std::vector<Row> rows{{"Statistic", "Yes/No Ratio (%)", "Rolling 10 Requests (%)"}};
  const std::pair<const char*, Cell> stats[] = {
      {"Mean", [](const MetricStats& m) { return m.mean; }},
      {"Std Dev", [](const MetricStats& m) { return m.std; }},
      {"Min", [](const MetricStats& m) { return m.min; }},
      {"Max", [](const MetricStats& m) { return m.max; }},
  };
  for (const auto& [label, get] : stats) {
    if (!s) {
      rows.push_back({label, "n/a", "n/a"});
      continue;
    }
    const double cum = 100.0 * get(s->cumulative);
    const double roll = 100.0 * get(s->rolling);
    const bool has_roll = s->rolling.count > 0;
    rows.push_back({label, csv ? fmt_csv(cum) : fmt_pct(cum),
                    has_roll ? (csv ? fmt_csv(roll) : fmt_pct(roll)) : "n/a"});
  }
  return rows;
}

}  // namespace

std::string table2_text(const BatchSummary& b) { return render_text(kTable2Title, table2_rows(b, false)); }
std::string table3_text(const BatchSummary& b) { return render_text(kTable3Title, table3_rows(b, false)); }
std::string table4_text(const std::optional<YesRatioStats>& s) {
  return render_text(kTable4Title, table4_rows(s, false));
}
std::string table2_csv(const BatchSummary& b) { return render_csv(table2_rows(b, true)); }
std::string table3_csv(const BatchSummary& b) { return render_csv(table3_rows(b, true)); }
std::string table4_csv(const std::optional<YesRatioStats>& s) { return render_csv(table4_rows(s, true)); }

void write_series_csv(const YesRatioSeries& s, std::ostream& out) {
  out << "seq,cumulative,rolling\n";
  char buf[96];
  for (std::size_t i = 0; i < s.cumulative.size(); ++i) {
    if (i + 1 >= s.window) {
      std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f\n", i, s.cumulative[i],
                    s.rolling[i + 1 - s.window]);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%.6f,\n", i, s.cumulative[i]);
    }
    out << buf;
  }
}

}  // namespace tribe
