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

#include "tribe/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "tribe/error.hpp"
#include "tribe/journal.hpp"
#include "tribe/llm_client.hpp"

namespace tribe {

bool BatchResult::any_aborted() const {
  for (const auto& r : runs)
    if (r.aborted) return true;
  return false;
}

namespace {

// Shared, read-only (apart from the rate limiter) provider resources.
struct ProviderContext {
  ProviderConfig cfg;
  std::vector<JournalRecord> replay_records;
  std::string api_key;
  std::shared_ptr<ChatTransport> transport;
  std::shared_ptr<RateLimiter> limiter;
};

ProviderContext prepare_providers(const ExperimentConfig& cfg) {
  ProviderContext ctx;
  ctx.cfg = cfg.provider;
  switch (cfg.provider.kind) {
    case ProviderKind::LiveLLM:
      ctx.api_key = resolve_live_credentials(cfg.provider);
      ctx.transport = std::make_shared<CurlTransport>();
      ctx.limiter = std::make_shared<RateLimiter>(cfg.provider.rate_limit_rps);
      break;
    case ProviderKind::Replay:
      ctx.replay_records = load_replay_source(cfg.provider);
      break;
    default:
      break;
  }
  return ctx;
}

std::unique_ptr<DecisionProvider> make_provider(const ProviderContext& ctx, int sim_id) {
  switch (ctx.cfg.kind) {
    case ProviderKind::Bernoulli:
      return std::make_unique<BernoulliProvider>(ctx.cfg.bernoulli_p);
    case ProviderKind::SyntheticBursty:
      return std::make_unique<SyntheticBurstyProvider>(ctx.cfg.burst_stay_yes,
                                                       ctx.cfg.burst_stay_no);
    case ProviderKind::Replay:
      return std::make_unique<ReplayProvider>(records_for_sim(ctx.replay_records, sim_id),
                                              ctx.cfg.prompt_template);
    case ProviderKind::LiveLLM:
      return std::make_unique<LiveLlmProvider>(ctx.cfg, ctx.api_key, ctx.transport,
                                               ctx.limiter);
  }
  throw ConfigError("unknown provider kind");
}

// Records every decision; appends to `path` as it goes when one is given.
class JournalingProvider final : public DecisionProvider {
 public:
  JournalingProvider(DecisionProvider& inner, PromptTemplate tmpl,
                     std::optional<std::filesystem::path> path,
                     std::vector<JournalRecord>& sink)
      : inner_(inner), template_(tmpl), path_(std::move(path)), sink_(sink) {}

  [[nodiscard]] ProviderKind kind() const noexcept override { return inner_.kind(); }

  DecisionOutcome decide(const DesireQuery& q, RandomStream& rng) override {
    DecisionOutcome out = inner_.decide(q, rng);
    if (path_) journal_append(*path_, q, template_, out);
    sink_.push_back(make_journal_record(q, template_, out));
    return out;
  }

 private:
  DecisionProvider& inner_;
  PromptTemplate template_;
  std::optional<std::filesystem::path> path_;
  std::vector<JournalRecord>& sink_;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sim_file(const char* prefix, int sim_id, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04d%s", prefix, sim_id, ext);
  return buf;
}

void run_one(const ExperimentConfig& cfg, const ProviderContext& ctx, SimulationResult& run) {
  run.state = make_simulation(cfg.sim, run.sim_id, run.seed);
  if (cfg.snapshot) {
    std::ostringstream snap;
    write_snapshot_csv(run.state.grid, snap);
    run.initial_snapshot = snap.str();
  }
  auto provider = make_provider(ctx, run.sim_id);
  const bool journaling = cfg.journal || cfg.provider.kind == ProviderKind::LiveLLM;
  if (!journaling) {
    run_to_completion(run.state, *provider, cfg.sim);
    return;
  }
  std::optional<std::filesystem::path> path;
  if (!cfg.output_dir.empty()) {
    path = cfg.output_dir / "journal" / sim_file("sim_", run.sim_id, ".jsonl");
    std::filesystem::remove(*path);
  }
  JournalingProvider journaled(*provider, cfg.provider.prompt_template, path, run.journal);
  run_to_completion(run.state, journaled, cfg.sim);
}

}  // namespace

BatchResult run_batch(const ExperimentConfig& cfg) {
  cfg.validate();
  const ProviderContext ctx = prepare_providers(cfg);

  BatchResult result;
  result.config = cfg;
  result.started_at = utc_now();
  result.runs.resize(static_cast<std::size_t>(cfg.n_simulations));
  for (int i = 0; i < cfg.n_simulations; ++i) {
    result.runs[static_cast<std::size_t>(i)].sim_id = i;
    result.runs[static_cast<std::size_t>(i)].seed =
        derive_sim_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
  }
  if (!cfg.output_dir.empty() &&
      (cfg.journal || cfg.provider.kind == ProviderKind::LiveLLM)) {
    std::filesystem::create_directories(cfg.output_dir / "journal");
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> provider_failure{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.runs.size(); i = next++) {
      auto& run = result.runs[i];
      try {
        run_one(cfg, ctx, run);
        run.summary = summarize_simulation(run.state, cfg.sim.max_steps);
      } catch (const ProviderError& e) {
        run.aborted = true;
        run.abort_reason = e.what();
        provider_failure = true;
      } catch (const std::exception& e) {
        run.aborted = true;
        run.abort_reason = e.what();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(
      std::min(cfg.parallelism, std::max(1, cfg.n_simulations)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  result.provider_failure = provider_failure;

  std::vector<DecisionState> merged;
  for (const auto& run : result.runs) {
    if (run.aborted) continue;
    result.summaries.push_back(run.summary);
    for (const auto& d : run.state.decisions) merged.push_back(d.outcome.state);
  }
  if (!result.summaries.empty()) result.batch = aggregate_batch(result.summaries);
  result.series = yes_ratio_series(merged, 10);
  result.yes_stats = describe_series(result.series);
  result.finished_at = utc_now();

  if (!cfg.output_dir.empty()) write_outputs(result);
  return result;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_tables(const std::optional<BatchSummary>& batch,
                          const std::optional<YesRatioStats>& yes) {
  std::string out;
  if (batch) {
    out += table2_text(*batch);
    out += '\n';
    out += table3_text(*batch);
    out += '\n';
  } else {
    out += "No completed simulations.\n\n";
  }
  out += table4_text(yes);
  return out;
}

void write_outputs(const BatchResult& result) {
  const auto& cfg = result.config;
  const auto& dir = cfg.output_dir;
  std::filesystem::create_directories(dir);

  write_file(dir / "config.txt", config_to_text(cfg));

  {
    nlohmann::ordered_json m;
    m["tool"] = "tribe";
    m["preset"] = std::string(to_string(cfg.preset));
    m["provider"] = std::string(to_string(cfg.provider.kind));
    m["master_seed"] = cfg.master_seed;
    m["config_hash"] = config_hash(cfg);
    m["n_simulations"] = cfg.n_simulations;
    if (cfg.record_timestamps) {
      m["started_at"] = result.started_at;
      m["finished_at"] = result.finished_at;
    }
    auto sims = nlohmann::ordered_json::array();
    int aborted = 0;
    for (const auto& run : result.runs) {
      nlohmann::ordered_json s;
      s["sim_id"] = run.sim_id;
      s["seed"] = run.seed;
      s["status"] = run.aborted ? "aborted" : "ok";
      if (run.aborted) {
        s["reason"] = run.abort_reason;
        ++aborted;
      }
      sims.push_back(std::move(s));
    }
    m["aborted"] = aborted;
    m["simulations"] = std::move(sims);
    write_file(dir / "manifest.json", m.dump(2) + "\n");
  }

  auto sims = open_out(dir / "sims.csv");
  auto agents = open_out(dir / "agents.csv");
  auto trades = open_out(dir / "trades.csv");
  auto decisions = open_out(dir / "decisions.csv");
  sims << "sim_id,seed,status,rounds,max_steps,terminal_reason,initial_client_bonds,"
          "initial_client_cash,contacts\n";
  agents << "sim_id,mm_id,ceased_at_step,breadth,bond_rate,cash_rate\n";
  trades << "sim_id,step,mm_id,counterparty_kind,counterparty,direction,bond_qty,cash_qty\n";
  decisions << "sim_id,seq,step,mm_id,x,y,state,provider\n";

  for (const auto& run : result.runs) {
    const auto& st = run.state;
    sims << run.sim_id << ',' << run.seed << ',' << (run.aborted ? "aborted" : "ok") << ','
         << st.step << ',' << cfg.sim.max_steps << ',' << to_string(st.terminal) << ','
         << num(st.initial_client_bonds) << ',' << num(st.initial_client_cash) << ','
         << st.contacts << '\n';
    for (const auto& mm : st.mms) {
      agents << run.sim_id << ',' << mm.id << ','
             << (mm.ceased_at_step ? std::to_string(*mm.ceased_at_step) : std::string{}) << ','
             << mm.breadth << ',' << num(mm.bond_rate) << ',' << num(mm.cash_rate) << '\n';
    }
    for (const auto& t : st.trades) {
      trades << run.sim_id << ',' << t.step << ',' << t.mm_id << ',';
      if (const auto* pos = std::get_if<GridPos>(&t.counterparty)) {
        trades << "client," << pos->x << ':' << pos->y << ','
               << to_string(t.client_direction.value_or(Direction::Buy));
      } else {
        trades << "mm," << std::get<InterbankCounterparty>(t.counterparty).mm_id << ',';
      }
      trades << ',' << num(t.bond_qty) << ',' << num(t.cash_qty) << '\n';
    }
    for (const auto& d : st.decisions) {
      decisions << run.sim_id << ',' << d.query.sequence_no << ',' << d.query.step << ','
                << d.query.mm_id << ',' << d.query.client_position.x << ','
                << d.query.client_position.y << ',' << to_string(d.outcome.state) << ','
                << to_string(d.outcome.provider) << '\n';
    }
    if (cfg.snapshot && !run.initial_snapshot.empty()) {
      std::filesystem::create_directories(dir / "grids");
      write_file(dir / "grids" / sim_file("sim_", run.sim_id, ".csv"), run.initial_snapshot);
    }
  }
  for (auto* f : {&sims, &agents, &trades, &decisions}) {
    f->flush();
    if (!*f) throw IoError("failed writing logs in " + dir.string());
  }

  {
    auto out = open_out(dir / "summaries.csv");
    out << "sim_id,terminal_step,terminal_reason,max_life,mm_client_bond_pct,"
           "mm_client_cash_pct,interbank_bond_pct,interbank_cash_pct,contacts,"
           "decision_requests,yes_count,no_count,error_count,trade_count,interbank_count\n";
    for (const auto& s : result.summaries) {
      out << s.sim_id << ',' << s.terminal_step << ',' << to_string(s.terminal_reason) << ','
          << s.max_life << ',' << num(s.mm_client_bond_pct) << ',' << num(s.mm_client_cash_pct)
          << ',' << num(s.interbank_bond_pct) << ',' << num(s.interbank_cash_pct) << ','
          << s.contacts << ',' << s.decision_requests << ',' << s.yes_count << ','
          << s.no_count << ',' << s.error_count << ',' << s.trade_count << ','
          << s.interbank_count << '\n';
    }
  }
  {
    auto out = open_out(dir / "yes_ratio.csv");
    write_series_csv(result.series, out);
  }
  if (result.batch) {
    write_file(dir / "table2.csv", table2_csv(*result.batch));
    write_file(dir / "table3.csv", table3_csv(*result.batch));
  }
  write_file(dir / "table4.csv", table4_csv(result.yes_stats));
  write_file(dir / "tables.txt", format_tables(result.batch, result.yes_stats));

  if (cfg.journal || cfg.provider.kind == ProviderKind::LiveLLM) {
    auto out = open_out(dir / "journal.jsonl");
    for (const auto& run : result.runs)
      for (const auto& r : run.journal) out << to_json_line(r) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               std::size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    auto row = split_csv(line);
    if (row.size() != columns) throw IoError("malformed row in " + path.string());
    rows.push_back(std::move(row));
  }
  return rows;
}

int to_int(const std::string& s) { return std::stoi(s); }
double to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::map<int, SimulationLog> logs_from_dir(const std::filesystem::path& dir) {
  std::map<int, SimulationLog> logs;
  for (const auto& r : read_csv(dir / "sims.csv", 9)) {
    if (r[2] != "ok") continue;
    SimulationLog log;
    log.sim_id = to_int(r[0]);
    log.rounds = to_int(r[3]);
    log.max_steps = to_int(r[4]);
    const auto reason = parse_terminal_reason(r[5]);
    if (!reason) throw IoError("unknown terminal reason " + r[5]);
    log.terminal = *reason;
    log.initial_client_bonds = to_double(r[6]);
    log.initial_client_cash = to_double(r[7]);
    log.contacts = to_int(r[8]);
    logs.emplace(log.sim_id, std::move(log));
  }
  for (const auto& r : read_csv(dir / "agents.csv", 6)) {
    const auto it = logs.find(to_int(r[0]));
    if (it == logs.end()) continue;
    it->second.ceased_at.push_back(r[2].empty() ? std::nullopt : std::optional<int>(to_int(r[2])));
  }
  for (const auto& r : read_csv(dir / "trades.csv", 8)) {
    const auto it = logs.find(to_int(r[0]));
    if (it == logs.end()) continue;
    TradeRecord t;
    t.step = to_int(r[1]);
    t.mm_id = to_int(r[2]);
    if (r[3] == "client") {
      const auto colon = r[4].find(':');
      t.counterparty = GridPos{to_int(r[4].substr(0, colon)), to_int(r[4].substr(colon + 1))};
      t.client_direction = r[5] == "sell" ? Direction::Sell : Direction::Buy;
    } else {
      t.counterparty = InterbankCounterparty{to_int(r[4])};
    }
    t.bond_qty = to_double(r[6]);
    t.cash_qty = to_double(r[7]);
    it->second.trades.push_back(t);
  }
  for (const auto& r : read_csv(dir / "decisions.csv", 8)) {
    const auto it = logs.find(to_int(r[0]));
    if (it == logs.end()) continue;
    const auto state = parse_decision_state(r[6]);
    if (!state) throw IoError("unknown decision state " + r[6]);
    it->second.decisions.push_back(*state);
  }
  return logs;
}

}  // namespace

std::vector<SimulationSummary> summaries_from_logs(const std::filesystem::path& dir) {
  std::vector<SimulationSummary> out;
  for (const auto& [id, log] : logs_from_dir(dir)) out.push_back(summarize_simulation(log));
  return out;
}

std::vector<DecisionState> decisions_from_logs(const std::filesystem::path& dir) {
  std::vector<DecisionState> out;
  for (const auto& [id, log] : logs_from_dir(dir))
    out.insert(out.end(), log.decisions.begin(), log.decisions.end());
  return out;
}

std::string tables_from_dir(const std::filesystem::path& dir) {
  const auto logs = logs_from_dir(dir);
  std::vector<SimulationSummary> summaries;
  std::vector<DecisionState> decisions;
  for (const auto& [id, log] : logs) {
    summaries.push_back(summarize_simulation(log));
    decisions.insert(decisions.end(), log.decisions.begin(), log.decisions.end());
  }
  std::optional<BatchSummary> batch;
  if (!summaries.empty()) batch = aggregate_batch(summaries);
  return format_tables(batch, describe_series(yes_ratio_series(decisions, 10)));
}

}  // namespace tribe
