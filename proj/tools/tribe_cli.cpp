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

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tribe/tribe.h"

namespace {

constexpr int kExitConfig = 1;

struct ConfigDeleter {
  void operator()(tribe_config* c) const { tribe_config_free(c); }
};
struct BatchDeleter {
  void operator()(tribe_batch* b) const { tribe_batch_free(b); }
};
using ConfigPtr = std::unique_ptr<tribe_config, ConfigDeleter>;
using BatchPtr = std::unique_ptr<tribe_batch, BatchDeleter>;

int exit_code(tribe_status s) {
  switch (s) {
    case TRIBE_OK: return 0;
    case TRIBE_ERR_CONFIG: return 1;
    case TRIBE_ERR_PROVIDER: return 2;
    case TRIBE_ERR_PARTIAL: return 3;
    default: return kExitConfig;
  }
}

int report(tribe_status s) {
  std::fprintf(stderr, "tribe: %s\n", tribe_last_error());
  return exit_code(s);
}

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  tribe_string_free(s);
  return out;
}

bool is_preset(const std::string& s) {
  return s == "exp1" || s == "exp2" || s == "exp3" || s == "custom";
}

struct RunOptions {
  std::string target;
  std::optional<int> sims;
  std::optional<unsigned long long> seed;
  std::optional<std::string> provider;
  std::optional<double> availability;
  std::optional<std::string> out;
  std::optional<int> parallel;
  bool live = false;
  std::vector<std::string> sets;
};

tribe_status set(tribe_config* cfg, const std::string& key, const std::string& value) {
  return tribe_config_set(cfg, key.c_str(), value.c_str());
}

// Applies flag overrides on top of the loaded config; flags win.
tribe_status apply_flags(tribe_config* cfg, const RunOptions& o) {
  tribe_status s = TRIBE_OK;
  auto apply = [&](const std::string& k, const std::string& v) {
    if (s == TRIBE_OK) s = set(cfg, k, v);
  };
  if (o.live && o.provider && *o.provider != "live") {
    std::fprintf(stderr, "tribe: --live contradicts --provider %s\n", o.provider->c_str());
    return TRIBE_ERR_CONFIG;
  }
  if (o.provider) apply("provider", *o.provider);
  if (o.live) apply("provider", "live");
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "tribe: --set expects key=value, got '%s'\n", kv.c_str());
      return TRIBE_ERR_CONFIG;
    }
    apply(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.sims) apply("n_simulations", std::to_string(*o.sims));
  if (o.seed) apply("master_seed", std::to_string(*o.seed));
  if (o.availability) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *o.availability);
    apply("availability_p", buf);
  }
  if (o.out) apply("output_dir", *o.out);
  if (o.parallel) apply("parallelism", std::to_string(*o.parallel));
  return s;
}

int execute(tribe_config* cfg, const std::string& default_out) {
  char* raw = nullptr;
  if (tribe_config_get(cfg, "output_dir", &raw) != TRIBE_OK) return report(TRIBE_ERR_CONFIG);
  if (take(raw).empty()) {
    if (const auto s = set(cfg, "output_dir", default_out); s != TRIBE_OK) return report(s);
  }
  tribe_config_get(cfg, "output_dir", &raw);
  const std::string out_dir = take(raw);

  tribe_batch* batch_raw = nullptr;
  const tribe_status status = tribe_batch_run(cfg, &batch_raw);
  BatchPtr batch(batch_raw);
  if (!batch) return report(status);
  if (status != TRIBE_OK) std::fprintf(stderr, "tribe: %s\n", tribe_last_error());

  char* tables = nullptr;
  if (tribe_batch_tables(batch.get(), &tables) == TRIBE_OK) {
    std::fputs(take(tables).c_str(), stdout);
  }
  std::fprintf(stderr, "tribe: %zu simulations, outputs in %s\n", tribe_batch_size(batch.get()),
               out_dir.c_str());
  return exit_code(status);
}

int cmd_run(const RunOptions& o) {
  tribe_config* raw = nullptr;
  tribe_status s = is_preset(o.target) ? tribe_config_new(o.target.c_str(), &raw)
                                       : tribe_config_load(o.target.c_str(), &raw);
  ConfigPtr cfg(raw);
  if (s != TRIBE_OK) return report(s);
  if ((s = apply_flags(cfg.get(), o)) != TRIBE_OK) {
    return s == TRIBE_ERR_CONFIG && *tribe_last_error() == '\0' ? exit_code(s) : report(s);
  }
  const std::string stem = is_preset(o.target)
                               ? o.target
                               : std::filesystem::path(o.target).stem().string();
  return execute(cfg.get(), "tribe-out/" + stem);
}

int cmd_replay(const std::string& journal, const std::string& config_path,
               const std::optional<std::string>& out) {
  tribe_config* raw = nullptr;
  tribe_status s = tribe_config_load(config_path.c_str(), &raw);
  ConfigPtr cfg(raw);
  if (s != TRIBE_OK) return report(s);
  if ((s = set(cfg.get(), "provider", "replay")) != TRIBE_OK) return report(s);
  if ((s = set(cfg.get(), "replay_path", journal)) != TRIBE_OK) return report(s);
  if (out && (s = set(cfg.get(), "output_dir", *out)) != TRIBE_OK) return report(s);
  // The source run's output_dir would be overwritten otherwise.
  if (!out && (s = set(cfg.get(), "output_dir", "")) != TRIBE_OK) return report(s);
  return execute(cfg.get(), "tribe-out/replay");
}

int cmd_tables(const std::string& dir) {
  char* text = nullptr;
  const tribe_status s = tribe_tables_from_dir(dir.c_str(), &text);
  if (s != TRIBE_OK) return report(s);
  std::fputs(take(text).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TRIBE bond-market agent-based simulator"};
  app.set_version_flag("--version", tribe_version());
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a batch from a preset or a config file");
  run_cmd->add_option("target", run.target, "exp1 | exp2 | exp3 | custom | path to config")
      ->required();
  run_cmd->add_option("--sims", run.sims, "Number of simulations")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--provider", run.provider, "bernoulli | live | replay | bursty");
  run_cmd->add_option("--availability", run.availability, "Client availability probability")
      ->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--parallel", run.parallel, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--live", run.live, "Use the live chat-completions provider");
  run_cmd->add_option("--set", run.sets, "Override any config key (key=value)");

  std::string journal;
  std::string config_path;
  std::optional<std::string> replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a batch against a recorded journal");
  replay_cmd->add_option("journal", journal, "Journal JSONL file")->required();
  replay_cmd->add_option("config", config_path, "Config file (e.g. a run's config.txt)")
      ->required();
  replay_cmd->add_option("--out", replay_out, "Output directory");

  std::string tables_dir;
  auto* tables_cmd = app.add_subcommand("tables", "Print Tables 2, 3 and 4 from a run's logs");
  tables_cmd->add_option("output-dir", tables_dir, "Output directory of a previous run")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (*run_cmd) return cmd_run(run);
  if (*replay_cmd) return cmd_replay(journal, config_path, replay_out);
  if (*tables_cmd) return cmd_tables(tables_dir);
  return kExitConfig;
}
