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

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "tribe/error.hpp"
#include "tribe/harness.hpp"

namespace tribe {

std::string_view to_string(Preset p) noexcept {
  switch (p) {
    case Preset::Exp1: return "exp1";
    case Preset::Exp2: return "exp2";
    case Preset::Exp3: return "exp3";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

std::optional<Preset> parse_preset(std::string_view s) {
  if (s == "exp1") return Preset::Exp1;
  if (s == "exp2") return Preset::Exp2;
  if (s == "exp3") return Preset::Exp3;
  if (s == "custom") return Preset::Custom;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (n_simulations < 1) throw ConfigError("n_simulations must be at least 1");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  sim.validate();
  provider.validate();
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("invalid number for " + key + ": '" + v + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("invalid integer for " + key + ": '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + v + "'");
}

struct Field {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
  bool echoed = true;  // part of config.txt and the config hash
};

#define TRIBE_DOUBLE_FIELD(key, member)                                                   \
  Field {                                                                                  \
    key, [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(key, v); }, \
        [](const ExperimentConfig& c) { return fmt_double(c.member); }                     \
  }
#define TRIBE_INT_FIELD(key, member)                                                        \
  Field {                                                                                    \
    key, [](ExperimentConfig& c, const std::string& v) { c.member = parse_int<int>(key, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }                   \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      TRIBE_INT_FIELD("grid_width", sim.landscape.grid_width),
      TRIBE_INT_FIELD("grid_height", sim.landscape.grid_height),
      TRIBE_DOUBLE_FIELD("bond_mu", sim.landscape.bond_mu),
      TRIBE_DOUBLE_FIELD("bond_sigma", sim.landscape.bond_sigma),
      TRIBE_DOUBLE_FIELD("cash_mu", sim.landscape.cash_mu),
      TRIBE_DOUBLE_FIELD("cash_sigma", sim.landscape.cash_sigma),
      TRIBE_DOUBLE_FIELD("max_bonds", sim.landscape.max_bonds),
      TRIBE_DOUBLE_FIELD("max_cash", sim.landscape.max_cash),
      TRIBE_DOUBLE_FIELD("availability_p", sim.landscape.availability_p),
      TRIBE_DOUBLE_FIELD("direction_p", sim.landscape.direction_p),
      Field{"lognormal_params",
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "underlying") c.sim.landscape.lognormal_params = LognormalParams::Underlying;
              else if (v == "arithmetic") c.sim.landscape.lognormal_params = LognormalParams::Arithmetic;
              else throw ConfigError("lognormal_params must be underlying or arithmetic");
            },
            [](const ExperimentConfig& c) -> std::string {
              return c.sim.landscape.lognormal_params == LognormalParams::Underlying ? "underlying"
                                                                                     : "arithmetic";
            }},
      TRIBE_INT_FIELD("n_agents", sim.agents.n_agents),
      TRIBE_DOUBLE_FIELD("cost_min", sim.agents.cost_min),
      TRIBE_DOUBLE_FIELD("cost_max", sim.agents.cost_max),
      TRIBE_DOUBLE_FIELD("init_bonds_min", sim.agents.init_bonds_min),
      TRIBE_DOUBLE_FIELD("init_bonds_max", sim.agents.init_bonds_max),
      TRIBE_DOUBLE_FIELD("init_cash_min", sim.agents.init_cash_min),
      TRIBE_DOUBLE_FIELD("init_cash_max", sim.agents.init_cash_max),
      TRIBE_INT_FIELD("breadth_min", sim.agents.breadth_min),
      TRIBE_INT_FIELD("breadth_max", sim.agents.breadth_max),
      Field{"cease_rule",
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "either") c.sim.agents.cease_rule = CeaseRule::EitherExhausted;
              else if (v == "both") c.sim.agents.cease_rule = CeaseRule::BothExhausted;
              else throw ConfigError("cease_rule must be either or both");
            },
            [](const ExperimentConfig& c) -> std::string {
              return c.sim.agents.cease_rule == CeaseRule::EitherExhausted ? "either" : "both";
            }},
      TRIBE_INT_FIELD("max_steps", sim.max_steps),
      TRIBE_DOUBLE_FIELD("runway_threshold", sim.runway_threshold),
      Field{"provider",
            [](ExperimentConfig& c, const std::string& v) {
              const auto k = parse_provider_kind(v);
              if (!k) throw ConfigError("unknown provider '" + v + "'");
              c.provider.kind = *k;
            },
            [](const ExperimentConfig& c) { return std::string(to_string(c.provider.kind)); }},
      TRIBE_DOUBLE_FIELD("bernoulli_p", provider.bernoulli_p),
      Field{"prompt_template",
            [](ExperimentConfig& c, const std::string& v) {
              const auto t = parse_prompt_template(v);
              if (!t) throw ConfigError("unknown prompt template '" + v + "'");
              c.provider.prompt_template = *t;
            },
            [](const ExperimentConfig& c) {
              return std::string(to_string(c.provider.prompt_template));
            }},
      Field{"endpoint_url", [](ExperimentConfig& c, const std::string& v) { c.provider.endpoint_url = v; },
            [](const ExperimentConfig& c) { return c.provider.endpoint_url; }},
      Field{"model_name", [](ExperimentConfig& c, const std::string& v) { c.provider.model_name = v; },
            [](const ExperimentConfig& c) { return c.provider.model_name; }},
      Field{"api_key_env", [](ExperimentConfig& c, const std::string& v) { c.provider.api_key_env = v; },
            [](const ExperimentConfig& c) { return c.provider.api_key_env; }},
      TRIBE_DOUBLE_FIELD("temperature", provider.temperature),
      TRIBE_INT_FIELD("max_retries", provider.max_retries),
      TRIBE_INT_FIELD("timeout_ms", provider.timeout_ms),
      TRIBE_DOUBLE_FIELD("rate_limit_rps", provider.rate_limit_rps),
      Field{"replay_path", [](ExperimentConfig& c, const std::string& v) { c.provider.replay_path = v; },
            [](const ExperimentConfig& c) { return c.provider.replay_path; }},
      TRIBE_DOUBLE_FIELD("burst_stay_yes", provider.burst_stay_yes),
      TRIBE_DOUBLE_FIELD("burst_stay_no", provider.burst_stay_no),
      TRIBE_INT_FIELD("n_simulations", n_simulations),
      Field{"master_seed",
            [](ExperimentConfig& c, const std::string& v) {
              c.master_seed = parse_int<std::uint64_t>("master_seed", v);
            },
            [](const ExperimentConfig& c) { return std::to_string(c.master_seed); }},
      Field{"journal", [](ExperimentConfig& c, const std::string& v) { c.journal = parse_bool("journal", v); },
            [](const ExperimentConfig& c) -> std::string { return c.journal ? "true" : "false"; }},
      Field{"snapshot", [](ExperimentConfig& c, const std::string& v) { c.snapshot = parse_bool("snapshot", v); },
            [](const ExperimentConfig& c) -> std::string { return c.snapshot ? "true" : "false"; }},
      // Execution settings: they never change numeric output, so they stay
      // out of the echoed config and its hash.
      Field{"output_dir", [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
            [](const ExperimentConfig& c) { return c.output_dir.string(); }, false},
      Field{"parallelism",
            [](ExperimentConfig& c, const std::string& v) { c.parallelism = parse_int<int>("parallelism", v); },
            [](const ExperimentConfig& c) { return std::to_string(c.parallelism); }, false},
      Field{"record_timestamps",
            [](ExperimentConfig& c, const std::string& v) {
              c.record_timestamps = parse_bool("record_timestamps", v);
            },
            [](const ExperimentConfig& c) -> std::string { return c.record_timestamps ? "true" : "false"; },
            false},
  };
  return kFields;
}

#undef TRIBE_DOUBLE_FIELD
#undef TRIBE_INT_FIELD

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (key == f.name) return &f;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

ExperimentConfig preset_defaults(Preset preset) {
  ExperimentConfig c;
  c.preset = preset;
  switch (preset) {
    case Preset::Exp1:
      c.provider.kind = ProviderKind::Bernoulli;
      c.provider.bernoulli_p = 0.5;
      c.sim.landscape.availability_p = 0.20;
      c.n_simulations = 200;
      break;
    case Preset::Exp2:
      c.provider.kind = ProviderKind::Replay;
      c.provider.replay_path = std::string(kBuiltinAversionCorpus);
      c.provider.prompt_template = PromptTemplate::Aversion1;
      c.sim.landscape.availability_p = 0.20;
      c.n_simulations = 200;
      break;
    case Preset::Exp3:
      c.provider.kind = ProviderKind::SyntheticBursty;
      c.provider.prompt_template = PromptTemplate::Timeliness;
      c.sim.landscape.availability_p = 0.40;
      c.n_simulations = 150;
      break;
    case Preset::Custom:
      break;
  }
  return c;
}

// Keys meaningful only for some provider kinds.
bool key_applies(std::string_view key, ProviderKind kind) {
  const bool prompted = kind == ProviderKind::LiveLLM || kind == ProviderKind::Replay;
  if (key == "prompt_template") return prompted;
  if (key == "bernoulli_p") return kind == ProviderKind::Bernoulli;
  if (key == "burst_stay_yes" || key == "burst_stay_no") return kind == ProviderKind::SyntheticBursty;
  if (key == "replay_path") return kind == ProviderKind::Replay;
  return true;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (f == nullptr) throw ConfigError("unknown config key '" + key + "'");
  f->set(cfg, value);
}

bool setting_applies(std::string_view key, ProviderKind kind) { return key_applies(key, kind); }

ExperimentConfig resolve_config(const Overrides& settings) {
  Preset preset = Preset::Custom;
  for (const auto& [key, value] : settings) {
    if (key != "preset") continue;
    const auto p = parse_preset(value);
    if (!p) throw ConfigError("unknown preset '" + value + "'");
    preset = *p;
  }
  return resolve_preset(preset, settings);
}

ExperimentConfig resolve_preset(Preset preset, const Overrides& overrides) {
  ExperimentConfig cfg = preset_defaults(preset);
  std::set<std::string> explicit_keys;
  for (const auto& [key, value] : overrides) {
    if (key == "preset") continue;
    apply_setting(cfg, key, value);
    explicit_keys.insert(key);
  }
  for (const auto& key : explicit_keys) {
    if (!key_applies(key, cfg.provider.kind)) {
      throw ConfigError("setting '" + key + "' contradicts provider '" +
                        std::string(to_string(cfg.provider.kind)) + "' of preset " +
                        std::string(to_string(preset)));
    }
  }
  cfg.validate();
  return cfg;
}

Overrides parse_config_text(std::string_view text) {
  Overrides out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key != "preset" && find_field(key) == nullptr) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Overrides read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::string out = "preset = " + std::string(to_string(cfg.preset)) + "\n";
  for (const auto& f : fields()) {
    if (!f.echoed || !key_applies(f.name, cfg.provider.kind)) continue;
    out += f.name;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

std::optional<std::string> get_setting(const ExperimentConfig& cfg, std::string_view key) {
  if (key == "preset") return std::string(to_string(cfg.preset));
  const Field* f = find_field(key);
  if (f == nullptr) return std::nullopt;
  return f->get(cfg);
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = config_to_text(cfg);
  const std::string blob = "blob " + std::to_string(text.size()) + '\0' + text;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw IoError("SHA-1 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace tribe
