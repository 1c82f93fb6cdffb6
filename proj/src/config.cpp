#include "tpgf/config.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "tpgf/textio.hpp"

namespace tpgf::config {

namespace {

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int to_int(const std::string& v) { return static_cast<int>(textio::parse_int(v)); }

const std::vector<Field>& env_fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    auto dbl = [&f](const char* key, double env::EnvConfig::*member) {
      f.push_back({key,
                   [member](ExperimentConfig& c, const std::string& v) {
                     c.env.*member = textio::parse_double(v);
                   },
                   [member](const ExperimentConfig& c) {
                     return textio::format_double(c.env.*member);
                   }});
    };
    auto integer = [&f](const char* key, int env::EnvConfig::*member) {
      f.push_back({key,
                   [member](ExperimentConfig& c, const std::string& v) { c.env.*member = to_int(v); },
                   [member](const ExperimentConfig& c) { return std::to_string(c.env.*member); }});
    };
    dbl("x_min", &env::EnvConfig::x_min);
    dbl("x_max", &env::EnvConfig::x_max);
    dbl("y_goal", &env::EnvConfig::y_goal);
    dbl("y_spawn_min", &env::EnvConfig::y_spawn_min);
    dbl("y_spawn_max", &env::EnvConfig::y_spawn_max);
    integer("n_trees", &env::EnvConfig::n_trees);
    dbl("tree_radius_min", &env::EnvConfig::tree_radius_min);
    dbl("tree_radius_max", &env::EnvConfig::tree_radius_max);
    dbl("min_spare_distance", &env::EnvConfig::min_spare_distance);
    dbl("drone_half_width", &env::EnvConfig::drone_half_width);
    dbl("drone_half_height", &env::EnvConfig::drone_half_height);
    dbl("v_max", &env::EnvConfig::v_max);
    dbl("a_max", &env::EnvConfig::a_max);
    dbl("dt", &env::EnvConfig::dt);
    integer("max_steps", &env::EnvConfig::max_steps);
    integer("lidar_n_beams", &env::EnvConfig::lidar_n_beams);
    dbl("lidar_range", &env::EnvConfig::lidar_range);
    integer("n_speed_levels", &env::EnvConfig::n_speed_levels);
    dbl("dynamic_fraction", &env::EnvConfig::dynamic_fraction);
    dbl("dynamic_speed_max", &env::EnvConfig::dynamic_speed_max);
    return f;
  }();
  return fields;
}

const std::vector<Field>& evo_fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    auto dbl = [&f](const char* key, double evo::EvolutionParams::*member) {
      f.push_back({key,
                   [member](ExperimentConfig& c, const std::string& v) {
                     c.evo.*member = textio::parse_double(v);
                   },
                   [member](const ExperimentConfig& c) {
                     return textio::format_double(c.evo.*member);
                   }});
    };
    auto integer = [&f](const char* key, int evo::EvolutionParams::*member) {
      f.push_back({key,
                   [member](ExperimentConfig& c, const std::string& v) { c.evo.*member = to_int(v); },
                   [member](const ExperimentConfig& c) { return std::to_string(c.evo.*member); }});
    };
    dbl("maxConstValue", &evo::EvolutionParams::maxConstValue);
    integer("maxProgramSize", &evo::EvolutionParams::maxProgramSize);
    dbl("minConstValue", &evo::EvolutionParams::minConstValue);
    dbl("pAdd", &evo::EvolutionParams::pAdd);
    dbl("pConstantMutation", &evo::EvolutionParams::pConstantMutation);
    dbl("pDelete", &evo::EvolutionParams::pDelete);
    dbl("pMutate", &evo::EvolutionParams::pMutate);
    dbl("pSwap", &evo::EvolutionParams::pSwap);
    integer("maxInitOutEdges", &evo::EvolutionParams::maxInitOutEdges);
    integer("maxOutEdges", &evo::EvolutionParams::maxOutEdges);
    integer("nbRoots", &evo::EvolutionParams::nbRoots);
    dbl("pEdgeAddition", &evo::EvolutionParams::pEdgeAddition);
    dbl("pEdgeDeletion", &evo::EvolutionParams::pEdgeDeletion);
    dbl("pEdgeDestChange", &evo::EvolutionParams::pEdgeDestChange);
    dbl("pEdgeDestIsAction", &evo::EvolutionParams::pEdgeDestIsAction);
    dbl("pProgramMutation", &evo::EvolutionParams::pProgramMutation);
    dbl("ratio_deleted_roots", &evo::EvolutionParams::ratio_deleted_roots);
    integer("episodes_per_evaluation", &evo::EvolutionParams::episodes_per_evaluation);
    return f;
  }();
  return fields;
}

const std::vector<Field>& trainer_fields() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    f.push_back({"n_generations",
                 [](ExperimentConfig& c, const std::string& v) { c.n_generations = to_int(v); },
                 [](const ExperimentConfig& c) { return std::to_string(c.n_generations); }});
    f.push_back({"eval_scenarios",
                 [](ExperimentConfig& c, const std::string& v) { c.eval_scenarios = to_int(v); },
                 [](const ExperimentConfig& c) { return std::to_string(c.eval_scenarios); }});
    f.push_back({"master_seed",
                 [](ExperimentConfig& c, const std::string& v) { c.master_seed = textio::parse_u64(v); },
                 [](const ExperimentConfig& c) { return std::to_string(c.master_seed); }});
    f.push_back({"reward_mode",
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v == "tpg") {
                     c.reward_mode = env::RewardMode::tpg;
                   } else if (v == "ppo") {
                     c.reward_mode = env::RewardMode::ppo;
                   } else {
                     throw ConfigError("reward_mode must be 'tpg' or 'ppo', got '" + v + "'");
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(c.reward_mode == env::RewardMode::tpg ? "tpg" : "ppo");
                 }});
    f.push_back({"label",
                 [](ExperimentConfig& c, const std::string& v) { c.label = v; },
                 [](const ExperimentConfig& c) { return c.label; }});
    return f;
  }();
  return fields;
}

const std::vector<std::pair<const char*, const std::vector<Field>*>>& sections() {
  static const std::vector<std::pair<const char*, const std::vector<Field>*>> s = {
      {"env", &env_fields()}, {"evo", &evo_fields()}, {"trainer", &trainer_fields()}};
  return s;
}

const Field* find_field(const std::vector<Field>& fields, const std::string& key) {
  for (const Field& f : fields) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

void set_field(ExperimentConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, int line) {
  const std::vector<Field>* fields = nullptr;
  for (const auto& [name, f] : sections()) {
    if (section == name) fields = f;
  }
  if (fields == nullptr) {
    throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]");
  }
  const Field* field = find_field(*fields, key);
  if (field == nullptr) {
    throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "' in [" +
                      section + "]");
  }
  try {
    field->set(cfg, value);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "': " + e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    env.validate();
    evo.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (n_generations < 1) throw ConfigError("trainer: n_generations >= 1 required");
  if (eval_scenarios < 1) throw ConfigError("trainer: eval_scenarios >= 1 required");
  if (label.empty()) throw ConfigError("trainer: label must not be empty");
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;

  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                        "' before any [section]");
    }
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' in [" +
                        section + "]");
    }
    set_field(cfg, section, key, value, line_no);
  }
  return cfg;
}

std::string write_experiment_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [name, fields] : sections()) {
    out += std::string("[") + name + "]\n";
    for (const Field& f : *fields) {
      out += std::string(f.key) + " = " + f.get(cfg) + "\n";
    }
    out += "\n";
  }
  return out;
}

env::EnvConfig parse_env_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream stream(text);
  std::string raw;
  std::set<std::string> seen;
  int line_no = 0;

  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    set_field(cfg, "env", key, value, line_no);
  }
  return cfg.env;
}

std::string write_env_config(const env::EnvConfig& env_cfg) {
  ExperimentConfig cfg;
  cfg.env = env_cfg;
  std::string out;
  for (const Field& f : env_fields()) {
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

void apply_override(ExperimentConfig& cfg, const std::string& dotted_key,
                    const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("override key '" + dotted_key + "' must be section.key");
  }
  set_field(cfg, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value, 0);
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& [name, fields] : sections()) {
    for (const Field& f : *fields) out.push_back(std::string(name) + "." + f.key);
  }
  return out;
}

SweepGrid parse_sweep_grid(const std::string& text) {
  SweepGrid grid;
  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  std::set<std::string> seen;

  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = v1, v2, ...");
    }
    const std::string key = trim(line.substr(0, eq));
    if (find_field(evo_fields(), key) == nullptr) {
      throw ConfigError("line " + std::to_string(line_no) + ": '" + key +
                        "' is not an [evo] hyperparameter");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate grid key '" + key + "'");
    }
    std::vector<std::string> values;
    std::istringstream vs(line.substr(eq + 1));
    std::string item;
    while (std::getline(vs, item, ',')) {
      item = trim(item);
      if (item.empty()) {
        throw ConfigError("line " + std::to_string(line_no) + ": empty value in grid");
      }
      // validate eagerly against a scratch config
      ExperimentConfig scratch;
      set_field(scratch, "evo", key, item, line_no);
      values.push_back(item);
    }
    if (values.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": grid key '" + key + "' has no values");
    }
    grid.emplace_back(key, std::move(values));
  }
  return grid;
}

std::uint64_t digest_bytes(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t config_digest(const ExperimentConfig& cfg) {
  return digest_bytes(write_experiment_config(cfg));
}

}  // namespace tpgf::config
