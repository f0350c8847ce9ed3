#include "ppath/io/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ppath/io/csv.hpp"

namespace ppath::io {

namespace {

using rl::RunConfig;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
  throw Error(ErrorKind::InvalidConfig, key + ": expected " + want + ", got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  if constexpr (std::is_unsigned_v<T>) {
    if (!value.empty() && value.front() == '-') bad_value(key, value, "a non-negative integer");
  }
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) {
    bad_value(key, value, std::is_integral_v<T> ? "an integer" : "a number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "true/false");
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field num(T RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& k, const std::string& v) { c.*member = parse_number<T>(k, v); },
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*member);
            else return std::to_string(c.*member);
          }};
}

template <typename Sub, typename T>
Field nested(Sub RunConfig::*sub, T Sub::*member) {
  return {[sub, member](RunConfig& c, const std::string& k, const std::string& v) {
            if constexpr (std::is_same_v<T, bool>) (c.*sub).*member = parse_bool(k, v);
            else (c.*sub).*member = parse_number<T>(k, v);
          },
          [sub, member](const RunConfig& c) -> std::string {
            const T& x = (c.*sub).*member;
            if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_floating_point_v<T>) return format_double(x);
            else return std::to_string(x);
          }};
}

Field goal(int axis) {
  return {[axis](RunConfig& c, const std::string& k, const std::string& v) { c.env.goal(axis) = parse_number<double>(k, v); },
          [axis](const RunConfig& c) { return format_double(c.env.goal(axis)); }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    t["seed"] = num(&RunConfig::seed);
    t["max_steps"] = num(&RunConfig::max_steps);
    t["eval_interval"] = num(&RunConfig::eval_interval);
    t["eval_episodes"] = num(&RunConfig::eval_episodes);
    t["eval_seed"] = num(&RunConfig::eval_seed);
    t["archive_interval"] = num(&RunConfig::archive_interval);
    t["pptb.enabled"] = {[](RunConfig& c, const std::string& k, const std::string& v) { c.pptb_enabled = parse_bool(k, v); },
                         [](const RunConfig& c) -> std::string { return c.pptb_enabled ? "true" : "false"; }};
    t["pptb.r_t"] = nested(&RunConfig::pptb, &PptbConfig::r_t);
    t["pptb.r_b"] = nested(&RunConfig::pptb, &PptbConfig::r_b);
    t["pptb.p_b"] = nested(&RunConfig::pptb, &PptbConfig::p_b);
    t["pptb.t_s"] = nested(&RunConfig::pptb, &PptbConfig::t_s);
    t["pptb.t_p"] = nested(&RunConfig::pptb, &PptbConfig::t_p);
    t["pptb.capacity_k"] = nested(&RunConfig::pptb, &PptbConfig::capacity_k);
    t["pptb.per_layer"] = nested(&RunConfig::pptb, &PptbConfig::per_layer);
    t["env.dt"] = nested(&RunConfig::env, &rl::PointMassConfig::dt);
    t["env.action_cost"] = nested(&RunConfig::env, &rl::PointMassConfig::action_cost);
    t["env.horizon"] = nested(&RunConfig::env, &rl::PointMassConfig::horizon);
    t["env.goal_x"] = goal(0);
    t["env.goal_y"] = goal(1);
    t["agent.hidden"] = nested(&RunConfig::agent, &rl::Td3Config::hidden);
    t["agent.gamma"] = nested(&RunConfig::agent, &rl::Td3Config::gamma);
    t["agent.tau"] = nested(&RunConfig::agent, &rl::Td3Config::tau);
    t["agent.actor_lr"] = nested(&RunConfig::agent, &rl::Td3Config::actor_lr);
    t["agent.critic_lr"] = nested(&RunConfig::agent, &rl::Td3Config::critic_lr);
    t["agent.batch_size"] = nested(&RunConfig::agent, &rl::Td3Config::batch_size);
    t["agent.replay_capacity"] = nested(&RunConfig::agent, &rl::Td3Config::replay_capacity);
    t["agent.start_steps"] = nested(&RunConfig::agent, &rl::Td3Config::start_steps);
    t["agent.expl_noise"] = nested(&RunConfig::agent, &rl::Td3Config::expl_noise);
    t["agent.policy_noise"] = nested(&RunConfig::agent, &rl::Td3Config::policy_noise);
    t["agent.noise_clip"] = nested(&RunConfig::agent, &rl::Td3Config::noise_clip);
    t["agent.policy_delay"] = nested(&RunConfig::agent, &rl::Td3Config::policy_delay);
    t["agent.relu_critics"] = nested(&RunConfig::agent, &rl::Td3Config::relu_critics);
    t["agent.reward_scale"] = nested(&RunConfig::agent, &rl::Td3Config::reward_scale);
    return t;
  }();
  return table;
}

}  // namespace

rl::RunConfig parse_run_config(const std::string& text) {
  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = fields().find(key);
    if (it == fields().end()) throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    it->second.set(config, key, value);
  }
  config.validate();
  return config;
}

rl::RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::string format_run_config(const rl::RunConfig& config) {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

std::vector<std::string> run_config_keys() {
  std::vector<std::string> keys;
  for (const auto& kv : fields()) keys.push_back(kv.first);
  return keys;
}

}  // namespace ppath::io
