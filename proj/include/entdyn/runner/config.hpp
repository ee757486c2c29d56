// Copyright 2026 The entdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTDYN_RUNNER_CONFIG_HPP
#define ENTDYN_RUNNER_CONFIG_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "entdyn/common.hpp"

namespace entdyn::runner {

inline constexpr int kSchemaVersion = 1;

inline constexpr std::array<const char*, 8> kExperiments = {"page",      "lattice", "lattice_ti_equilibration", "charge",
                                                            "spin_glass", "syk",     "thermo_curves",            "moment_check"};

/// Invalid configuration, naming the offending field.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string field, const std::string& reason)
      : InvalidArgument("config field '" + field + "': " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Typed access to the "parameters" object. Every key must be read exactly
/// through get/get_or; finish() rejects the rest as unknown.
class Params {
 public:
  explicit Params(const nlohmann::json& j) : j_(j) {}

  template <class T>
  T get(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(key, "required");
    return convert<T>(key);
  }

  template <class T>
  T get_or(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const nlohmann::json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(key, "required");
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ConfigError(k, "unknown parameter");
  }

 private:
  template <class T>
  T convert(const std::string& key) const {
    const auto& v = j_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) throw ConfigError(key, "must be non-negative");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(key, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(key, "expected a string");
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
      for (const auto& x : v)
        if (!x.is_number()) throw ConfigError(key, "expected an array of numbers");
    }
    return v.get<T>();
  }

  const nlohmann::json& j_;
  std::set<std::string> used_;
};

/// One experiment run. `parameters` holds the experiment-specific fields
/// and is validated when the experiment is dispatched.
struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string experiment;
  std::uint64_t master_seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  std::string output_dir;  // empty: chosen by the caller

  nlohmann::json to_json() const {
    nlohmann::json j = {{"schema_version", schema_version},
                        {"experiment", experiment},
                        {"master_seed", master_seed},
                        {"parameters", parameters}};
    if (!output_dir.empty()) j["output_dir"] = output_dir;
    return j;
  }

  static RunConfig from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
    for (const auto& [k, v] : j.items()) {
      static const std::set<std::string> known = {"schema_version", "experiment", "master_seed", "parameters", "output_dir"};
      if (!known.count(k)) throw ConfigError(k, "unknown field");
    }
    RunConfig c;
    if (!j.contains("schema_version")) throw ConfigError("schema_version", "required");
    if (!j["schema_version"].is_number_integer()) throw ConfigError("schema_version", "expected an integer");
    c.schema_version = j["schema_version"].get<int>();
    if (c.schema_version != kSchemaVersion)
      throw ConfigError("schema_version", "unsupported version " + std::to_string(c.schema_version) + " (expected " +
                                              std::to_string(kSchemaVersion) + ")");
    if (!j.contains("experiment") || !j["experiment"].is_string()) throw ConfigError("experiment", "required string");
    c.experiment = j["experiment"].get<std::string>();
    if (std::find_if(kExperiments.begin(), kExperiments.end(), [&](const char* e) { return c.experiment == e; }) == kExperiments.end())
      throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
    if (j.contains("master_seed")) {
      const auto& s = j["master_seed"];
      if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
        throw ConfigError("master_seed", "expected a non-negative integer");
      c.master_seed = s.get<std::uint64_t>();
    }
    if (j.contains("parameters")) {
      if (!j["parameters"].is_object()) throw ConfigError("parameters", "expected an object");
      c.parameters = j["parameters"];
    }
    if (j.contains("output_dir")) {
      if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
      c.output_dir = j["output_dir"].get<std::string>();
    }
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    return from_json(j);
  }
};

}  // namespace entdyn::runner

#endif  // ENTDYN_RUNNER_CONFIG_HPP
