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

#ifndef ENTDYN_MODELS_EXPORT_HPP
#define ENTDYN_MODELS_EXPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "entdyn/qcore/operator.hpp"

namespace entdyn::models {

// Wire format: {"num_qubits": N, "terms": [{"coefficient": c, "factors": {"0": "X", "3": "Z"}}, ...]}

inline nlohmann::json operator_to_json(const qcore::HermitianOperator& op) {
  require(op.is_pauli_sum(), "operator_to_json: operator has no Pauli form");
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : op.terms()) {
    nlohmann::json f = nlohmann::json::object();
    for (const auto& [site, p] : t.factors()) f[std::to_string(site)] = std::string(1, static_cast<char>(p));
    terms.push_back({{"coefficient", t.coefficient()}, {"factors", f}});
  }
  return {{"num_qubits", op.num_qubits()}, {"terms", terms}};
}

inline qcore::HermitianOperator operator_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("num_qubits") && j.contains("terms"), "operator_from_json: missing num_qubits or terms");
  std::vector<qcore::PauliString> terms;
  for (const auto& t : j.at("terms")) {
    std::map<int, qcore::Pauli> f;
    for (const auto& [site, label] : t.at("factors").items()) {
      const auto s = label.get<std::string>();
      require(s.size() == 1, "operator_from_json: Pauli label must be one of X, Y, Z");
      f.emplace(std::stoi(site), qcore::pauli_from_char(s[0]));
    }
    terms.emplace_back(t.at("coefficient").get<double>(), std::move(f));
  }
  return qcore::HermitianOperator(j.at("num_qubits").get<int>(), std::move(terms));
}

}  // namespace entdyn::models

#endif  // ENTDYN_MODELS_EXPORT_HPP
