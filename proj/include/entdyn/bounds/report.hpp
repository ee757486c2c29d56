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

#ifndef ENTDYN_BOUNDS_REPORT_HPP
#define ENTDYN_BOUNDS_REPORT_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "entdyn/common.hpp"

namespace entdyn::bounds {

/// exact: a finite-size inequality that must hold on every instance.
/// statistical: a Monte Carlo comparison with 3-standard-error slack.
/// trend: a fitted scaling across a sweep (pass/fail only under --strict).
/// info: measured numbers with no pass/fail semantics.
enum class CheckKind { exact, statistical, trend, info };

inline std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::exact: return "exact";
    case CheckKind::statistical: return "statistical";
    case CheckKind::trend: return "trend";
    case CheckKind::info: return "info";
  }
  return "?";
}

/// One inequality lhs <= rhs. margin = rhs - lhs; pass iff
/// margin >= -(tolerance + 3 * statistical_error).
struct CertificateReport {
  std::string theorem_id;
  nlohmann::json instance = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  double statistical_error = 0.0;
  bool pass = false;
  CheckKind kind = CheckKind::exact;
  std::string notes;

  static CertificateReport make(std::string id, double lhs, double rhs, double tolerance, double statistical_error, CheckKind kind,
                                nlohmann::json instance = nlohmann::json::object(), std::string notes = {}) {
    CertificateReport r;
    r.theorem_id = std::move(id);
    r.instance = std::move(instance);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.tolerance = tolerance;
    r.statistical_error = statistical_error;
    r.kind = kind;
    r.pass = std::isfinite(r.margin) && r.margin >= -(tolerance + 3.0 * statistical_error);
    r.notes = std::move(notes);
    return r;
  }

  /// A yes/no condition with no natural lhs/rhs (recorded as lhs 0, rhs +-1).
  static CertificateReport flag(std::string id, bool ok, CheckKind kind, nlohmann::json instance = nlohmann::json::object(),
                                std::string notes = {}) {
    return make(std::move(id), 0.0, ok ? 1.0 : -1.0, 0.0, 0.0, kind, std::move(instance), std::move(notes));
  }

  /// Numbers reported without pass/fail semantics.
  static CertificateReport info(std::string id, double lhs, double rhs, nlohmann::json instance = nlohmann::json::object(),
                                std::string notes = {}) {
    CertificateReport r = make(std::move(id), lhs, rhs, 0.0, 0.0, CheckKind::info, std::move(instance), std::move(notes));
    r.pass = true;
    return r;
  }

  nlohmann::json to_json() const {
    return {{"theorem_id", theorem_id}, {"kind", to_string(kind)},
            {"instance", instance},     {"lhs", lhs},
            {"rhs", rhs},               {"margin", margin},
            {"tolerance", tolerance},   {"statistical_error", statistical_error},
            {"pass", pass},             {"notes", notes}};
  }
};

/// Running record of many evaluations of one exact inequality lhs <= rhs.
/// Keeps the count, the number of violations and the tightest point.
class InequalityTally {
 public:
  InequalityTally() = default;
  InequalityTally(std::string id, double tolerance) : id_(std::move(id)), tolerance_(tolerance) {}

  void add(double lhs, double rhs) {
    ++count_;
    const double m = rhs - lhs;
    if (!(m >= -tolerance_)) ++violations_;
    if (count_ == 1 || m < worst_margin_ || std::isnan(m)) {
      worst_margin_ = m;
      worst_lhs_ = lhs;
      worst_rhs_ = rhs;
    }
  }

  const std::string& id() const { return id_; }
  std::size_t count() const { return count_; }
  std::size_t violations() const { return violations_; }
  double worst_margin() const { return worst_margin_; }
  bool ok() const { return violations_ == 0; }

  void merge(const InequalityTally& other) {
    if (other.count_ == 0) return;
    if (count_ == 0 || other.worst_margin_ < worst_margin_) {
      worst_margin_ = other.worst_margin_;
      worst_lhs_ = other.worst_lhs_;
      worst_rhs_ = other.worst_rhs_;
    }
    count_ += other.count_;
    violations_ += other.violations_;
  }

  CertificateReport report(const nlohmann::json& instance = nlohmann::json::object()) const {
    CertificateReport r = CertificateReport::make(id_, worst_lhs_, worst_rhs_, tolerance_, 0.0, CheckKind::exact, instance,
                                                  std::to_string(count_) + " evaluations, " + std::to_string(violations_) +
                                                      " violations; lhs/rhs at the tightest point");
    r.pass = count_ > 0 && violations_ == 0;
    r.instance["evaluations"] = count_;
    r.instance["violations"] = violations_;
    return r;
  }

 private:
  std::string id_;
  double tolerance_ = tol::kExact;
  std::size_t count_ = 0;
  std::size_t violations_ = 0;
  double worst_margin_ = std::numeric_limits<double>::infinity();
  double worst_lhs_ = 0.0;
  double worst_rhs_ = 0.0;
};

inline nlohmann::json reports_to_json(const std::vector<CertificateReport>& reports) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : reports) a.push_back(r.to_json());
  return a;
}

/// Exact-kind failures (these make a run fail regardless of --strict).
inline std::size_t count_failures(const std::vector<CertificateReport>& reports, bool include_statistical) {
  std::size_t n = 0;
  for (const auto& r : reports) {
    if (r.pass || r.kind == CheckKind::info) continue;
    if (r.kind == CheckKind::exact || include_statistical) ++n;
  }
  return n;
}

}  // namespace entdyn::bounds

#endif  // ENTDYN_BOUNDS_REPORT_HPP
