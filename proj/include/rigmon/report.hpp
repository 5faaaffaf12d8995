#pragma once

// Named pass/fail conditions shared by validators and certifiers.

#include <stdexcept>
#include <string>
#include <vector>

namespace rigmon {

struct Condition {
  std::string id;           // stable machine name, e.g. "lambda_not_one"
  std::string description;  // human statement of the condition
  bool passed = false;
  std::string detail;       // values involved when it failed
};

struct ConditionReport {
  std::vector<Condition> conditions;

  void add(std::string id, std::string description, bool passed, std::string detail = {}) {
    conditions.push_back({std::move(id), std::move(description), passed, std::move(detail)});
  }
  bool ok() const {
    for (const auto& c : conditions)
      if (!c.passed) return false;
    return true;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
      if (!c.passed) out.push_back(c.id);
    return out;
  }
  bool failed(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id && !c.passed) return true;
    return false;
  }
  std::string summary() const {
    std::string out;
    for (const auto& c : conditions) {
      if (c.passed) continue;
      if (!out.empty()) out += "; ";
      out += c.id + " (" + c.description + ")";
      if (!c.detail.empty()) out += ": " + c.detail;
    }
    return out.empty() ? "all conditions hold" : out;
  }
};

// Raised when input data violate named conditions; carries the full report.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ConditionReport report)
      : std::runtime_error("validation failed: " + report.summary()), report_(std::move(report)) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

// Raised when a constructed object fails a post-construction check.
class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(ConditionReport report)
      : std::runtime_error("certification failed: " + report.summary()), report_(std::move(report)) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

}  // namespace rigmon
