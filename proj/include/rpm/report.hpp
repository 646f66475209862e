#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rpm {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Named pass/fail checks plus named values (exact values as strings).
struct Report {
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> values;

  void check(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
  void value(std::string name, std::string v) { values.emplace_back(std::move(name), std::move(v)); }

  void append(const Report& o, const std::string& prefix = {}) {
    for (const auto& c : o.checks) checks.push_back({prefix + c.name, c.passed, c.detail});
    for (const auto& [k, v] : o.values) values.emplace_back(prefix + k, v);
  }

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(c.name + (c.detail.empty() ? "" : ": " + c.detail));
    return out;
  }
};

}  // namespace rpm
