#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace carnot {

struct Check {
  std::string name;
  bool passed = true;
  std::string witness; // empty on success
};

/// Ordered list of pass/fail checks. Failures never throw; they are entries.
struct CheckReport {
  std::vector<Check> checks;
  std::string note;

  void add(std::string name, bool passed, std::string witness = {})
  {
    checks.push_back({std::move(name), passed, std::move(witness)});
  }

  bool passed() const
  {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  const Check* find(const std::string& name) const
  {
    for (const auto& c : checks)
      if (c.name == name)
        return &c;
    return nullptr;
  }

  const Check* first_failure() const
  {
    for (const auto& c : checks)
      if (!c.passed)
        return &c;
    return nullptr;
  }
};

} // namespace carnot
