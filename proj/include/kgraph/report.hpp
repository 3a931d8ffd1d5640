#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace kgraph {

// One named identity checked over some envelope of samples.
struct Check {
  explicit Check(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::vector<std::string> witnesses;  // the first few failures

  static constexpr std::size_t kMaxWitnesses = 5;

  bool pass() const { return failed == 0; }

  void record(bool ok, const std::function<std::string()>& what) {
    ++checked;
    if (ok) return;
    ++failed;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(what());
  }
};

struct Report {
  std::vector<std::pair<std::string, std::string>> envelope;  // depth, ring, sample counts, ...
  std::vector<Check> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
  const Check& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    static const Check none;
    return none;
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass()) return &c;
    return nullptr;
  }
};

}  // namespace kgraph
