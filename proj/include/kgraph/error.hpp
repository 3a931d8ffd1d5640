#pragma once

#include <stdexcept>
#include <string>

namespace kgraph {

// Every failure carries a stable kind name (e.g. "NonBijectiveRule") and a
// human-readable witness.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), detail_(what) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace kgraph
