#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cga {

struct CheckResult {
  enum class Status { Pass, Warn, Fail };
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};

// Ordered list of named checks. WARN entries document known discrepancies
// between printed formulas and the computed resolution; they never fail a run.
class VerifyReport {
 public:
  void pass(std::string name, std::string detail = {});
  void warn(std::string name, std::string detail);
  void fail(std::string name, std::string detail);
  void add(CheckResult r) { checks_.push_back(std::move(r)); }
  void merge(const VerifyReport& o);

  bool ok() const;  // no FAIL entries
  size_t warn_count() const;
  size_t fail_count() const;
  size_t pass_count() const;
  const std::vector<CheckResult>& checks() const { return checks_; }

  void print(std::ostream& os, bool verbose = false) const;
  std::string to_json_string() const;

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace cga
