#include "cga/report.hpp"

#include <ostream>

#include "json.hpp"

namespace cga {

namespace {
const char* status_name(CheckResult::Status s) {
  switch (s) {
    case CheckResult::Status::Pass:
      return "PASS";
    case CheckResult::Status::Warn:
      return "WARN";
    case CheckResult::Status::Fail:
      return "FAIL";
  }
  return "?";
}
}  // namespace

void VerifyReport::pass(std::string name, std::string detail) {
  checks_.push_back({std::move(name), CheckResult::Status::Pass, std::move(detail)});
}

void VerifyReport::warn(std::string name, std::string detail) {
  checks_.push_back({std::move(name), CheckResult::Status::Warn, std::move(detail)});
}

void VerifyReport::fail(std::string name, std::string detail) {
  checks_.push_back({std::move(name), CheckResult::Status::Fail, std::move(detail)});
}

void VerifyReport::merge(const VerifyReport& o) {
  checks_.insert(checks_.end(), o.checks_.begin(), o.checks_.end());
}

bool VerifyReport::ok() const { return fail_count() == 0; }

size_t VerifyReport::warn_count() const {
  size_t n = 0;
  for (const auto& c : checks_)
    if (c.status == CheckResult::Status::Warn) ++n;
  return n;
}

size_t VerifyReport::fail_count() const {
  size_t n = 0;
  for (const auto& c : checks_)
    if (c.status == CheckResult::Status::Fail) ++n;
  return n;
}

size_t VerifyReport::pass_count() const {
  size_t n = 0;
  for (const auto& c : checks_)
    if (c.status == CheckResult::Status::Pass) ++n;
  return n;
}

void VerifyReport::print(std::ostream& os, bool verbose) const {
  for (const auto& c : checks_) {
    if (!verbose && c.status == CheckResult::Status::Pass && c.detail.empty()) {
      os << "  [PASS] " << c.name << "\n";
      continue;
    }
    os << "  [" << status_name(c.status) << "] " << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  os << "summary: " << pass_count() << " pass, " << warn_count() << " warn, " << fail_count()
     << " fail\n";
}

std::string VerifyReport::to_json_string() const {
  nlohmann::ordered_json j;
  j["schema"] = "cga.report/1";
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    j["checks"].push_back({{"name", c.name}, {"status", status_name(c.status)}, {"detail", c.detail}});
  }
  j["summary"] = {{"pass", pass_count()}, {"warn", warn_count()}, {"fail", fail_count()}};
  return j.dump(2);
}

}  // namespace cga
