#pragma once

// Outcome of a verification: a list of named checks with pass/fail and a
// short detail string (the first mismatch, or the compared window).

#include <json.hpp>

#include <string>
#include <vector>

namespace rlab {

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

class Report {
 public:
  Report() = default;
  explicit Report(std::string title) : title_(std::move(title)) {}

  void add(std::string name, bool passed, std::string detail = {}) {
    items_.push_back({std::move(name), passed, std::move(detail)});
  }
  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& it : other.items_) items_.push_back({prefix + it.name, it.passed, it.detail});
  }

  bool passed() const {
    for (const auto& it : items_)
      if (!it.passed) return false;
    return true;
  }
  const std::vector<CheckItem>& items() const { return items_; }
  const std::string& title() const { return title_; }

  std::string text() const {
    std::string out;
    if (!title_.empty()) out += title_ + "\n";
    for (const auto& it : items_) {
      out += std::string(it.passed ? "  PASS  " : "  FAIL  ") + it.name;
      if (!it.detail.empty()) out += "  (" + it.detail + ")";
      out += "\n";
    }
    return out;
  }

  nlohmann::json json() const {
    nlohmann::json j;
    j["title"] = title_;
    j["passed"] = passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& it : items_) j["checks"].push_back({{"name", it.name}, {"passed", it.passed}, {"detail", it.detail}});
    return j;
  }

 private:
  std::string title_;
  std::vector<CheckItem> items_;
};

}  // namespace rlab
