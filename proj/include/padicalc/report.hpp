#pragma once
// Suite reports: one entry per check, order-stable (sorted by name), JSON
// schema versioned with "schema": 1.  Exit status 0 exactly when no check
// failed.

#include <algorithm>
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "padicalc/params.hpp"

namespace padicalc {

struct Check {
  std::string name;
  enum class Status { Pass, Fail, Skip } status = Status::Pass;
  std::string witness;  // serialized counterexample for failures
};

struct Report {
  std::string suite;
  TruncationParams params;
  std::vector<Check> checks;
  double wall_ms = 0;

  void add(const std::string& name, bool ok, const std::string& witness = "") {
    checks.push_back({name, ok ? Check::Status::Pass : Check::Status::Fail,
                      ok ? std::string() : witness});
  }
  void skip(const std::string& name, const std::string& why) {
    checks.push_back({name, Check::Status::Skip, why});
  }

  void sort() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const Check& a, const Check& b) { return a.name < b.name; });
  }

  int failures() const {
    int n = 0;
    for (auto& c : checks)
      if (c.status == Check::Status::Fail) ++n;
    return n;
  }
  int exit_code() const { return failures() == 0 ? 0 : 1; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["suite"] = suite;
    j["params"] = {{"p", params.p},       {"s", params.s},         {"prec", params.N},
                   {"deg_lo", params.degLo}, {"deg_hi", params.degHi}, {"order", params.K},
                   {"level", params.m},   {"seed", params.seed}};
    j["checks"] = nlohmann::json::array();
    for (auto& c : checks) {
      nlohmann::json e;
      e["name"] = c.name;
      e["status"] = c.status == Check::Status::Pass   ? "pass"
                    : c.status == Check::Status::Fail ? "fail"
                                                      : "skip";
      if (!c.witness.empty()) e["witness"] = c.witness;
      j["checks"].push_back(e);
    }
    j["wall_ms"] = wall_ms;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "suite " << suite << " (p=" << params.p << " s=" << params.s << " N=" << params.N
       << " K=" << params.K << " window=[" << params.degLo << "," << params.degHi
       << "] level=" << params.m << " seed=" << params.seed << ")\n";
    for (auto& c : checks) {
      os << "  [" << (c.status == Check::Status::Pass   ? "pass"
                      : c.status == Check::Status::Fail ? "FAIL"
                                                        : "skip")
         << "] " << c.name;
      if (!c.witness.empty()) os << "  -- " << c.witness;
      os << "\n";
    }
    os << checks.size() - failures() << "/" << checks.size() << " checks passed\n";
    return os.str();
  }
};

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace padicalc
