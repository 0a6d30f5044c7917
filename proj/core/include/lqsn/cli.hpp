#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lqsn {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct Report {
  std::string command;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, std::string>> info;
  bool all_pass() const;
};

std::string report_human(const Report& report);
std::string report_json(const Report& report);

/// Command dispatch. argv excludes the program name. Exit codes:
/// 0 all checks pass, 1 any failed check, 2 usage or input error.
int run_command(const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err);

}  // namespace lqsn
