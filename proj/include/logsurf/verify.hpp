#pragma once

#include <string>
#include <vector>

#include "logsurf/json_io.hpp"

namespace logsurf {

struct CheckResult {
  std::string id;      // c1 .. c12
  std::string anchor;  // the statement being checked
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

struct VerifyOptions {
  double quad_tol = 1e-12;  // applied to every entire map the checks build
};

/// c1 .. c12, one per acceptance criterion.
const std::vector<std::string>& check_ids();
bool is_check_id(const std::string& id);

/// Throws Error(InvalidArgument) for an unknown id.
CheckResult run_check(const std::string& id, const VerifyOptions& opt = {});

/// Empty `ids` runs every check.
VerificationReport run_checks(const std::vector<std::string>& ids, const VerifyOptions& opt = {});

/// "c1  PASS  measured ...  tol ...  anchor  [t s]  detail"
std::string format_line(const CheckResult& r);

Json to_json(const VerificationReport& report);

}  // namespace logsurf
