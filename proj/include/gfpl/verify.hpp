// SPDX-License-Identifier: Apache-2.0
#ifndef GFPL_VERIFY_HPP
#define GFPL_VERIFY_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "gfpl/config.hpp"

namespace gfpl {

enum class CriterionStatus { Pass, Fail, NotApplicable };

struct CriterionResult {
  int id = 0;
  std::string name;
  CriterionStatus status = CriterionStatus::Fail;
  std::string details;
  double runtime_seconds = 0.0;  // reported on stdout, kept out of files
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

// Runs the full verification suite against `config`, writing result files
// and report.json under out_dir. Criteria that need the strict regime are
// marked not-applicable otherwise.
VerifyReport run_acceptance(const RunConfig& config, const std::string& out_dir,
                            int threads);

// report.json payload; deterministic bytes for a fixed config and seed.
nlohmann::json report_json(const VerifyReport& report);

std::string to_string(CriterionStatus s);

}  // namespace gfpl

#endif  // GFPL_VERIFY_HPP
