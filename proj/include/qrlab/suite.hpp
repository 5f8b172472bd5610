#pragma once

// Verification suites: statistical and instance checks for every module
// contract, aggregated into a machine-readable report.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qrlab {

struct SuiteConfig {
  std::uint64_t seed = 42;
  int max_dim = 16;
  std::map<std::string, double> tolerance_overrides;
  std::vector<std::string> suites;  // empty: all
  std::string out_path;
  bool inject_violation = false;

  double tol(const std::string& name, double fallback) const;
};

enum class CheckStatus { pass, fail, indeterminate };

struct CheckRecord {
  std::string name;
  std::string ref;       // contract id "module.operation"
  int acceptance = 0;    // acceptance criterion number, 0 if none
  double lhs = 0.0;
  double rhs = 0.0;
  CheckStatus status = CheckStatus::fail;
  double runtime_ms = 0.0;
  std::vector<std::string> caveats;
};

struct Report {
  std::uint64_t seed = 0;
  int max_dim = 16;
  std::vector<std::string> suites_run;
  std::vector<CheckRecord> records;

  int passed() const;
  int failed() const;
  int indeterminate() const;
  bool all_passed() const { return failed() == 0; }

  std::string to_json(bool include_runtime = true) const;
  std::string to_text() const;
};

// Contract ids a record may reference; one per module type/operation.
const std::set<std::string>& contract_registry();

// Known suite names: bounds, resource, epfi, commitment, locc.
const std::vector<std::string>& all_suites();

Report run_suite(const SuiteConfig& config);

}  // namespace qrlab
