#pragma once

// The acceptance suite run by `qcompat selftest` and the acceptance test binary.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcompat/preserver.hpp"

namespace qcompat {

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  /// Dimension range for the criteria whose dimensions are not fixed.
  int dim_lo = 2;
  int dim_hi = 6;
  /// Reduced sample counts.
  bool quick = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  int cases = 0;
  int failures = 0;
  /// Deterministic numbers backing the verdict (worst errors, counts).
  nlohmann::json metrics = nlohmann::json::object();
  double elapsed_ms = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
  /// Everything except timings; identical across runs with the same options.
  nlohmann::json payload(const AcceptanceOptions& options) const;
};

struct AdversarialCase {
  std::string name;
  int dim = 0;
  StateTransform transform;
};

/// Transforms that are not of the form A -> U A U^* although each preserves
/// spectra or agrees with a symmetry on most inputs.
std::vector<AdversarialCase> adversarial_suite(std::uint64_t seed);

/// Criteria 1-9, then a second in-process run compared byte for byte (criterion 10).
/// A "PASS"/"FAIL" line per criterion goes to `log` when it is non-null.
AcceptanceReport run_acceptance(const AcceptanceOptions& options, std::ostream* log = nullptr);

/// "PASS  3  name: detail" style line.
std::string format_line(const CriterionResult& c);

}  // namespace qcompat
