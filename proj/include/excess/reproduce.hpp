#pragma once

// The twelve acceptance checks, each reporting computed values beside their
// references and pinned tolerances.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "excess/report.hpp"

namespace excess {

struct CheckItem {
  std::string label;
  double computed = 0.0;
  std::optional<double> reference;
  std::string rule;  // e.g. "|x - ref| <= 2e-3"
  bool ok = false;
};

struct CheckResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::vector<CheckItem> items;
  std::vector<std::string> notes;  // informational lines, do not affect the verdict
  std::string error;               // set when a numerical error aborted the check
  bool numerical_error = false;
};

struct ReproduceOptions {
  Constants constants;
  SCFConfig scf;       // grid size and r_max overrides land here
  GNConfig gn;
  int property_samples = 100;
  int alpha_seeds = 64;
  std::uint64_t seed = 20240601;
};

/// Lazily computed objects shared between checks.
class ReproduceContext {
 public:
  explicit ReproduceContext(ReproduceOptions opt);
  const ReproduceOptions& options() const { return opt_; }
  const GNGroundState& ground_state();
  const CriticalPoint& critical(double Z);

 private:
  ReproduceOptions opt_;
  std::optional<GNGroundState> gs_;
  std::map<double, CriticalPoint> critical_;
};

using CheckFn = std::function<CheckResult(ReproduceContext&)>;

/// The checks in order 1..12.
const std::vector<std::pair<int, CheckFn>>& acceptance_checks();

/// Runs one check, converting a thrown Error into a failed result.
CheckResult run_check(int id, ReproduceContext& ctx);

std::vector<CheckResult> reproduce_all(const ReproduceOptions& opt = {});

/// Random smooth decaying profile used by the property sweeps.
RadialProfile random_profile(const RadialGrid& grid, std::uint64_t seed);

Json to_json(const CheckResult& r);
/// One-line summary "[PASS] #n title" / "[FAIL] ...".
std::string summary_line(const CheckResult& r);

}  // namespace excess
