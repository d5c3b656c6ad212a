#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stirval {

enum class Outcome {
  Pass,
  Fail,
  // Precondition of the claim not met; nothing was asserted.
  Skipped,
  // Ran in observational mode: results are recorded but not asserted.
  Observed,
};

std::string to_string(Outcome outcome);

// Pass/fail record for one quantitative claim over a parameter range.
//
// A failing report always carries a counterexample whose fields are plain
// integers, so it can be re-checked with exact arithmetic alone.
struct VerifierReport {
  std::string claim;
  std::map<std::string, std::string> parameters;
  Outcome outcome = Outcome::Pass;
  std::optional<std::map<std::string, std::string>> counterexample;
  std::map<std::string, std::int64_t> derived;
  std::vector<std::string> notes;
  std::int64_t runtime_ms = 0;
  std::vector<VerifierReport> children;

  bool passed() const { return outcome != Outcome::Fail; }
  void fail(std::map<std::string, std::string> witness, std::string note);
};

} // namespace stirval
