#include "stirval/report.hpp"

namespace stirval {

std::string to_string(Outcome outcome) {
  switch (outcome) {
  case Outcome::Pass:
    return "pass";
  case Outcome::Fail:
    return "fail";
  case Outcome::Skipped:
    return "skipped";
  case Outcome::Observed:
    return "observed";
  }
  return "unknown";
}

void VerifierReport::fail(std::map<std::string, std::string> witness, std::string note) {
  outcome = Outcome::Fail;
  if (!counterexample)
    counterexample = std::move(witness);
  notes.push_back(std::move(note));
}

} // namespace stirval
